#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "nqac/csv.hpp"
#include "nqac/figures.hpp"
#include "nqac/model.hpp"
#include "nqac/parallel.hpp"
#include "nqac/sweep.hpp"

using namespace nqac;

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

Range parse_range(const std::vector<std::string>& v) {
    if (v.size() != 4) throw InputError("--sweep needs: name start stop steps");
    Range r;
    r.name = v[0];
    try {
        std::size_t pos = 0;
        r.start = std::stod(v[1], &pos);
        if (pos != v[1].size()) throw std::invalid_argument(v[1]);
        r.stop = std::stod(v[2], &pos);
        if (pos != v[2].size()) throw std::invalid_argument(v[2]);
        r.steps = std::stoi(v[3], &pos);
        if (pos != v[3].size()) throw std::invalid_argument(v[3]);
    } catch (const std::logic_error&) {
        throw InputError("bad --sweep values for '" + v[0] + "'");
    }
    return r;
}

struct Options {
    std::map<std::string, std::string> params;
    std::vector<Range> sweeps;
    std::optional<int> jobs;
    std::optional<std::string> format;
    std::optional<std::string> output;
};

// flat key = value file; keys mirror the command-line names
Options read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file '" + path + "'");
    Options o;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InputError("config line " + std::to_string(n) + " has no '='");
        const std::string k = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        if (k == "sweep") {
            std::istringstream ss(v);
            std::vector<std::string> parts;
            for (std::string t; ss >> t;) parts.push_back(t);
            o.sweeps.push_back(parse_range(parts));
        } else if (k == "jobs") {
            o.jobs = std::stoi(v);
        } else if (k == "format") {
            o.format = v;
        } else if (k == "output") {
            o.output = v;
        } else {
            o.params[k] = v;
        }
    }
    return o;
}

int run(int argc, char** argv) {
    CLI::App app{"Mean-field toolkit for nested quantum annealing correction"};
    app.allow_extras();
    app.set_version_flag("--version", std::string("nqac ") + kVersion);
    std::string command;
    std::vector<std::vector<std::string>> sweep_args;
    int jobs = 0;
    std::string format, output, config, out_dir = "figures";
    int figure = 0;
    app.add_option("command", command, "fe-scan, saddle, critline, classify, lambdac, barrier, gap-instanton, "
                                       "gap-spinwave, meta-fm, meta-af, occupancy, hybrid-critline, exact-spectrum, "
                                       "exact-gap or reproduce")
        ->required();
    app.add_option("--sweep", sweep_args, "name start stop steps (up to two)")->expected(4)->allow_extra_args(false);
    app.add_option("--jobs", jobs, "worker threads (default: NQAC_JOBS or hardware)");
    app.add_option("--format", format, "csv or json");
    app.add_option("--output,-o", output, "output file (default: stdout)");
    app.add_option("--config", config, "key = value file");
    app.add_option("--figure", figure, "figure id for reproduce (1-17)");
    app.add_option("--out-dir", out_dir, "directory for reproduce output");
    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    Options opt;
    if (!config.empty()) opt = read_config(config);
    for (const auto& v : sweep_args) {
        if (opt.sweeps.size() && &v == &sweep_args.front()) opt.sweeps.clear();
        opt.sweeps.push_back(parse_range(v));
    }
    if (jobs > 0) opt.jobs = jobs;
    if (!format.empty()) opt.format = format;
    if (!output.empty()) opt.output = output;

    // remaining tokens are --name value or --name=value parameter pairs
    auto extras = app.remaining();
    for (std::size_t i = 0; i < extras.size(); ++i) {
        std::string tok = extras[i];
        if (tok.rfind("--", 0) != 0) throw InputError("unexpected argument '" + tok + "'");
        tok = tok.substr(2);
        const auto eq = tok.find('=');
        if (eq != std::string::npos) {
            opt.params[tok.substr(0, eq)] = tok.substr(eq + 1);
        } else {
            if (i + 1 >= extras.size()) throw InputError("parameter '--" + tok + "' has no value");
            opt.params[tok] = extras[++i];
        }
    }
    const int nj = opt.jobs.value_or(default_jobs());
    if (nj < 1) throw InputError("--jobs must be >= 1");

    if (command == "reproduce") {
        auto fo = reproduce(figure, out_dir, nj);
        for (const auto& f : fo.files) std::cout << f << '\n';
        int bad = 0;
        for (const auto& l : fo.landmarks) {
            const bool ok = std::abs(l.computed - l.expected) <= l.tolerance;
            bad += !ok;
            std::cerr << (ok ? "ok   " : "off  ") << l.name << ": " << std::setprecision(10) << l.computed
                      << " (expected " << l.expected << " +- " << l.tolerance << ")\n";
        }
        return 0;
    }

    SweepSpec spec;
    spec.command = command;
    spec.fixed = opt.params;
    spec.swept = opt.sweeps;
    spec.jobs = nj;
    for (const auto& r : spec.swept) spec.fixed.erase(r.name);
    const Table t = run_sweep(spec);
    const std::string fmt = opt.format.value_or("csv");
    if (fmt != "csv" && fmt != "json") throw InputError("--format must be csv or json");

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (opt.output) {
        file.open(*opt.output);
        if (!file) throw InputError("cannot write '" + *opt.output + "'");
        os = &file;
    }
    const std::string stamp = iso_timestamp();
    if (fmt == "csv")
        write_csv(*os, t, stamp);
    else
        write_json(*os, t, stamp);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
