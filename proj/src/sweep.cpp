#include "nqac/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <regex>
#include <set>

#include "nqac/exact.hpp"
#include "nqac/gap.hpp"
#include "nqac/metastability.hpp"
#include "nqac/model.hpp"
#include "nqac/parallel.hpp"
#include "nqac/phase.hpp"
#include "nqac/saddle.hpp"

namespace nqac {

namespace {

const std::vector<std::string> kNumeric = {"p", "q", "J", "lambda", "eta", "gamma", "T", "C",
                                           "m", "k_over_N", "N", "k", "upper", "code_space"};
const std::vector<std::string> kText = {"coupling", "trace", "axis", "instance"};

const std::regex kScaled("^(lambda|gamma|T|eta)_over_C([0-9]*)$");

struct Point {
    ModelParams pr;
    std::map<std::string, double> num;
    std::map<std::string, std::string> text;

    bool has(const std::string& k) const { return num.count(k) > 0; }
    double get(const std::string& k) const {
        auto it = num.find(k);
        if (it == num.end()) throw InputError("command needs parameter '" + k + "'");
        return it->second;
    }
    int get_int(const std::string& k) const {
        const double v = get(k);
        if (v != std::floor(v)) throw InputError("parameter '" + k + "' must be an integer");
        return int(v);
    }
    std::string get_text(const std::string& k, const std::string& dflt = "") const {
        auto it = text.find(k);
        return it == text.end() ? dflt : it->second;
    }
};

struct Result {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::string fmt(double x) { return format_number(x); }
std::string fmt(bool b) { return b ? "1" : "0"; }
std::string fmt(const std::optional<double>& x) {
    return x ? format_number(*x) : format_number(std::numeric_limits<double>::quiet_NaN());
}

double parse_double(const std::string& name, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0') throw InputError("parameter '" + name + "' is not a number: '" + v + "'");
    return x;
}

std::string base_name(const std::string& name) {
    std::smatch m;
    if (std::regex_match(name, m, kScaled)) return m[1];
    return name;
}

// Applies one (name, value) to the point; scaled names need C already set.
void assign(Point& pt, const std::string& name, double v) {
    std::smatch m;
    if (std::regex_match(name, m, kScaled)) {
        const int k = m[2].length() == 0 ? 1 : std::stoi(m[2]);
        const double x = v * std::pow(pt.pr.nesting, k);
        const std::string b = m[1];
        if (b == "lambda") pt.pr.lambda = x;
        else if (b == "gamma") pt.pr.gamma = x;
        else if (b == "T") pt.pr.temperature = x;
        else pt.pr.eta = x;
        pt.num[b] = x;
        return;
    }
    pt.num[name] = v;
    if (name == "p") {
        if (v != std::floor(v)) throw InputError("p must be an integer");
        pt.pr.p = int(v);
    } else if (name == "q") {
        if (v != std::floor(v)) throw InputError("q must be an integer");
        pt.pr.q = int(v);
    } else if (name == "J") pt.pr.J = v;
    else if (name == "lambda") pt.pr.lambda = v;
    else if (name == "eta") pt.pr.eta = v;
    else if (name == "gamma") pt.pr.gamma = v;
    else if (name == "T") pt.pr.temperature = v;
    else if (name == "C") pt.pr.nesting = v;
}

std::string exponent(int n) { return n == 1 ? "" : std::to_string(n); }

Result one_row(std::vector<std::string> cols, std::vector<std::string> row) { return {std::move(cols), {std::move(row)}}; }

int order_exponent(const ModelParams& pr) { return pr.coupling == Coupling::antiferro ? pr.q : pr.p; }

EncodedInstance instance_for(const Point& pt, HamiltonianForm& form) {
    const std::string path = pt.get_text("instance");
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw InputError("cannot open instance file '" + path + "'");
        form = HamiltonianForm::pairwise;
        return read_triplets(in);
    }
    const double C = pt.pr.nesting;
    if (C != std::floor(C)) throw InputError("exact commands need an integer C");
    PSpinTerms t;
    t.p = pt.pr.p;
    t.q = pt.pr.q;
    t.J = pt.pr.J;
    t.lambda = pt.pr.lambda;
    t.coupling = pt.pr.coupling;
    form = t.coupling == Coupling::ferro ? HamiltonianForm::pspin_ferro : HamiltonianForm::pspin_antiferro;
    return encode_pspin(pt.get_int("N"), int(C), t);
}

MetaAxis meta_axis(const std::string& s) {
    if (s == "gamma_over_C") return MetaAxis::gamma_over_C;
    if (s == "T_over_C") return MetaAxis::T_over_C;
    if (s == "lambda") return MetaAxis::lambda;
    throw InputError("trace must be one of gamma_over_C, T_over_C, lambda (got '" + s + "')");
}

using Command = std::function<Result(const Point&, const SweepSpec&)>;

const std::map<std::string, Command>& commands() {
    static const std::map<std::string, Command> table = {
        {"fe-scan",
         [](const Point& pt, const SweepSpec&) {
             const double m = pt.get("m");
             const Landscape L = symmetric_landscape(pt.pr);
             const double F = L.free_energy(m);
             return one_row({"F", "F_normalized"}, {fmt(F), fmt(F / pt.pr.norm_scale())});
         }},
        {"saddle",
         [](const Point& pt, const SweepSpec&) {
             Result r;
             if (pt.has("k_over_N")) {
                 const double x = pt.get("k_over_N");
                 r.columns = {"w1", "w2", "F", "stability", "residual"};
                 for (const auto& s : solve_sectored(pt.pr, {1.0 - x, x}))
                     r.rows.push_back({fmt(s.config.sectors[0].w), fmt(s.config.sectors[1].w), fmt(s.free_energy),
                                       to_string(s.stability), fmt(s.residual)});
             } else {
                 r.columns = {"w", "multiplicity", "F", "stability", "residual"};
                 for (const auto& s : solve_symmetric(pt.pr))
                     r.rows.push_back({fmt(s.config.sectors[0].w), std::to_string(s.multiplicity), fmt(s.free_energy), to_string(s.stability),
                                       fmt(s.residual)});
             }
             return r;
         }},
        {"critline",
         [](const Point& pt, const SweepSpec& spec) {
             bool gamma_swept = false;
             for (const auto& rg : spec.swept) gamma_swept |= base_name(rg.name) == "gamma";
             std::string axis = pt.get_text("axis", gamma_swept ? "T_of_gamma" : "gamma_of_T");
             const double C = pt.pr.nesting;
             if (axis == "T_of_gamma") {
                 auto c = critical_line_p2(pt.pr, CriticalAxis::T_of_gamma, {pt.pr.gamma / C});
                 return one_row({"T_c_over_C", "present"}, {fmt(c[0].y), fmt(c[0].present)});
             }
             if (axis != "gamma_of_T") throw InputError("axis must be T_of_gamma or gamma_of_T");
             auto c = critical_line_p2(pt.pr, CriticalAxis::gamma_of_T, {pt.pr.temperature / C});
             return one_row({"gamma_c_over_C", "present"}, {fmt(c[0].y), fmt(c[0].present)});
         }},
        {"classify",
         [](const Point& pt, const SweepSpec&) {
             auto r = classify_transition(pt.pr);
             const std::string e = exponent(order_exponent(pt.pr) - 1);
             return one_row({"gamma_c1_over_C" + e, "gamma_c2_over_C" + e, "order", "barrier_height", "barrier_width"},
                            {fmt(r.gamma_c1), fmt(r.gamma_c2), to_string(r.order), fmt(r.barrier_height),
                             fmt(r.barrier_width)});
         }},
        {"lambdac",
         [](const Point& pt, const SweepSpec&) {
             auto l = lambda_critical(pt.pr, pt.pr.temperature);
             return one_row({"lambda_c_over_C" + exponent(pt.pr.p - 2), "present"}, {fmt(l), fmt(l.has_value())});
         }},
        {"barrier",
         [](const Point& pt, const SweepSpec&) {
             auto g = locate_gamma_c1(pt.pr);
             const std::string e = exponent(order_exponent(pt.pr) - 1);
             const double nan = std::numeric_limits<double>::quiet_NaN();
             BarrierMetrics b{nan, nan, nan, nan, nan};
             if (g) {
                 ModelParams at = pt.pr;
                 at.gamma = *g;
                 b = barrier_metrics(at);
             }
             const double gs = g ? *g / std::pow(pt.pr.nesting, order_exponent(pt.pr) - 1) : nan;
             return one_row({"gamma_c1_over_C" + e, "barrier_height", "barrier_width", "m_low", "m_high"},
                            {fmt(gs), fmt(b.height), fmt(b.width), fmt(b.m_low), fmt(b.m_high)});
         }},
        {"gap-instanton",
         [](const Point& pt, const SweepSpec&) {
             auto g = instanton_at_transition(pt.pr);
             const double gs = g.at_params.gamma / std::pow(pt.pr.nesting, pt.pr.p - 1);
             return one_row({"gamma_over_C" + exponent(pt.pr.p - 1), "overlap", "log_gap_per_spin"},
                            {fmt(gs), fmt(g.overlap), fmt(g.log_gap_per_spin)});
         }},
        {"gap-spinwave",
         [](const Point& pt, const SweepSpec&) {
             auto s = spinwave_spectrum(pt.pr.J, pt.pr.nesting, pt.pr.lambda, pt.pr.gamma);
             return one_row({"theta", "omega0", "omega1", "gap", "A", "B", "lambda_A", "lambda_B"},
                            {fmt(s.theta), fmt(s.omega0), fmt(s.omega1), fmt(s.gap()), fmt(s.A), fmt(s.B),
                             fmt(s.lambda_A), fmt(s.lambda_B)});
         }},
        {"meta-fm",
         [](const Point& pt, const SweepSpec&) {
             const double x = pt.get("k_over_N");
             const std::string tr = pt.get_text("trace");
             if (tr.empty()) return one_row({"metastable"}, {fmt(fm_metastable_exists(pt.pr, x))});
             auto r = fm_metastability_region(pt.pr, meta_axis(tr), {x});
             return one_row({"boundary_" + tr, "present"}, {fmt(r.boundary[0].y), fmt(r.boundary[0].present)});
         }},
        {"meta-af",
         [](const Point& pt, const SweepSpec&) {
             const int N = pt.get_int("N"), k = pt.get_int("k");
             const bool upper = pt.has("upper") && pt.get("upper") != 0.0;
             const std::string tr = pt.get_text("trace");
             if (tr.empty()) return one_row({"metastable"}, {fmt(af_metastable_exists(pt.pr, k, N, upper))});
             auto r = af_metastability_region(pt.pr, N, meta_axis(tr), {k});
             return one_row({"boundary_" + tr, "present"}, {fmt(r.boundary[0].y), fmt(r.boundary[0].present)});
         }},
        {"occupancy",
         [](const Point& pt, const SweepSpec&) {
             const int N = pt.get_int("N");
             Result r;
             if (pt.pr.coupling == Coupling::antiferro) {
                 if (pt.pr.zero_temperature()) throw InputError("af occupancy needs T > 0");
                 auto o = af_occupancy(pt.pr.J, pt.pr.nesting, pt.pr.lambda, pt.pr.beta(), N);
                 r.columns = {"i", "E", "log_degeneracy", "probability"};
                 for (std::size_t i = 0; i < o.k.size(); ++i)
                     r.rows.push_back({std::to_string(o.k[i]), fmt(o.energies[i]), fmt(o.log_degeneracy[i]),
                                       fmt(o.probabilities[i])});
             } else {
                 auto o = fm_occupancy(pt.pr, N);
                 r.columns = {"k", "E", "log_degeneracy", "probability", "F_over_C2"};
                 for (std::size_t i = 0; i < o.k.size(); ++i)
                     r.rows.push_back({std::to_string(o.k[i]), fmt(o.energies[i]), fmt(o.log_degeneracy[i]),
                                       fmt(o.probabilities[i]), fmt(o.free_energy_over_C2[i])});
             }
             return r;
         }},
        {"hybrid-critline",
         [](const Point& pt, const SweepSpec&) {
             const double es = pt.pr.eta / std::pow(pt.pr.nesting, pt.pr.p - 1);
             auto c = hybrid_critical_line(pt.pr, {es});
             return one_row({"lambda_c_over_C" + exponent(pt.pr.p - 2), "present"}, {fmt(c[0].y), fmt(c[0].present)});
         }},
        {"exact-spectrum",
         [](const Point& pt, const SweepSpec& spec) {
             HamiltonianForm form;
             auto inst = instance_for(pt, form);
             const bool cs = pt.has("code_space") && pt.get("code_space") != 0.0;
             auto s = classical_spectrum(inst, form, cs, spec.jobs);
             Result r;
             r.columns = {"E", "degeneracy"};
             for (std::size_t i = 0; i < s.energies.size(); ++i)
                 r.rows.push_back({fmt(s.energies[i]), std::to_string(s.degeneracies[i])});
             return r;
         }},
        {"exact-gap",
         [](const Point& pt, const SweepSpec&) {
             HamiltonianForm form;
             auto inst = instance_for(pt, form);
             return one_row({"gap"}, {fmt(quantum_gap(inst, form, pt.pr.gamma))});
         }},
    };
    return table;
}

}  // namespace

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> Range::values() const {
    if (steps < 1) throw InputError("sweep '" + name + "' needs at least one step");
    if (!std::isfinite(start) || !std::isfinite(stop)) throw InputError("sweep '" + name + "' has a non-finite bound");
    std::vector<double> v(steps);
    for (int i = 0; i < steps; ++i) v[i] = steps == 1 ? start : start + (stop - start) * double(i) / double(steps - 1);
    if (steps > 1) v.back() = stop;
    return v;
}

const std::vector<std::string>& known_commands() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& [k, v] : commands()) n.push_back(k);
        return n;
    }();
    return names;
}

const std::vector<std::string>& known_parameters() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n = kNumeric;
        n.insert(n.end(), kText.begin(), kText.end());
        return n;
    }();
    return names;
}

bool is_known_parameter(const std::string& name) {
    if (std::regex_match(name, kScaled)) return true;
    for (const auto& n : known_parameters())
        if (n == name) return true;
    return false;
}

Table run_sweep(const SweepSpec& spec) {
    auto cit = commands().find(spec.command);
    if (cit == commands().end()) {
        std::string all;
        for (const auto& c : known_commands()) all += (all.empty() ? "" : ", ") + c;
        throw InputError("unknown command '" + spec.command + "' (known: " + all + ")");
    }
    if (spec.swept.size() > 2) throw InputError("at most two swept ranges are supported");

    std::vector<std::string> unknown;
    std::map<std::string, std::vector<std::string>> by_base;
    auto note = [&](const std::string& n) {
        if (!is_known_parameter(n)) unknown.push_back(n);
        by_base[base_name(n)].push_back(n);
    };
    for (const auto& [k, v] : spec.fixed) note(k);
    for (const auto& r : spec.swept) note(r.name);
    if (!unknown.empty()) {
        std::string msg = "unknown parameter";
        msg += unknown.size() > 1 ? "s: " : ": ";
        for (std::size_t i = 0; i < unknown.size(); ++i) msg += (i ? ", " : "") + unknown[i];
        msg += " (known: ";
        for (std::size_t i = 0; i < known_parameters().size(); ++i) msg += (i ? ", " : "") + known_parameters()[i];
        msg += ", and <lambda|gamma|T|eta>_over_C<k>)";
        throw InputError(msg);
    }
    for (const auto& [b, names] : by_base)
        if (names.size() > 1) {
            std::string msg = "parameter '" + b + "' is given more than once:";
            for (const auto& n : names) msg += " " + n;
            throw InputError(msg);
        }
    for (const auto& t : kText)
        for (const auto& r : spec.swept)
            if (r.name == t) throw InputError("text parameter '" + t + "' cannot be swept");

    std::vector<std::vector<double>> axes;
    for (const auto& r : spec.swept) axes.push_back(r.values());
    std::vector<std::vector<double>> grid;
    if (axes.empty()) grid.push_back({});
    else if (axes.size() == 1)
        for (double a : axes[0]) grid.push_back({a});
    else
        for (double a : axes[0])
            for (double b : axes[1]) grid.push_back({a, b});

    auto make_point = [&](const std::vector<double>& sv) {
        Point pt;
        std::map<std::string, double> values;
        for (const auto& [k, v] : spec.fixed) {
            if (std::find(kText.begin(), kText.end(), k) != kText.end()) {
                pt.text[k] = v;
                continue;
            }
            values[k] = parse_double(k, v);
        }
        for (std::size_t i = 0; i < sv.size(); ++i) values[spec.swept[i].name] = sv[i];
        if (pt.text.count("coupling")) {
            const auto& c = pt.text["coupling"];
            if (c == "ferro") pt.pr.coupling = Coupling::ferro;
            else if (c == "antiferro") pt.pr.coupling = Coupling::antiferro;
            else throw InputError("coupling must be ferro or antiferro (got '" + c + "')");
        }
        if (values.count("C")) assign(pt, "C", values["C"]);
        for (const auto& [k, v] : values)
            if (k != "C") assign(pt, k, v);
        pt.pr.validate();
        return pt;
    };

    std::vector<Point> points;
    for (const auto& sv : grid) points.push_back(make_point(sv));

    std::vector<Result> results(points.size());
    parallel_for(points.size(), spec.jobs, [&](std::size_t i) { results[i] = cit->second(points[i], spec); });

    Table t;
    t.meta.push_back({"command", spec.command});
    const ModelParams& b = points.front().pr;
    std::set<std::string> swept_bases;
    for (const auto& r : spec.swept) swept_bases.insert(base_name(r.name));
    auto meta_num = [&](const std::string& k, double v) {
        if (!swept_bases.count(k)) t.meta.push_back({k, format_number(v)});
    };
    meta_num("p", b.p);
    meta_num("q", b.q);
    meta_num("J", b.J);
    meta_num("lambda", b.lambda);
    meta_num("eta", b.eta);
    meta_num("gamma", b.gamma);
    meta_num("T", b.temperature);
    meta_num("C", b.nesting);
    t.meta.push_back({"coupling", to_string(b.coupling)});
    for (const auto& [k, v] : spec.fixed)
        if (is_known_parameter(k) && base_name(k) != k) t.meta.push_back({"given " + k, v});
    for (const auto& [k, v] : points.front().num)
        if (std::find(std::begin(kNumeric) + 8, std::end(kNumeric), k) != std::end(kNumeric) && !swept_bases.count(k))
            t.meta.push_back({k, format_number(v)});
    for (const auto& [k, v] : points.front().text) t.meta.push_back({k, v});
    for (const auto& r : spec.swept)
        t.meta.push_back({"sweep " + r.name, format_number(r.start) + " " + format_number(r.stop) + " " +
                                                 std::to_string(r.steps)});

    for (const auto& r : spec.swept) t.columns.push_back(r.name);
    for (const auto& res : results)
        if (!res.columns.empty()) {
            t.columns.insert(t.columns.end(), res.columns.begin(), res.columns.end());
            break;
        }
    for (std::size_t i = 0; i < results.size(); ++i)
        for (const auto& row : results[i].rows) {
            std::vector<std::string> full;
            for (double x : grid[i]) full.push_back(format_number(x));
            full.insert(full.end(), row.begin(), row.end());
            t.rows.push_back(std::move(full));
        }
    return t;
}

}  // namespace nqac
