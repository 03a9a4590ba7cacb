#include "nqac/figures.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>

#include <nlohmann/json.hpp>

#include "nqac/csv.hpp"
#include "nqac/gap.hpp"
#include "nqac/metastability.hpp"
#include "nqac/phase.hpp"
#include "nqac/sweep.hpp"

namespace nqac {

namespace {

struct Ctx {
    FigureOutput out;
    std::string dir;
    std::string stamp = iso_timestamp();
    int jobs = 1;

    void sweep(const std::string& file, const std::string& command, std::map<std::string, std::string> fixed,
               std::vector<Range> swept) {
        SweepSpec s;
        s.command = command;
        s.fixed = std::move(fixed);
        s.swept = std::move(swept);
        s.jobs = jobs;
        const Table t = run_sweep(s);
        const std::string path = (std::filesystem::path(dir) / (file + ".csv")).string();
        std::ofstream os(path);
        if (!os) throw InputError("cannot write " + path);
        write_csv(os, t, stamp);
        out.files.push_back(path);
    }

    void mark(const std::string& name, double expected, double tol, double computed, const std::string& source) {
        out.landmarks.push_back({name, expected, tol, computed, source});
    }
};

std::string num(double x) { return format_number(x); }

// short form for file and landmark names
std::string label(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

ModelParams p4q2(double lam_over_C2, double T_over_C4) {
    ModelParams pr;
    pr.p = 4;
    pr.q = 2;
    pr.J = 1;
    pr.lambda = lam_over_C2;
    pr.temperature = T_over_C4;
    return pr;
}

double gamma_c1(const ModelParams& pr) {
    auto g = locate_gamma_c1(pr);
    return g ? *g : std::nan("");
}

// lambda where pred flips from true to false on [lo, hi]
double flip(const std::function<bool(double)>& pred, double lo, double hi, double tol = 1e-5) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (pred(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

void fig1(Ctx& c) {
    c.sweep("fig1_saddle_curves", "fe-scan", {{"p", "2"}, {"q", "2"}, {"J", "1"}, {"lambda", "1.5"}, {"T_over_C", "0.02"}},
            {{"gamma_over_C", 3, 6, 7}, {"m", -1, 1, 401}});
    c.sweep("fig1_critical_line", "critline", {{"p", "2"}, {"q", "2"}, {"J", "1"}, {"lambda", "1.5"}},
            {{"T_over_C", 0.001, 3, 300}});
    ModelParams pr;
    pr.lambda = 1.5;
    auto pt = critical_line_p2(pr, CriticalAxis::gamma_of_T, {0.02});
    c.mark("gamma_c_over_C at T_over_C=0.02", 5.0, 0.005, pt[0].y, "figure caption");
}

void fig2(Ctx& c) {
    c.sweep("fig2_free_energy", "fe-scan",
            {{"p", "4"}, {"q", "4"}, {"J", "1"}, {"lambda", "1"}, {"gamma_over_C3", "2.37"}, {"T_over_C4", "0.01"}},
            {{"m", -1, 1, 2001}});
    ModelParams pr;
    pr.p = pr.q = 4;
    pr.lambda = 1;
    pr.temperature = 0.01;
    c.mark("gamma_c1_over_C3", 2.37, 0.02, gamma_c1(pr), "figure caption");
}

void fig3(Ctx& c) {
    const double lam[] = {0.01, 0.1, 0.6, 3.3}, gam[] = {1.2, 1.3, 2.0, 6.7};
    for (int i = 0; i < 4; ++i) {
        const double g = gamma_c1(p4q2(lam[i], 0.01));
        c.sweep("fig3_lambda_" + label(lam[i]), "fe-scan",
                {{"p", "4"}, {"q", "2"}, {"J", "1"}, {"lambda_over_C2", num(lam[i])}, {"gamma_over_C3", num(g)},
                 {"T_over_C4", "0.01"}},
                {{"m", -1, 1, 2001}});
        c.mark("gamma_c1_over_C3 at lambda_over_C2=" + label(lam[i]), gam[i], 0.05, g, "figure caption");
    }
}

void fig4(Ctx& c) {
    c.sweep("fig4_barrier", "barrier", {{"p", "4"}, {"q", "2"}, {"J", "1"}, {"T_over_C4", "0.01"}},
            {{"lambda_over_C2", 0.05, 4.2, 84}});
}

void fig5(Ctx& c) {
    ModelParams fam = p4q2(0, 0);
    c.sweep("fig5_lambda_c", "lambdac", {{"p", "4"}, {"q", "2"}, {"J", "1"}}, {{"T_over_C4", 0, 12.4, 32}});
    c.mark("lambda_c_over_C2 at T=0", 4.0, 0.05, lambda_critical(fam, 0.0).value_or(std::nan("")), "text");
    auto t = tricritical_temperature(fam);
    c.mark("first-order region ends (T_over_C4)", 12.5, 0.5, t.value_or(std::nan("")), "figure caption");
}

void fig6(Ctx& c) {
    c.sweep("fig6_p3", "classify", {{"p", "3"}, {"q", "2"}, {"J", "1"}, {"T", "0"}}, {{"lambda_over_C", 0.1, 5, 50}});
}

void fig7(Ctx& c) {
    c.sweep("fig7_critical_free_energy", "fe-scan",
            {{"p", "4"}, {"q", "2"}, {"J", "1"}, {"lambda_over_C2", "4"}, {"gamma_over_C3", "8"}, {"T", "0"}},
            {{"m", -1, 1, 2001}});
    auto g = locate_gamma_c2(p4q2(4, 0));
    c.mark("gamma_c2_over_C3 at lambda_over_C2=4", 8.0, 1e-6, g.value_or(std::nan("")), "figure caption");
}

void fig8(Ctx& c) {
    for (int p = 3; p <= 6; ++p)
        c.sweep("fig8_p" + std::to_string(p), "classify", {{"p", std::to_string(p)}, {"q", "2"}, {"J", "1"}, {"T", "0"}},
                {{"lambda_over_C" + std::to_string(p - 2), 0.25, 6, 24}});
}

void fig9(Ctx& c) {
    c.sweep("fig9_p5", "classify", {{"p", "5"}, {"q", "2"}, {"J", "1"}, {"T", "0"}}, {{"lambda_over_C3", 1.9, 2.7, 41}});
    ModelParams fam;
    fam.p = 5;
    fam.q = 2;
    auto first = [&](double l) {
        ModelParams pr = fam;
        pr.lambda = l;
        return classify_transition(pr).order == TransitionOrder::first;
    };
    auto any_first = [&](double l) {
        ModelParams pr = fam;
        pr.lambda = l;
        return has_first_order(pr);
    };
    c.mark("gamma_c1 = gamma_c2 crossing (lambda_over_C3)", 2.078, 0.01, flip(first, 1.9, 2.3), "figure caption");
    c.mark("coexistence closes (lambda_over_C3)", 2.5, 0.05, flip(any_first, 2.3, 2.7), "figure caption");
}

void fig10(Ctx& c) {
    c.sweep("fig10_overlap", "gap-instanton", {{"p", "4"}, {"q", "2"}, {"J", "1"}, {"T", "0"}},
            {{"lambda_over_C2", 0.05, 4.2, 84}});
    c.mark("overlap at lambda_over_C2=4", 1.0, 0.01, instanton_at_transition(p4q2(4, 0)).overlap, "figure caption");
}

void fig11(Ctx& c) {
    for (double T : {0.03, 3.3})
        c.sweep("fig11_af_barrier_T" + label(T), "barrier",
                {{"p", "4"}, {"q", "4"}, {"J", "1"}, {"coupling", "antiferro"}, {"T_over_C", num(T)}},
                {{"lambda", 0.5, 3, 26}});
}

void fig12(Ctx& c) {
    c.sweep("fig12_hybrid", "hybrid-critline", {{"p", "4"}, {"q", "2"}, {"J", "1"}, {"T", "0"}},
            {{"eta_over_C3", 0, 2, 41}});
    auto line = hybrid_critical_line(p4q2(0, 0), {0.0});
    c.mark("lambda_c_over_C2 at eta=0", 4.0, 0.05, line[0].y, "text");
}

void fig13(Ctx& c) {
    for (double g : {3.8, 3.3, 0.07, 0.0})
        c.sweep("fig13_gamma_" + label(g), "saddle",
                {{"p", "2"}, {"q", "2"}, {"J", "1"}, {"lambda", "0.9"}, {"T", "0"}, {"k_over_N", "0.09"},
                 {"gamma_over_C", num(g)}},
                {});
}

void fig14(Ctx& c) {
    for (double lam : {0.9, 1.1}) {
        c.sweep("fig14a_lambda_" + label(lam), "meta-fm",
                {{"p", "2"}, {"q", "2"}, {"J", "1"}, {"lambda", num(lam)}, {"T", "0"}, {"trace", "gamma_over_C"}},
                {{"k_over_N", 0.01, 0.5, 50}});
        c.sweep("fig14b_lambda_" + label(lam), "meta-fm",
                {{"p", "2"}, {"q", "2"}, {"J", "1"}, {"lambda", num(lam)}, {"gamma", "0"}, {"trace", "T_over_C"}},
                {{"k_over_N", 0.01, 0.5, 50}});
    }
    ModelParams pr;
    pr.lambda = 0.9;
    c.mark("zero-T threshold k_over_N", 0.05, 1e-6,
           flip([&](double x) { return !fm_metastable_exists(pr, x); }, 0.01, 0.2, 1e-9), "figure caption");
    auto r = fm_metastability_region(pr, MetaAxis::T_over_C, {0.1});
    c.mark("T_over_C ceiling at k_over_N=0.1", 1.28, 0.02, r.boundary[0].y, "figure caption");
}

void fig15(Ctx& c) {
    for (double lam : {0.9, 1.1})
        for (double x : {0.1, 0.2})
            c.sweep("fig15a_lambda_" + label(lam) + "_k_" + label(x), "meta-fm",
                    {{"p", "2"}, {"q", "2"}, {"J", "1"}, {"lambda", num(lam)}, {"k_over_N", num(x)}, {"trace", "T_over_C"}},
                    {{"gamma_over_C", 0, 1, 21}});
    c.sweep("fig15b", "meta-fm",
            {{"p", "2"}, {"q", "2"}, {"J", "1"}, {"T_over_C", "0.03"}, {"gamma_over_C", "0.03"}, {"trace", "lambda"}},
            {{"k_over_N", 0.02, 0.5, 49}});
}

void fig16(Ctx& c) {
    for (double x : {0.03, 0.48})
        c.sweep("fig16a_k_" + label(x), "saddle",
                {{"p", "2"}, {"q", "2"}, {"J", "1"}, {"lambda", "1"}, {"T_over_C", "0.03"}, {"k_over_N", num(x)}},
                {{"gamma_over_C", 0, 2, 41}});
    c.sweep("fig16a_k_0", "saddle", {{"p", "2"}, {"q", "2"}, {"J", "1"}, {"lambda", "1"}, {"T_over_C", "0.03"}},
            {{"gamma_over_C", 0, 2, 41}});
    c.sweep("fig16b_occupancy", "occupancy",
            {{"p", "2"}, {"q", "2"}, {"J", "1"}, {"lambda", "1"}, {"T_over_C", "0.03"}, {"gamma_over_C", "0.03"},
             {"N", "100"}},
            {});
    ModelParams pr;
    pr.lambda = 1;
    pr.temperature = 0.03;
    auto r = fm_metastability_region(pr, MetaAxis::gamma_over_C, {0.48});
    c.mark("gamma_over_C where the k_over_N=0.48 branch ends", 1.25, 0.05, r.boundary[0].y, "text");
}

void fig17(Ctx& c) {
    for (double T : {0.0, 0.33})
        for (int k : {10, 20, 30})
            c.sweep("fig17_T" + label(T) + "_k_" + std::to_string(k), "meta-af",
                    {{"p", "2"}, {"q", "2"}, {"J", "1"}, {"coupling", "antiferro"}, {"T_over_C", num(T)}, {"N", "100"},
                     {"k", std::to_string(k)}, {"trace", "lambda"}},
                    {{"gamma_over_C", 0, 3, 31}});
}

}  // namespace

FigureOutput reproduce(int id, const std::string& dir, int jobs) {
    static const std::function<void(Ctx&)> figs[] = {fig1,  fig2,  fig3,  fig4,  fig5,  fig6,  fig7,  fig8, fig9,
                                                    fig10, fig11, fig12, fig13, fig14, fig15, fig16, fig17};
    if (id < 1 || id > 17) throw InputError("figure id must be 1 to 17");
    std::filesystem::create_directories(dir);
    Ctx c;
    c.dir = dir;
    c.jobs = jobs;
    c.out.id = id;
    figs[id - 1](c);

    nlohmann::json m;
    m["figure"] = id;
    m["generated"] = c.stamp;
    m["files"] = c.out.files;
    nlohmann::json marks = nlohmann::json::array();
    for (const auto& l : c.out.landmarks)
        marks.push_back({{"name", l.name},
                         {"expected", l.expected},
                         {"tolerance", l.tolerance},
                         {"computed", l.computed},
                         {"within_tolerance", std::abs(l.computed - l.expected) <= l.tolerance},
                         {"source", l.source}});
    m["landmarks"] = marks;
    const std::string path = (std::filesystem::path(dir) / ("fig" + std::to_string(id) + "_manifest.json")).string();
    std::ofstream os(path);
    os << m.dump(2) << '\n';
    c.out.files.push_back(path);
    return c.out;
}

}  // namespace nqac
