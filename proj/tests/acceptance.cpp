// One line per acceptance criterion: PASS/FAIL, measured values, wall time.
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nqac/csv.hpp"
#include "nqac/exact.hpp"
#include "nqac/gap.hpp"
#include "nqac/metastability.hpp"
#include "nqac/phase.hpp"
#include "nqac/saddle.hpp"
#include "nqac/sweep.hpp"

using namespace nqac;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what + (cond ? "" : " [x]");
        ok = ok && cond;
    }
};

std::string fmt(double x, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    return buf;
}

bool near(double x, double want, double tol) { return std::isfinite(x) && std::abs(x - want) <= tol; }

ModelParams fam(int p, int q, double lam, double gamma = 0.0, double T = 0.0) {
    ModelParams pr;
    pr.p = p;
    pr.q = q;
    pr.lambda = lam;
    pr.gamma = gamma;
    pr.temperature = T;
    return pr;
}

double flip(const std::function<bool(double)>& pred, double lo, double hi, double tol) {
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (pred(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

Outcome c1() {
    Outcome o;
    ModelParams pr = fam(2, 2, 1.5);
    auto line = critical_line_p2(pr, CriticalAxis::gamma_of_T, {0.02});
    o.require(line[0].present && near(line[0].y, 5.0, 0.005), "Gamma_c/C = " + fmt(line[0].y, 8));
    return o;
}

Outcome c2() {
    Outcome o;
    std::mt19937 rng(20);
    std::uniform_real_distribution<double> u(0.05, 4.0);
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        ModelParams pr = fam(2, 2, u(rng));
        pr.J = u(rng);
        pr.nesting = 1 + u(rng);
        const double want = 2 * pr.nesting * (pr.J + pr.lambda);
        const double got = locate_gamma_c2(pr).value_or(std::nan(""));
        worst = std::max(worst, std::isfinite(got) ? std::abs(got - want) / want : INFINITY);
    }
    o.require(worst <= 1e-10, "max relative error " + fmt(worst, 3));
    return o;
}

Outcome c3() {
    Outcome o;
    auto r = classify_transition(fam(4, 4, 1.0, 0.0, 0.01));
    const double g = r.gamma_c1.value_or(std::nan(""));
    o.require(r.order == TransitionOrder::first && near(g, 2.37, 0.02), "Gamma_c1/C^3 = " + fmt(g));
    return o;
}

Outcome c4() {
    Outcome o;
    const double lams[] = {0.01, 0.1, 0.6, 3.3}, want[] = {1.2, 1.3, 2.0, 6.7};
    for (int i = 0; i < 4; ++i) {
        auto r = classify_transition(fam(4, 2, lams[i], 0.0, 0.01));
        const double g = r.gamma_c1.value_or(std::nan(""));
        o.require(near(g, want[i], 0.05), "lambda " + fmt(lams[i]) + ": " + fmt(g) + " vs " + fmt(want[i]));
    }
    return o;
}

Outcome c5() {
    Outcome o;
    auto base = fam(4, 2, 0.0);
    const double l0 = lambda_critical(base, 0.0).value_or(std::nan(""));
    o.require(near(l0, 4.0, 0.05), "lambda_c(T=0)/C^2 = " + fmt(l0));
    const double g = locate_gamma_c2(fam(4, 2, 4.0)).value_or(std::nan(""));
    o.require(near(g, 8.0, 1e-6), "Gamma_c2/C^3 at lambda/C^2=4 = " + fmt(g, 10));
    bool mono = true;
    double prev = -INFINITY;
    for (int i = 0; i < 10; ++i) {
        const double T = 1.2 * i;
        const auto l = lambda_critical(base, T);
        if (!l || *l < prev - 1e-4) mono = false;
        if (l) prev = *l;
    }
    o.require(mono, "lambda_c(T) nondecreasing on T/C^4 = 0..10.8");
    const double tc = tricritical_temperature(base).value_or(std::nan(""));
    o.require(near(tc, 12.5, 0.5), "first-order region ends at T/C^4 = " + fmt(tc, 12));
    o.require(!lambda_critical(base, 1.01 * tc), "no first-order region just above");
    return o;
}

Outcome c6() {
    Outcome o;
    auto first = [](double l) { return classify_transition(fam(5, 2, l)).order == TransitionOrder::first; };
    auto any_first = [](double l) { return has_first_order(fam(5, 2, l)); };
    const double x = flip(first, 1.9, 2.3, 1e-4);
    const double y = flip(any_first, 2.3, 2.7, 1e-4);
    o.require(near(x, 2.078, 0.01), "crossing lambda/C^3 = " + fmt(x));
    o.require(near(y, 2.50, 0.05), "closure lambda/C^3 = " + fmt(y));
    return o;
}

Outcome c7() {
    Outcome o;
    int bad = 0;
    double min_diff = INFINITY;
    for (int i = 1; i <= 50; ++i) {
        auto r = classify_transition(fam(3, 2, 0.1 * i));
        if (!r.gamma_c1 || !r.gamma_c2) {
            ++bad;
            continue;
        }
        const double d = *r.gamma_c1 - *r.gamma_c2;
        min_diff = std::min(min_diff, d);
        if (!(d > 0)) ++bad;
    }
    o.require(bad == 0, "min (Gamma_c1 - Gamma_c2)/C^2 = " + fmt(min_diff) + ", failures " + std::to_string(bad));
    return o;
}

Outcome c8() {
    Outcome o;
    bool mono = true;
    double prev = 0;
    for (int i = 1; i <= 40; ++i) {
        const double v = instanton_at_transition(fam(4, 2, 0.1 * i)).overlap;
        if (v < prev - 1e-9) mono = false;
        prev = v;
    }
    o.require(mono, "overlap nondecreasing on lambda/C^2 = 0.1..4");
    o.require(near(prev, 1.0, 0.01), "overlap at lambda/C^2=4 = " + fmt(prev));
    return o;
}

Outcome c9() {
    Outcome o;
    const double J = 1.0, C = 1.0, lam = 0.5, gc = 2 * J * C * lam;
    std::vector<double> d, lo, hi;
    for (int i = 0; i < 16; ++i) {
        d.push_back(1e-8 * std::pow(10.0, 0.4 * i));
        lo.push_back(spinwave_spectrum(J, C, lam, gc - d.back()).gap());
        hi.push_back(spinwave_spectrum(J, C, lam, gc + d.back()).gap());
    }
    auto [el, al] = gap_exponent_fit(d, lo);
    auto [eh, ah] = gap_exponent_fit(d, hi);
    o.require(near(el, 0.5, 0.005) && near(eh, 0.5, 0.005), "exponents " + fmt(el) + ", " + fmt(eh));
    const double want_lo = std::sqrt(4 * J * C * lam), want_hi = std::sqrt(2 * J * C * lam);
    o.require(std::abs(al / want_lo - 1) < 0.01, "below: " + fmt(al) + " vs sqrt(4JC lambda) " + fmt(want_lo));
    o.require(std::abs(ah / want_hi - 1) < 0.01, "above: " + fmt(ah) + " vs sqrt(2JC lambda) " + fmt(want_hi));
    bool pos = true;
    for (double l : {0.1, 0.5, 0.9, 0.99})
        for (int i = 0; i <= 200; ++i) pos = pos && spinwave_spectrum(J, C, l, 0.03 * i).omega0 > 0;
    o.require(pos, "omega0 > 0 for lambda < 1");
    return o;
}

Outcome c10() {
    Outcome o;
    auto fm = fam(2, 2, 0.9);
    const bool at = fm_metastable_exists(fm, 0.05), past = fm_metastable_exists(fm, 0.05 + 1e-9);
    o.require(!at && past, "FM zero-T threshold k/N = 0.05 (absent at 0.05, present at 0.05+1e-9)");
    auto reg = fm_metastability_region(fm, MetaAxis::T_over_C, {0.1});
    const double t = reg.boundary[0].present ? reg.boundary[0].y : std::nan("");
    o.require(near(t, 1.28, 0.02), "FM T/C ceiling at k/N=0.1 = " + fmt(t));
    bool af = true;
    const int N = 100;
    for (int k : {2, 10, 25, 40}) {
        auto pr = fam(2, 2, 2.0 * k / N);
        pr.coupling = Coupling::antiferro;
        af = af && !af_metastable_exists(pr, k, N);
        pr.lambda = std::nextafter(2.0 * k / N, 1.0);
        af = af && af_metastable_exists(pr, k, N);
    }
    o.require(af, "AF zero-T thresholds lambda = 2kJ/N for k = 2, 10, 25, 40 of 100");
    return o;
}

Outcome c11() {
    Outcome o;
    const int N = 4, C = 3;
    const double J = 1.0, lam = 2.0;
    auto inst = encode_pspin(N, C, {2, 2, J, lam, Coupling::antiferro});
    auto levels = classical_spectrum(inst, HamiltonianForm::pspin_antiferro, true);
    auto occ = af_occupancy(J, C, lam, 1.0, N);
    bool same = levels.energies.size() == occ.k.size();
    for (std::size_t i = 0; same && i < occ.k.size(); ++i) {
        same = levels.energies[i] == N * occ.energies[i] &&
               levels.degeneracies[i] == std::uint64_t(std::llround(std::exp(occ.log_degeneracy[i])));
    }
    o.require(same, "AF levels and degeneracies, N=4, C=3 (" + std::to_string(levels.energies.size()) + " levels)");
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst = 0;
    for (int i = 0; i < 10; ++i) {
        const double j = 0.1 + u(rng), c = 1 + 3 * u(rng), beta = 0.1 + 2 * u(rng);
        const int n = 2 * (2 + int(20 * u(rng)));
        auto a = af_occupancy(j, c, u(rng), beta, n);
        auto b = af_occupancy(j * c * c, 1.0, u(rng), beta, n);
        for (std::size_t k = 0; k < a.probabilities.size(); ++k)
            worst = std::max(worst, std::abs(a.probabilities[k] - b.probabilities[k]));
    }
    o.require(worst <= 1e-12, "P(J,C) vs P(JC^2,1) max diff " + fmt(worst, 3));
    return o;
}

Outcome c12() {
    Outcome o;
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    double worst = 0;
    int solutions = 0;
    for (int draw = 0; draw < 100; ++draw) {
        ModelParams pr;
        pr.p = 2 + int(4 * u(rng));
        pr.q = 2 + int(3 * u(rng));
        pr.J = 0.3 + u(rng);
        pr.lambda = 1.5 * u(rng);
        pr.gamma = 0.2 + 2 * u(rng);
        pr.temperature = u(rng) < 0.3 ? 0.0 : 0.05 + u(rng);
        for (const auto& s : solve_symmetric(pr)) {
            const double m = s.config.magnetization();
            if (std::abs(m) > 1 - 1e-4) continue;
            const double h = 1e-5;
            const double g = (free_energy(pr, SectorConfig::symmetric(m + h)) -
                              free_energy(pr, SectorConfig::symmetric(m - h))) /
                             (2 * h);
            worst = std::max(worst, std::abs(g));
            ++solutions;
        }
    }
    o.require(worst < 1e-8, "stationarity over " + std::to_string(solutions) + " solutions, max |dF/dm| " + fmt(worst, 3));

    double sad = 0, fe = 0, part = 0;
    for (int i = 0; i < 20; ++i) {
        ModelParams pr;
        pr.p = 2 + i % 3;
        pr.q = 2 + (i / 3) % 2;
        pr.lambda = 0.2 + u(rng);
        pr.nesting = 1.5 + u(rng);
        pr.temperature = (0.1 + u(rng)) * std::pow(pr.nesting, pr.p - 1);
        pr.gamma = (0.3 + u(rng)) * std::pow(pr.nesting, pr.p - 1);
        auto a = solve_symmetric(pr);
        auto b = solve_symmetric(scale_params(pr, pr.nesting, ScalingConvention::saddle));
        if (a.size() != b.size()) sad = INFINITY;
        for (std::size_t j = 0; j < a.size() && j < b.size(); ++j)
            sad = std::max(sad, std::abs(a[j].config.magnetization() - b[j].config.magnetization()));

        pr.temperature = 1e-3 * pr.J * std::pow(pr.nesting, pr.p);
        auto f1 = scale_params(pr, pr.nesting, ScalingConvention::low_t_free_energy);
        auto f2 = scale_params(pr, pr.nesting, ScalingConvention::low_t_partition);
        for (double m : {0.0, 0.4, 0.9}) {
            auto c = SectorConfig::symmetric(m);
            const double F = free_energy(pr, c);
            fe = std::max(fe, std::abs(free_energy(f1, c) - F) / std::abs(F));
            part = std::max(part, std::abs(std::pow(pr.nesting, pr.p) * free_energy(f2, c) - F) / std::abs(F));
        }
    }
    o.require(sad < 1e-10, "saddle scaling max |dm| " + fmt(sad, 3));
    o.require(fe < 1e-6, "low-T free-energy scaling max rel " + fmt(fe, 3));
    o.require(part < 1e-6, "low-T partition scaling max rel " + fmt(part, 3));

    double tay = 0;
    for (int p : {3, 4, 5}) {
        auto pr = fam(p, 2, 0.8, 1.7);
        auto a = taylor_coefficients(pr, TaylorMethod::analytic_T0);
        auto n = taylor_coefficients(pr, TaylorMethod::numeric);
        tay = std::max({tay, std::abs(a.c2 - n.c2), std::abs(a.c3 - n.c3)});
        if (p >= 4) tay = std::max(tay, std::abs(a.c4 - n.c4));
    }
    o.require(tay < 1e-6, "Taylor numeric vs analytic max diff " + fmt(tay, 3));

    auto body = [](int jobs) {
        SweepSpec s;
        s.command = "classify";
        s.fixed = {{"p", "4"}, {"q", "2"}, {"T_over_C4", "0.01"}};
        s.swept = {{"lambda_over_C2", 0.2, 3.0, 6}};
        s.jobs = jobs;
        std::ostringstream os;
        write_csv(os, run_sweep(s), "fixed");
        return os.str();
    };
    o.require(body(1) == body(4), "CSV identical for jobs 1 and 4");
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        Outcome (*run)();
    };
    const Criterion all[] = {
        {1, "critical field p=q=2", 1, c1},
        {2, "zero-T closed form", 1, c2},
        {3, "first-order point p=q=4", 5, c3},
        {4, "p=4 q=2 landmark set", 30, c4},
        {5, "transition-order boundary", 60, c5},
        {6, "p=5 classification", 60, c6},
        {7, "p=3 always first order", 10, c7},
        {8, "instanton overlap", 5, c8},
        {9, "spin-wave gap", 1, c9},
        {10, "metastability thresholds", 30, c10},
        {11, "oracle equivalence", 10, c11},
        {12, "property suites", 120, c12},
    };
    int failed = 0;
    for (const auto& c : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = dt < c.budget_s;
        const bool pass = o.ok && in_time;
        failed += !pass;
        std::printf("%s %2d %s: %s (%.2f s of %.0f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), dt,
                    c.budget_s, in_time ? "" : ", over budget");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(std::size(all)) - failed, std::size(all));
    return failed;
}
