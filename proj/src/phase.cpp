#include "nqac/phase.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

namespace nqac {

namespace {

const double kNaN = std::numeric_limits<double>::quiet_NaN();

bool antiferro(const ModelParams& p) { return p.coupling == Coupling::antiferro; }

// exponent n of the C^n free-energy normalisation for the transition at hand
int order_exponent(const ModelParams& p) { return antiferro(p) ? p.q : p.p; }

double gamma_scale(const ModelParams& p) { return std::pow(p.nesting, order_exponent(p) - 1); }
double energy_scale(const ModelParams& p) { return std::pow(p.nesting, order_exponent(p)); }

ModelParams with_gamma(ModelParams p, double g) {
    p.gamma = g;
    return p;
}

double root(const std::function<double(double)>& f, double a, double b) {
    double fa = f(a), fb = f(b);
    if (fa == 0) return a;
    if (fb == 0) return b;
    boost::uintmax_t it = 300;
    auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, boost::math::tools::eps_tolerance<double>(52), it);
    return 0.5 * (r.first + r.second);
}

// largest |h| over the physical range of the order parameter
double field_scale(const ModelParams& p) {
    const double C = p.nesting;
    const double hq = p.q * p.lambda * std::pow(C, p.q - 1);
    if (antiferro(p)) return hq + p.eta;
    return p.p * p.J * std::pow(C, p.p - 1) + hq + p.eta;
}

Minimum local_min_near(const Landscape& L, double m, double window) {
    const double a = std::max(0.0, m - window), b = std::min(1.0, m + window);
    auto r = boost::math::tools::brent_find_minima(L.free_energy, a, b, 52);
    Minimum best{r.first, r.second};
    const double fm = L.free_energy(m);
    if (fm < best.F) best = {m, fm};
    return best;
}

}  // namespace

std::string to_string(TransitionOrder o) {
    switch (o) {
        case TransitionOrder::first: return "first";
        case TransitionOrder::second: return "second";
        case TransitionOrder::coexisting_first_and_second: return "coexisting_first_and_second";
        case TransitionOrder::none: return "none";
    }
    return "?";
}

std::string to_string(TaylorMethod m) { return m == TaylorMethod::analytic_T0 ? "analytic_T0" : "numeric"; }

double quadratic_coefficient(const ModelParams& pr) {
    pr.validate();
    if (pr.eta > 0) return kNaN;
    const double C = pr.nesting;
    double lin = 0.0, quad = 0.0;
    if (!antiferro(pr) && pr.p == 2) {
        lin += 2 * pr.J * C;
        quad += pr.J * C * C;
    }
    if (pr.q == 2) {
        lin += 2 * pr.lambda * C;
        quad += pr.lambda * C * C;
    }
    if (lin == 0.0) return quad / energy_scale(pr);
    double chi;
    if (pr.gamma > 0)
        chi = pr.zero_temperature() ? 1.0 / pr.gamma : std::tanh(pr.beta() * pr.gamma) / pr.gamma;
    else if (!pr.zero_temperature())
        chi = pr.beta();
    else
        throw NumericalError("quadratic coefficient is singular at gamma = 0, T = 0");
    return (quad - 0.5 * C * chi * lin * lin) / energy_scale(pr);
}

std::optional<double> locate_gamma_c2(const ModelParams& pr) {
    pr.validate();
    if (pr.eta > 0) return std::nullopt;
    if (antiferro(pr) && pr.q % 2 == 1) return std::nullopt;
    const double C = pr.nesting;
    double lin = 0.0, quad = 0.0;
    if (!antiferro(pr) && pr.p == 2) {
        lin += 2 * pr.J * C;
        quad += pr.J * C * C;
    }
    if (pr.q == 2) {
        lin += 2 * pr.lambda * C;
        quad += pr.lambda * C * C;
    }
    if (lin == 0.0 || quad <= 0.0) return std::nullopt;
    const double g_hi = C * lin * lin / (2 * quad);
    if (pr.zero_temperature()) return g_hi;
    auto c2 = [&](double g) { return quadratic_coefficient(with_gamma(pr, g)); };
    if (c2(0.0) >= 0.0) return std::nullopt;
    return root(c2, 0.0, g_hi);
}

TaylorCoefficients taylor_coefficients(const ModelParams& pr, TaylorMethod method) {
    pr.validate();
    TaylorCoefficients tc;
    tc.method = method;
    const double C = pr.nesting, J = pr.J, lam = pr.lambda, G = pr.gamma;
    if (method == TaylorMethod::analytic_T0) {
        if (!pr.zero_temperature() || pr.q != 2 || pr.p < 3 || antiferro(pr) || pr.eta > 0)
            throw InputError("analytic expansion covers T = 0, q = 2, p >= 3, ferro only");
        if (G == 0.0) throw NumericalError("Taylor expansion is singular at gamma = 0");
        tc.c6 = kNaN;
        if (pr.p == 3) {
            tc.c2 = lam / C * (1 - 2 * C * lam / G);
            tc.c3 = 2 * J * (1 - 3 * C * lam / G);
            tc.c4 = kNaN;
        } else if (pr.p == 4) {
            tc.c2 = lam / (C * C) * (1 - 2 * C * lam / G);
            tc.c3 = 0.0;
            tc.c4 = 3 * J - 8 * J * C * lam / G + 2 * C * std::pow(lam, 4) / std::pow(G, 3);
        } else {
            tc.c2 = lam / std::pow(C, pr.p - 2) * (1 - 2 * C * lam / G);
            tc.c3 = 0.0;
            tc.c4 = 2 * std::pow(lam, 4) * std::pow(C, 5 - pr.p) / std::pow(G, 3);
        }
        return tc;
    }

    if (G == 0.0 && pr.zero_temperature()) throw NumericalError("Taylor expansion is singular at gamma = 0, T = 0");
    Landscape L = symmetric_landscape(pr);
    const double norm = energy_scale(pr);
    auto f = [&](double m) { return L.free_energy(m) / norm; };

    // radius of the real neighbourhood where |h| stays below Gamma
    double rho = 1.0;
    if (G > 0) {
        ModelParams at = pr;
        auto hx = [&](double m) {
            return std::abs(antiferro(pr) ? local_field(at, 0.0, m) : local_field(at, m, m)) + pr.eta;
        };
        if (hx(1.0) > G) rho = root([&](double m) { return hx(m) - G; }, 0.0, 1.0);
    }
    if (!pr.zero_temperature()) rho = std::max(rho, std::min(1.0, 0.5 * M_PI * pr.temperature / std::max(1e-300, field_scale(pr))));
    const double reach = std::min(0.5, 0.3 * rho);

    auto richardson = [&](auto&& D, int half_width, int levels) {
        double h = reach / half_width;
        std::vector<std::vector<double>> T(levels, std::vector<double>(levels));
        for (int i = 0; i < levels; ++i) {
            T[i][0] = D(h);
            double fac = 1.0;
            for (int j = 1; j <= i; ++j) {
                fac *= 4.0;
                T[i][j] = T[i][j - 1] + (T[i][j - 1] - T[i - 1][j - 1]) / (fac - 1.0);
            }
            h *= 0.5;
        }
        return T[levels - 1][levels - 1];
    };
    const double f0 = f(0.0);
    auto d2 = [&](double h) { return (f(h) - 2 * f0 + f(-h)) / (h * h); };
    auto d3 = [&](double h) { return (f(2 * h) - 2 * f(h) + 2 * f(-h) - f(-2 * h)) / (2 * h * h * h); };
    auto d4 = [&](double h) { return (f(2 * h) - 4 * f(h) + 6 * f0 - 4 * f(-h) + f(-2 * h)) / std::pow(h, 4); };
    auto d6 = [&](double h) {
        return (f(3 * h) - 6 * f(2 * h) + 15 * f(h) - 20 * f0 + 15 * f(-h) - 6 * f(-2 * h) + f(-3 * h)) /
               std::pow(h, 6);
    };
    tc.c2 = richardson(d2, 1, 5) / 2.0;
    tc.c3 = richardson(d3, 2, 4) / 6.0;
    tc.c4 = richardson(d4, 2, 4) / 24.0;
    tc.c6 = richardson(d6, 3, 3) / 720.0;
    return tc;
}

std::vector<CurvePoint> critical_line_p2(const ModelParams& pr, CriticalAxis axis, const std::vector<double>& xs) {
    if (pr.p != 2 || pr.q != 2) throw InputError("critical_line_p2 needs p = q = 2");
    pr.validate();
    const double C = pr.nesting;
    // Gamma/C = 2 K tanh(beta Gamma), K = J + lambda (ferro) or lambda (antiferro)
    const double K = antiferro(pr) ? pr.lambda : pr.J + pr.lambda;
    std::vector<CurvePoint> out;
    for (double x : xs) {
        CurvePoint cp{x, kNaN, false};
        if (axis == CriticalAxis::gamma_of_T) {
            const double T = x * C;
            if (T == 0.0) {
                cp.y = 2 * K;
                cp.present = K > 0;
            } else if (2 * C * K / T > 1.0) {
                auto f = [&](double g) { return g - 2 * C * K * std::tanh(g / T); };
                const double g = root(f, 1e-300 + 1e-12 * C * K, 2 * C * K);
                cp.y = g / C;
                cp.present = true;
            }
        } else {
            const double g = x * C;
            if (g == 0.0) {
                cp.y = 2 * K;  // T/C at Gamma = 0
                cp.present = K > 0;
            } else if (g < 2 * C * K) {
                // tanh(g/T) = g/(2CK), solved by bisection in T
                auto f = [&](double T) { return 2 * C * K * std::tanh(g / T) - g; };
                double lo = g / std::atanh(std::min(1.0 - 1e-16, g / (2 * C * K))) * 0.5;
                double hi = 2 * C * K * 2.0;
                const double T = root(f, lo, hi);
                cp.y = T / C;
                cp.present = true;
            } else if (g == 2 * C * K) {
                cp.y = 0.0;
                cp.present = true;
            }
        }
        out.push_back(cp);
    }
    return out;
}

BarrierMetrics barrier_between(const std::function<double(double)>& F, double a, double b, double norm) {
    if (a > b) std::swap(a, b);
    BarrierMetrics bm;
    bm.m_low = a;
    bm.m_high = b;
    bm.width = b - a;
    const double Fa = F(a), Fb = F(b);
    const int n = 201;
    int imax = 0;
    double fmax = -std::numeric_limits<double>::infinity();
    for (int i = 0; i <= n; ++i) {
        const double x = a + (b - a) * i / n;
        const double v = F(x);
        if (v > fmax) {
            fmax = v;
            imax = i;
        }
    }
    if (imax == 0 || imax == n) {
        bm.height = 0.0;
        bm.m_max = imax == 0 ? a : b;
        return bm;
    }
    const double lo = a + (b - a) * (imax - 1) / n, hi = a + (b - a) * (imax + 1) / n;
    auto r = boost::math::tools::brent_find_minima([&](double x) { return -F(x); }, lo, hi, 52);
    bm.m_max = r.first;
    const double top = std::max(fmax, -r.second);
    bm.height = (top - 0.5 * (Fa + Fb)) / norm;
    if (bm.height < 0) bm.height = 0.0;
    return bm;
}

std::vector<FirstOrderPoint> first_order_points(const ModelParams& base, const ScanSettings& scan) {
    base.validate();
    if (antiferro(base) && base.q % 2 == 1) return {};
    const double gmax = 2.0 * field_scale(base);
    if (gmax <= 0.0) return {};

    auto mstar = [&](double g) {
        return landscape_global_minimum(symmetric_landscape(with_gamma(base, g)), 0.0, 1.0, scan.m_grid).w;
    };

    struct Candidate {
        double a, ma, b, mb;
    };
    std::vector<Candidate> cands;
    const double min_width = gmax * 1e-5;
    std::function<void(double, double, double, double)> refine = [&](double a, double ma, double b, double mb) {
        if (std::abs(ma - mb) <= scan.jump_resolution) return;
        if (b - a < min_width) {
            cands.push_back({a, ma, b, mb});
            return;
        }
        const double c = 0.5 * (a + b);
        const double mc = mstar(c);
        refine(a, ma, c, mc);
        refine(c, mc, b, mb);
    };
    const int n = scan.gamma_grid;
    std::vector<double> gs(n), ms(n);
    for (int i = 0; i < n; ++i) {
        gs[i] = gmax * i / (n - 1);
        ms[i] = mstar(gs[i]);
    }
    for (int i = 0; i + 1 < n; ++i) refine(gs[i], ms[i], gs[i + 1], ms[i + 1]);

    std::vector<FirstOrderPoint> out;
    for (auto c : cands) {
        // keep each end on its own branch while shrinking the bracket
        for (int it = 0; it < scan.bisection_steps && c.b - c.a > 4e-16 * gmax; ++it) {
            const double mid = 0.5 * (c.a + c.b);
            const double mm = mstar(mid);
            if (std::abs(mm - c.ma) <= std::abs(mm - c.mb)) {
                c.a = mid;
                c.ma = mm;
            } else {
                c.b = mid;
                c.mb = mm;
            }
        }
        const double gc = 0.5 * (c.a + c.b);
        Landscape L = symmetric_landscape(with_gamma(base, gc));
        const double sep = std::abs(c.ma - c.mb);
        if (sep < 1e-6) continue;
        const double window = std::min(0.05, 0.25 * sep);
        Minimum A = local_min_near(L, c.ma, window), B = local_min_near(L, c.mb, window);
        if (A.w > B.w) std::swap(A, B);
        if (B.w - A.w < 1e-6) continue;
        // a genuine first-order point has a free-energy maximum between the minima
        BarrierMetrics bm = barrier_between(L.free_energy, A.w, B.w, 1.0);
        const double noise = 1e-12 * std::max({1.0, std::abs(A.F), std::abs(B.F)});
        if (bm.height * 1.0 <= noise) continue;
        if (L.free_energy(bm.m_max) - std::max(A.F, B.F) <= noise) continue;
        bool dup = false;
        for (const auto& o : out)
            if (std::abs(o.gamma - gc) < 1e-9 * gmax) dup = true;
        if (!dup) out.push_back({gc, A.w, B.w, A.F, B.F});
    }
    std::sort(out.begin(), out.end(), [](auto& x, auto& y) { return x.gamma < y.gamma; });
    return out;
}

bool has_first_order(const ModelParams& params) { return !first_order_points(params).empty(); }

std::optional<double> locate_gamma_c1(const ModelParams& params, const SolverSettings& settings) {
    settings.validate();
    auto pts = first_order_points(params);
    if (pts.empty()) return std::nullopt;
    return pts.back().gamma;
}

BarrierMetrics barrier_metrics(const ModelParams& pr, const SolverSettings& settings) {
    settings.validate();
    Landscape L = symmetric_landscape(pr);
    auto mins = landscape_minima(L, 0.0, 1.0, settings.grid_points);
    if (mins.size() < 2) {
        BarrierMetrics bm;
        if (!mins.empty()) bm.m_low = bm.m_high = bm.m_max = mins.front().w;
        return bm;
    }
    std::sort(mins.begin(), mins.end(), [](auto& a, auto& b) { return a.F < b.F; });
    const double a = std::min(mins[0].w, mins[1].w), b = std::max(mins[0].w, mins[1].w);
    return barrier_between(L.free_energy, a, b, energy_scale(pr));
}

TransitionReport classify_transition(const ModelParams& pr, const SolverSettings& settings) {
    pr.validate();
    TransitionReport rep;
    if (antiferro(pr) && pr.q % 2 == 1) return rep;  // the odd penalty always orders locally
    auto g2 = locate_gamma_c2(pr);
    auto pts = first_order_points(pr);
    const double gs = gamma_scale(pr);
    if (g2) rep.gamma_c2 = *g2 / gs;
    if (!pts.empty()) {
        const auto& fp = pts.back();
        rep.gamma_c1 = fp.gamma / gs;
        rep.m_low = fp.m_low;
        rep.m_high = fp.m_high;
        settings.validate();
        Landscape L = symmetric_landscape(with_gamma(pr, fp.gamma));
        auto bm = barrier_between(L.free_energy, fp.m_low, fp.m_high, energy_scale(pr));
        rep.barrier_height = bm.height;
        rep.barrier_width = bm.width;
    }
    if (rep.gamma_c1 && rep.gamma_c2)
        rep.order = *rep.gamma_c1 > *rep.gamma_c2 ? TransitionOrder::first : TransitionOrder::coexisting_first_and_second;
    else if (rep.gamma_c1)
        rep.order = TransitionOrder::first;
    else if (rep.gamma_c2)
        rep.order = TransitionOrder::second;
    return rep;
}

namespace {

ModelParams with_lambda(ModelParams p, double l) {
    p.lambda = l;
    return p;
}

bool ordered_at_zero_field(const ModelParams& pr) {
    auto L = symmetric_landscape(with_gamma(pr, 0.0));
    return landscape_global_minimum(L, 0.0, 1.0, 401).w > 1e-6;
}

// lower end of the first-order window in lambda, or empty when there is none
std::optional<double> first_order_entry(const ModelParams& fam) {
    const double unit = std::pow(fam.nesting, fam.p - 2);
    double on = 0.0;
    if (!ordered_at_zero_field(with_lambda(fam, 0.0))) {
        double hi = unit;
        while (!ordered_at_zero_field(with_lambda(fam, hi))) {
            hi *= 2;
            if (hi > 1e4 * unit) return std::nullopt;
        }
        double lo = 0.0;
        for (int i = 0; i < 60 && hi - lo > 1e-13 * hi; ++i) {
            const double mid = 0.5 * (lo + hi);
            (ordered_at_zero_field(with_lambda(fam, mid)) ? hi : lo) = mid;
        }
        on = hi;
    }
    const double entry = on + 1e-7 * std::max(unit, on);
    if (!has_first_order(with_lambda(fam, entry))) return std::nullopt;
    return entry;
}

}  // namespace

std::optional<double> lambda_critical(const ModelParams& family, double temperature) {
    ModelParams fam = family;
    fam.temperature = temperature;
    fam.eta = 0.0;
    fam.validate();
    const double unit = std::pow(fam.nesting, fam.p - 2);
    auto entry = first_order_entry(fam);
    if (!entry) return std::nullopt;
    double lo = *entry;
    double hi = std::max(2 * lo, lo + unit);
    while (has_first_order(with_lambda(fam, hi))) {
        lo = hi;
        hi *= 2;
        if (hi > 1e4 * unit) throw NumericalError("first-order region does not close in lambda");
    }
    while ((hi - lo) / unit > 1e-5) {
        const double mid = 0.5 * (lo + hi);
        (has_first_order(with_lambda(fam, mid)) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi) / unit;
}

double first_order_ceiling(const ModelParams& family, double tolerance) {
    const double unit = std::pow(family.nesting, family.p);
    auto present = [&](double t) { return lambda_critical(family, t * unit).has_value(); };
    if (!present(0.0)) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (present(hi)) {
        lo = hi;
        hi *= 2;
        if (hi > 1e6) throw NumericalError("first-order region persists at all temperatures");
    }
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        (present(mid) ? lo : hi) = mid;
    }
    return hi;
}

std::vector<CurvePoint> hybrid_critical_line(const ModelParams& family, const std::vector<double>& eta_scaled) {
    ModelParams fam = family;
    fam.temperature = 0.0;
    fam.validate();
    const double C = fam.nesting;
    const double lunit = std::pow(C, fam.p - 2), eunit = std::pow(C, fam.p - 1);
    std::vector<CurvePoint> out;
    for (double e : eta_scaled) {
        ModelParams at = fam;
        at.eta = e * eunit;
        CurvePoint cp{e, 0.0, false};
        if (has_first_order(with_lambda(at, 0.0))) {
            double lo = 0.0, hi = lunit;
            while (has_first_order(with_lambda(at, hi))) {
                lo = hi;
                hi *= 2;
                if (hi > 1e4 * lunit) throw NumericalError("hybrid first-order region does not close");
            }
            while ((hi - lo) / lunit > 1e-5) {
                const double mid = 0.5 * (lo + hi);
                (has_first_order(with_lambda(at, mid)) ? lo : hi) = mid;
            }
            cp.y = 0.5 * (lo + hi) / lunit;
            cp.present = true;
        }
        out.push_back(cp);
    }
    return out;
}

std::optional<double> pqac_critical_eta(const ModelParams& family) {
    ModelParams fam = family;
    fam.temperature = 0.0;
    fam.lambda = 0.0;
    fam.validate();
    const double eunit = std::pow(fam.nesting, fam.p - 1);
    auto first = [&](double e) {
        ModelParams at = fam;
        at.eta = e * eunit;
        return has_first_order(at);
    };
    if (!first(0.0)) return std::nullopt;
    double lo = 0.0, hi = 0.1;
    while (first(hi)) {
        lo = hi;
        hi *= 2;
        if (hi > 1e4) return std::nullopt;
    }
    while (hi - lo > 1e-6) {
        const double mid = 0.5 * (lo + hi);
        (first(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::optional<double> tricritical_temperature(const ModelParams& family) {
    family.validate();
    if (family.p != 4 || family.q != 2 || antiferro(family) || family.J <= 0) return std::nullopt;
    const double C = family.nesting;
    // c2 vanishes at Gamma = 0 when lambda = T / (2C)
    auto c4 = [&](double t) {
        ModelParams pr = family;
        pr.gamma = 0.0;
        pr.eta = 0.0;
        pr.temperature = t * std::pow(C, 4);
        pr.lambda = pr.temperature / (2 * C);
        return taylor_coefficients(pr).c4;
    };
    double lo = 1e-3 * family.J / C, hi = 2 * lo;
    if (c4(lo) >= 0) return std::nullopt;
    while (c4(hi) < 0) {
        lo = hi;
        hi *= 2;
        if (hi > 1e6) return std::nullopt;
    }
    return root(c4, lo, hi);
}

}  // namespace nqac
