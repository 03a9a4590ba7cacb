#include "nqac/saddle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <limits>

namespace nqac {

namespace {

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

// finite-temperature (or T = 0) single-spin term Phi(E) = T log 2cosh(E/T)
double phi(double E, double T) { return T == 0.0 ? E : T * log_2cosh(E / T); }

double fd_slope(const std::function<double(double)>& F, double w) {
    const double h = 1e-6;
    return (F(w + h) - F(w - h)) / (2 * h);
}

double find_root(const std::function<double(double)>& g, double a, double b) {
    double ga = g(a), gb = g(b);
    if (ga == 0.0) return a;
    if (gb == 0.0) return b;
    boost::uintmax_t iters = 200;
    auto tol = boost::math::tools::eps_tolerance<double>(52);
    auto r = boost::math::tools::toms748_solve(g, a, b, ga, gb, tol, iters);
    return 0.5 * (r.first + r.second);
}

}  // namespace

std::string to_string(Stability s) {
    switch (s) {
        case Stability::local_min: return "local_min";
        case Stability::saddle: return "saddle";
        case Stability::local_max: return "local_max";
    }
    return "?";
}

void SolverSettings::validate() const {
    if (grid_points < 3 || grid_points % 2 == 0) throw InputError("grid_points must be odd and >= 3");
    if (!(fp_tolerance > 0)) throw InputError("fp_tolerance must be positive");
    if (max_iterations < 1) throw InputError("max_iterations must be >= 1");
    if (!(damping > 0 && damping <= 1)) throw InputError("damping must lie in (0,1]");
}

Landscape symmetric_landscape(const ModelParams& pr) {
    pr.validate();
    const double C = pr.nesting, T = pr.temperature, G = pr.gamma, eta = pr.eta;
    const int p = pr.p, q = pr.q;
    const double a = (p - 1) * pr.sign() * pr.J * std::pow(C, p);
    const double b = (q - 1) * pr.lambda * std::pow(C, q);
    const double hp = pr.sign() * p * pr.J * std::pow(C, p - 1);
    const double hq = q * pr.lambda * std::pow(C, q - 1);
    const double beta = T > 0 ? 1.0 / T : 0.0;

    auto spow = [](double x, int n) {
        const double v = ipow(std::abs(x), n);
        return (x < 0 && n % 2) ? -v : v;
    };

    Landscape L;
    L.norm = pr.norm_scale();
    const bool even = (p % 2 == 0) && (q % 2 == 0);

    if (pr.coupling == Coupling::antiferro) {
        // local order n, m = 0: the logical coupling drops out
        L.z2 = (q % 2 == 0);
        L.free_energy = [=](double n) {
            const double e1 = std::hypot(hq * spow(n, q - 1), G);
            const double e2 = std::hypot(hq * spow(-n, q - 1), G);
            if (eta > 0) {
                auto branch = [&](double h) {
                    const double vp = std::hypot(h + eta, G), vm = std::hypot(h - eta, G);
                    if (T == 0.0) return C * std::max(vp, vm);
                    const double lp = C * log_2cosh(beta * vp), lm = C * log_2cosh(beta * vm);
                    const double hi = std::max(lp, lm);
                    return T * (hi + std::log1p(std::exp(-std::abs(lp - lm))) - std::log(2.0));
                };
                return 0.5 * b * (spow(n, q) + spow(-n, q)) -
                       0.5 * (branch(hq * spow(n, q - 1)) + branch(hq * spow(-n, q - 1)));
            }
            return 0.5 * b * (spow(n, q) + spow(-n, q)) - 0.5 * C * (phi(e1, T) + phi(e2, T));
        };
        L.rhs = [pr](double n) {
            return pr.eta > 0 ? saddle_rhs_hybrid(pr, 0.0, n) : saddle_rhs(pr, 0.0, n);
        };
        if (q % 2 == 0 && eta == 0) {
            L.slope = [=](double n) {
                const double h = hq * spow(n, q - 1);
                const double E = std::hypot(h, G);
                const double r = E == 0 ? 0.0 : (T == 0 ? h / E : h / E * std::tanh(beta * E));
                return C * hq * (q - 1) * spow(n, q - 2) * (n - r);
            };
        } else {
            auto F = L.free_energy;
            L.slope = [F](double n) { return fd_slope(F, n); };
        }
        L.config = [](double n) { return SectorConfig{{{0.5, n}, {0.5, -n}}}; };
        return L;
    }

    L.z2 = even;
    if (eta > 0) {
        L.free_energy = [=](double m) {
            const double h = hp * spow(m, p - 1) + hq * spow(m, q - 1);
            const double vp = std::hypot(h + eta, G), vm = std::hypot(h - eta, G);
            double quantum;
            if (T == 0.0) {
                quantum = C * std::max(vp, vm);
            } else {
                const double lp = C * log_2cosh(beta * vp), lm = C * log_2cosh(beta * vm);
                const double hi = std::max(lp, lm);
                quantum = T * (hi + std::log1p(std::exp(-std::abs(lp - lm))) - std::log(2.0));
            }
            return a * spow(m, p) + b * spow(m, q) - quantum;
        };
        L.rhs = [pr](double m) { return saddle_rhs_hybrid(pr, m, m); };
        auto F = L.free_energy;
        L.slope = [F](double m) { return fd_slope(F, m); };
    } else {
        L.free_energy = [=](double m) {
            const double h = hp * spow(m, p - 1) + hq * spow(m, q - 1);
            return a * spow(m, p) + b * spow(m, q) - C * phi(std::hypot(h, G), T);
        };
        L.rhs = [=](double m) {
            const double h = hp * spow(m, p - 1) + hq * spow(m, q - 1);
            const double E = std::hypot(h, G);
            if (E == 0.0) return 0.0;
            return T == 0 ? h / E : h / E * std::tanh(beta * E);
        };
        L.slope = [=](double m) {
            const double h = hp * spow(m, p - 1) + hq * spow(m, q - 1);
            const double dh = hp * (p - 1) * spow(m, p - 2) + hq * (q - 1) * spow(m, q - 2);
            const double E = std::hypot(h, G);
            const double r = E == 0 ? 0.0 : (T == 0 ? h / E : h / E * std::tanh(beta * E));
            return C * dh * (m - r);
        };
    }
    L.config = [](double m) { return SectorConfig::symmetric(m); };
    return L;
}

Stability classify_1d(const Landscape& L, double w, double lo, double hi) {
    for (double d : {1e-5, 1e-4, 1e-3, 1e-2}) {
        const double left = w - d >= lo ? L.slope(w - d) : std::numeric_limits<double>::quiet_NaN();
        const double right = w + d <= hi ? L.slope(w + d) : std::numeric_limits<double>::quiet_NaN();
        const double tiny = 1e-13 * L.norm;
        const bool lneg = std::isnan(left) || left < -tiny;
        const bool lpos = std::isnan(left) || left > tiny;
        const bool rpos = std::isnan(right) || right > tiny;
        const bool rneg = std::isnan(right) || right < -tiny;
        if (std::isnan(left) && std::isnan(right)) break;
        if (lneg && rpos) return Stability::local_min;
        if (lpos && rneg) return Stability::local_max;
        const bool resolved = (std::isnan(left) || std::abs(left) > tiny) && (std::isnan(right) || std::abs(right) > tiny);
        if (resolved) return Stability::saddle;
    }
    return Stability::saddle;
}

std::vector<Minimum> landscape_minima(const Landscape& L, double lo, double hi, int grid) {
    std::vector<double> x(grid), f(grid);
    for (int i = 0; i < grid; ++i) {
        x[i] = lo + (hi - lo) * i / (grid - 1);
        f[i] = L.free_energy(x[i]);
    }
    auto g = [&](double w) { return w - L.rhs(w); };
    std::vector<Minimum> out;
    for (int i = 0; i < grid; ++i) {
        const bool left_ok = i == 0 || f[i] <= f[i - 1];
        const bool right_ok = i == grid - 1 || f[i] <= f[i + 1];
        if (!(left_ok && right_ok)) continue;
        // flat plateaus would give runs of equal points; keep the first only
        if (i > 0 && f[i] == f[i - 1]) continue;
        const double a = x[std::max(i - 1, 0)];
        const double b = x[std::min(i + 1, grid - 1)];
        auto res = boost::math::tools::brent_find_minima(L.free_energy, a, b, 52);
        Minimum m{res.first, res.second};
        if (f[i] < m.F) m = {x[i], f[i]};
        const double ga = g(a), gb = g(b);
        if ((ga < 0 && gb > 0) || ga == 0 || gb == 0) {
            const double r = find_root(g, a, b);
            const double fr = L.free_energy(r);
            if (fr <= m.F + 1e-14 * std::max(1.0, std::abs(m.F))) m = {r, fr};
        }
        out.push_back(m);
    }
    return out;
}

Minimum landscape_global_minimum(const Landscape& L, double lo, double hi, int grid) {
    auto mins = landscape_minima(L, lo, hi, grid);
    if (mins.empty()) throw NumericalError("landscape has no minimum on the grid");
    return *std::min_element(mins.begin(), mins.end(), [](const Minimum& a, const Minimum& b) { return a.F < b.F; });
}

std::vector<SaddleSolution> solve_landscape(const Landscape& L, const SolverSettings& settings) {
    settings.validate();
    const int n = settings.grid_points;
    auto g = [&](double w) { return w - L.rhs(w); };
    std::vector<double> x(n), gx(n);
    for (int i = 0; i < n; ++i) {
        x[i] = -1.0 + 2.0 * i / (n - 1);
        if (i == (n - 1) / 2) x[i] = 0.0;
        gx[i] = g(x[i]);
    }
    std::vector<double> roots;
    for (int i = 0; i < n; ++i) {
        if (gx[i] == 0.0) roots.push_back(x[i]);
        if (i + 1 < n && gx[i] != 0.0 && gx[i + 1] != 0.0 && (gx[i] < 0) != (gx[i + 1] < 0)) {
            const double r = find_root(g, x[i], x[i + 1]);
            // a sign flip across a discontinuity of rhs is not a fixed point
            if (std::abs(g(r)) <= 1e-8) roots.push_back(r);
        }
    }
    std::sort(roots.begin(), roots.end());
    std::vector<double> uniq;
    for (double r : roots)
        if (uniq.empty() || std::abs(r - uniq.back()) > 1e-8) uniq.push_back(r);

    std::vector<SaddleSolution> out;
    for (double r : uniq) {
        if (L.z2 && r < -1e-8) continue;
        if (L.z2 && std::abs(r) <= 1e-8) r = 0.0;
        SaddleSolution s;
        s.config = L.config(r);
        s.residual = std::abs(g(r));
        s.free_energy = L.free_energy(r);
        s.stability = classify_1d(L, r);
        s.multiplicity = (L.z2 && r > 0) ? 2 : 1;
        const double h = 1e-4;
        const double lo = std::max(-1.0, r - h), hi = std::min(1.0, r + h);
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        s.hessian_eigenvalues = {(L.free_energy(hi) - 2 * L.free_energy(mid) + L.free_energy(lo)) / (half * half)};
        out.push_back(s);
    }
    if (out.empty()) throw NumericalError("no fixed point found on the grid");
    return out;
}

std::vector<SaddleSolution> solve_symmetric(const ModelParams& params, const SolverSettings& settings) {
    return solve_landscape(symmetric_landscape(params), settings);
}

std::vector<double> free_energy_gradient(const ModelParams& pr, const SectorConfig& config) {
    const double C = pr.nesting;
    const double m = config.magnetization();
    const double A = pr.sign() * pr.p * (pr.p - 1) * pr.J * std::pow(C, pr.p - 1) * signed_pow(m, pr.p - 2);
    double mean_r = 0.0;
    std::vector<double> r(config.sectors.size());
    for (std::size_t k = 0; k < r.size(); ++k) {
        r[k] = saddle_rhs(pr, m, config.sectors[k].w);
        mean_r += config.sectors[k].fraction * r[k];
    }
    std::vector<double> grad(r.size());
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double w = config.sectors[j].w;
        const double B = pr.q * (pr.q - 1) * pr.lambda * std::pow(C, pr.q - 1) * signed_pow(w, pr.q - 2);
        grad[j] = C * config.sectors[j].fraction * (A * (m - mean_r) + B * (w - r[j]));
    }
    return grad;
}

std::vector<std::vector<double>> free_energy_hessian(const ModelParams& pr, const SectorConfig& config,
                                                     double step) {
    const std::size_t n = config.sectors.size();
    std::vector<std::vector<double>> H(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
        SectorConfig up = config, dn = config;
        up.sectors[j].w += step;
        dn.sectors[j].w -= step;
        auto gu = free_energy_gradient(pr, up);
        auto gd = free_energy_gradient(pr, dn);
        for (std::size_t i = 0; i < n; ++i) H[i][j] = (gu[i] - gd[i]) / (2 * step);
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) H[i][j] = H[j][i] = 0.5 * (H[i][j] + H[j][i]);
    return H;
}

double sector_residual(const ModelParams& pr, const SectorConfig& config) {
    const double m = config.magnetization();
    double res = 0.0;
    for (const auto& s : config.sectors) res = std::max(res, std::abs(s.w - saddle_rhs(pr, m, s.w)));
    return res;
}

namespace {

std::vector<double> hessian_eigenvalues(const ModelParams& pr, const SectorConfig& c) {
    auto H = free_energy_hessian(pr, c);
    const int n = int(H.size());
    Eigen::MatrixXd M(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = H[i][j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = es.eigenvalues()(i);
    return ev;
}

Stability stability_from(const std::vector<double>& ev, double tol) {
    const double lo = *std::min_element(ev.begin(), ev.end());
    const double hi = *std::max_element(ev.begin(), ev.end());
    if (lo >= -tol) return Stability::local_min;
    if (hi <= tol) return Stability::local_max;
    return Stability::saddle;
}

std::vector<double> fixed_point_map(const ModelParams& pr, const std::vector<double>& f, const std::vector<double>& w) {
    double m = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) m += f[j] * w[j];
    std::vector<double> out(w.size());
    for (std::size_t j = 0; j < w.size(); ++j) out[j] = saddle_rhs(pr, m, w[j]);
    return out;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// Newton on G(w) = w - R(w) with a finite-difference Jacobian.
bool newton_polish(const ModelParams& pr, const std::vector<double>& f, std::vector<double>& w, double tol) {
    const int n = int(w.size());
    for (int it = 0; it < 50; ++it) {
        auto R = fixed_point_map(pr, f, w);
        Eigen::VectorXd G(n);
        for (int i = 0; i < n; ++i) G(i) = w[i] - R[i];
        if (G.cwiseAbs().maxCoeff() < tol) return true;
        Eigen::MatrixXd Jm(n, n);
        for (int j = 0; j < n; ++j) {
            const double h = 1e-7;
            auto wp = w, wm = w;
            wp[j] += h;
            wm[j] -= h;
            auto Rp = fixed_point_map(pr, f, wp), Rm = fixed_point_map(pr, f, wm);
            for (int i = 0; i < n; ++i) Jm(i, j) = (i == j ? 1.0 : 0.0) - (Rp[i] - Rm[i]) / (2 * h);
        }
        Eigen::VectorXd dx = Jm.fullPivLu().solve(G);
        if (!dx.allFinite()) return false;
        for (int i = 0; i < n; ++i) w[i] = std::clamp(w[i] - dx(i), -1.0, 1.0);
    }
    auto R = fixed_point_map(pr, f, w);
    return max_abs_diff(w, R) < tol;
}

}  // namespace

std::vector<SaddleSolution> solve_sectored_from(const ModelParams& pr, const std::vector<double>& f,
                                                const std::vector<std::vector<double>>& seeds,
                                                const SolverSettings& settings, SectoredDiagnostics* diag) {
    pr.validate();
    settings.validate();
    if (f.size() < 2 || f.size() > 3) throw InputError("solve_sectored needs 2 or 3 sectors");
    double total = 0.0;
    for (double x : f) total += x;
    if (std::abs(total - 1.0) > 1e-12) throw InputError("sector fractions do not sum to 1");

    SectoredDiagnostics d;
    std::vector<std::vector<double>> found;
    const double d0 = settings.damping;
    for (const auto& seed : seeds) {
        ++d.seeds;
        std::vector<double> w = seed;
        bool close = false;
        for (int it = 0; it < settings.max_iterations; ++it) {
            ++d.iterations;
            auto R = fixed_point_map(pr, f, w);
            const double res = max_abs_diff(w, R);
            if (res < 1e-7) {
                close = true;
                break;
            }
            for (std::size_t j = 0; j < w.size(); ++j) w[j] = (1 - d0) * w[j] + d0 * R[j];
        }
        if (!close) continue;
        if (!newton_polish(pr, f, w, settings.fp_tolerance)) continue;
        ++d.converged;
        bool dup = false;
        for (const auto& u : found)
            if (max_abs_diff(u, w) < 1e-8) dup = true;
        if (!dup) found.push_back(w);
    }
    std::sort(found.begin(), found.end());

    std::vector<SaddleSolution> out;
    for (const auto& w : found) {
        SaddleSolution s;
        s.config = SectorConfig::from(f, w);
        s.residual = sector_residual(pr, s.config);
        s.free_energy = free_energy(pr, s.config);
        s.hessian_eigenvalues = hessian_eigenvalues(pr, s.config);
        s.stability = stability_from(s.hessian_eigenvalues, 1e-8 * pr.norm_scale());
        out.push_back(s);
    }
    if (diag) *diag = d;
    return out;
}

std::vector<SaddleSolution> solve_sectored(const ModelParams& pr, const std::vector<double>& f,
                                           const SolverSettings& settings, SectoredDiagnostics* diag) {
    const int n = int(f.size());
    if (n < 2 || n > 3) throw InputError("solve_sectored needs 2 or 3 sectors");
    std::vector<std::vector<double>> seeds;
    std::vector<int> idx(n, 0);
    // 3^n sign-pattern corners
    const int corners = n == 2 ? 9 : 27;
    for (int c = 0; c < corners; ++c) {
        std::vector<double> s(n);
        int k = c;
        for (int j = 0; j < n; ++j) {
            s[j] = double(k % 3) - 1.0;
            k /= 3;
        }
        seeds.push_back(s);
    }
    const int g = 11;
    const int total = n == 2 ? g * g : g * g * g;
    for (int c = 0; c < total; ++c) {
        std::vector<double> s(n);
        int k = c;
        for (int j = 0; j < n; ++j) {
            s[j] = -1.0 + 2.0 * (k % g) / (g - 1);
            k /= g;
        }
        seeds.push_back(s);
    }
    return solve_sectored_from(pr, f, seeds, settings, diag);
}

SaddleSolution global_minimum(const ModelParams& params, const SolverSettings& settings, int sectors) {
    if (sectors < 1 || sectors > 3) throw InputError("global_minimum supports 1 to 3 sectors");
    if (sectors == 1) return global_minimum(params, settings, std::vector<double>{1.0});
    return global_minimum(params, settings, std::vector<double>(sectors, 1.0 / sectors));
}

SaddleSolution global_minimum(const ModelParams& pr, const SolverSettings& settings, const std::vector<double>& f) {
    pr.validate();
    settings.validate();
    if (f.size() == 1) {
        Landscape L = symmetric_landscape(pr);
        auto g = [&](double w) { return w - L.rhs(w); };
        // F minima that are not fixed points (boundary, or where h' = 0) are dropped
        std::vector<Minimum> keep;
        for (const auto& m : landscape_minima(L, -1.0, 1.0, settings.grid_points))
            if (std::abs(g(m.w)) <= 1e-8) keep.push_back(m);
        if (keep.empty()) throw NumericalError("grid scan found no stationary minimum");
        auto best = *std::min_element(keep.begin(), keep.end(), [](auto& a, auto& b) { return a.F < b.F; });
        SaddleSolution s;
        s.config = L.config(best.w);
        s.residual = std::abs(g(best.w));
        s.free_energy = best.F;
        s.stability = Stability::local_min;
        s.multiplicity = (L.z2 && std::abs(best.w) > 1e-8) ? 2 : 1;
        return s;
    }

    // multi-sector: coarse cube scan, coordinate descent, Newton on the gradient
    const int n = int(f.size());
    const int g = n == 2 ? std::min(settings.grid_points, 201) : std::min(settings.grid_points, 41);
    auto F = [&](const std::vector<double>& w) { return free_energy(pr, SectorConfig::from(f, w)); };
    std::vector<std::pair<double, std::vector<double>>> pts;
    std::vector<double> w(n);
    const int total = n == 2 ? g * g : g * g * g;
    for (int c = 0; c < total; ++c) {
        int k = c;
        for (int j = 0; j < n; ++j) {
            w[j] = -1.0 + 2.0 * (k % g) / (g - 1);
            k /= g;
        }
        pts.push_back({F(w), w});
    }
    std::sort(pts.begin(), pts.end());
    const std::size_t keep = std::min<std::size_t>(pts.size(), 12);
    SaddleSolution best;
    bool have = false;
    for (std::size_t c = 0; c < keep; ++c) {
        auto x = pts[c].second;
        for (int sweep = 0; sweep < 30; ++sweep) {
            auto prev = x;
            for (int j = 0; j < n; ++j) {
                auto line = [&](double t) {
                    auto y = x;
                    y[j] = t;
                    return F(y);
                };
                const double span = sweep == 0 ? 2.0 / (g - 1) : 0.05;
                auto r = boost::math::tools::brent_find_minima(line, std::max(-1.0, x[j] - span),
                                                               std::min(1.0, x[j] + span), 52);
                x[j] = r.first;
            }
            if (max_abs_diff(prev, x) < 1e-12) break;
        }
        newton_polish(pr, f, x, settings.fp_tolerance);
        SectorConfig cfg = SectorConfig::from(f, x);
        if (sector_residual(pr, cfg) > 1e-8) continue;
        auto ev = hessian_eigenvalues(pr, cfg);
        if (stability_from(ev, 1e-8 * pr.norm_scale()) != Stability::local_min) continue;
        const double Fv = free_energy(pr, cfg);
        if (!have || Fv < best.free_energy) {
            best.config = cfg;
            best.free_energy = Fv;
            best.residual = sector_residual(pr, cfg);
            best.stability = Stability::local_min;
            best.hessian_eigenvalues = ev;
            have = true;
        }
    }
    if (!have) throw NumericalError("grid scan found no stationary minimum");
    return best;
}

}  // namespace nqac
