#include "nqac/metastability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Dense>

#include "nqac/parallel.hpp"
#include "nqac/saddle.hpp"

namespace nqac {

namespace {

// Every sector sits at w = sign(h) with nonzero h: the T = Gamma = 0 stability test.
// m is passed in exactly so that thresholds such as k/N = 0.05 are not blurred by rounding.
bool corner_stable(const ModelParams& pr, const std::vector<double>& f, const std::vector<double>& w, double m) {
    for (std::size_t j = 0; j < w.size(); ++j) {
        if (f[j] == 0.0) continue;
        if (!(w[j] * local_field(pr, m, w[j]) > 0.0)) return false;
    }
    return true;
}

std::vector<std::vector<double>> mixed_seeds(const std::vector<double>& corner) {
    std::vector<std::vector<double>> seeds{corner};
    for (double a : {0.9, 0.6, 0.3})
        for (double b : {0.9, 0.6, 0.3}) {
            auto s = corner;
            s[0] *= a;
            s[1] *= b;
            seeds.push_back(s);
        }
    return seeds;
}

// dw/dh of the single-spin response w = (h/E) tanh(beta E).
double response_slope(const ModelParams& pr, double h) {
    const double G = pr.gamma;
    const double E2 = h * h + G * G;
    if (E2 == 0.0) return pr.zero_temperature() ? std::numeric_limits<double>::infinity() : pr.beta();
    const double E = std::sqrt(E2);
    if (pr.zero_temperature()) return G * G / (E2 * E);
    const double t = std::tanh(pr.beta() * E);
    return t * G * G / (E2 * E) + pr.beta() * h * h * (1 - t * t) / E2;
}

}  // namespace

std::vector<double> variational_hessian_eigenvalues(const ModelParams& pr, const SectorConfig& c) {
    const int n = int(c.sectors.size());
    const double C = pr.nesting, m = c.magnetization();
    const double a = pr.sign() * pr.p * (pr.p - 1) * pr.J * std::pow(C, pr.p) * signed_pow(m, pr.p - 2);
    Eigen::MatrixXd H(n, n);
    for (int j = 0; j < n; ++j) {
        const auto& sj = c.sectors[j];
        for (int k = 0; k < n; ++k) H(j, k) = -a * sj.fraction * c.sectors[k].fraction;
        const double r = response_slope(pr, local_field(pr, m, sj.w));
        H(j, j) += -sj.fraction * pr.q * (pr.q - 1) * pr.lambda * std::pow(C, pr.q) * signed_pow(sj.w, pr.q - 2) +
                   (r > 0 ? C * sj.fraction / r : std::numeric_limits<double>::infinity());
    }
    if (!H.allFinite()) {
        // a saturated sector is pinned; drop it and look at the rest
        std::vector<double> ev;
        std::vector<int> keep;
        for (int j = 0; j < n; ++j)
            if (std::isfinite(H(j, j))) keep.push_back(j);
        Eigen::MatrixXd R(keep.size(), keep.size());
        for (std::size_t i = 0; i < keep.size(); ++i)
            for (std::size_t k = 0; k < keep.size(); ++k) R(i, k) = H(keep[i], keep[k]);
        if (keep.empty()) return {std::numeric_limits<double>::infinity()};
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(R, Eigen::EigenvaluesOnly);
        for (int i = 0; i < es.eigenvalues().size(); ++i) ev.push_back(es.eigenvalues()(i));
        return ev;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H, Eigen::EigenvaluesOnly);
    std::vector<double> ev;
    for (int i = 0; i < n; ++i) ev.push_back(es.eigenvalues()(i));
    return ev;
}

namespace {

bool locally_stable(const ModelParams& pr, const SectorConfig& c) {
    auto ev = variational_hessian_eigenvalues(pr, c);
    return *std::min_element(ev.begin(), ev.end()) >= -1e-8 * pr.norm_scale();
}

bool has_pattern(const ModelParams& pr, const std::vector<SaddleSolution>& sols, const std::vector<double>& corner) {
    for (const auto& s : sols) {
        if (!locally_stable(pr, s.config)) continue;
        bool ok = true;
        for (std::size_t j = 0; j < corner.size(); ++j)
            if (!(s.config.sectors[j].w * corner[j] > 1e-6)) ok = false;
        if (ok) return true;
    }
    return false;
}

void normalise(OccupancySpectrum& o) {
    double hi = -std::numeric_limits<double>::infinity();
    for (double l : o.log_weights) hi = std::max(hi, l);
    double z = 0.0;
    for (double l : o.log_weights) z += std::exp(l - hi);
    o.probabilities.clear();
    for (double l : o.log_weights) o.probabilities.push_back(std::exp(l - hi) / z);
}

double log_binomial(int n, int k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double axis_unit(const ModelParams& pr) { return std::pow(pr.nesting, pr.p - 1); }

ModelParams at_axis(ModelParams pr, MetaAxis axis, double y) {
    switch (axis) {
        case MetaAxis::gamma_over_C: pr.gamma = y * axis_unit(pr); break;
        case MetaAxis::T_over_C: pr.temperature = y * axis_unit(pr); break;
        case MetaAxis::lambda: pr.lambda = y; break;
    }
    return pr;
}

// Ordinate where exists(y) flips.  below: metastable for small y; above: for large y.
CurvePoint flip_point(double x, const std::function<bool(double)>& exists, MetaSide side) {
    CurvePoint cp{x, 0.0, false};
    const bool want_low = side == MetaSide::below;
    if (exists(0.0) != want_low) return cp;
    double lo = 0.0, hi = 0.05;
    while (exists(hi) == want_low) {
        lo = hi;
        hi *= 2;
        if (hi > 1e5) return cp;
    }
    while (hi - lo > 1e-5 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        (exists(mid) == want_low ? lo : hi) = mid;
    }
    cp.y = 0.5 * (lo + hi);
    cp.present = true;
    return cp;
}

MetaSide side_for(MetaAxis axis) { return axis == MetaAxis::lambda ? MetaSide::above : MetaSide::below; }

}  // namespace

std::string to_string(MetaAxis a) {
    switch (a) {
        case MetaAxis::gamma_over_C: return "gamma_over_C";
        case MetaAxis::T_over_C: return "T_over_C";
        case MetaAxis::lambda: return "lambda";
    }
    return "?";
}

bool fm_metastable_exists(const ModelParams& pr, double x) {
    pr.validate();
    if (!(x > 0.0 && x < 1.0)) throw InputError("k_over_N must lie in (0, 1)");
    if (pr.coupling != Coupling::ferro) throw InputError("fm_metastable_exists needs ferro coupling");
    const std::vector<double> f{1.0 - x, x};
    const std::vector<double> corner{1.0, -1.0};
    if (pr.zero_temperature() && pr.gamma == 0.0) return corner_stable(pr, f, corner, 1.0 - 2.0 * x);
    return has_pattern(pr, solve_sectored_from(pr, f, mixed_seeds(corner)), corner);
}

bool af_metastable_exists(const ModelParams& pr, int k, int N, bool upper) {
    pr.validate();
    if (N < 2 || N % 2 != 0) throw InputError("af_metastable_exists needs even N >= 2");
    if (k < 0 || k > N / 2 - 1) throw InputError("af_metastable_exists needs 0 <= k <= N/2 - 1");
    if (pr.coupling != Coupling::antiferro) throw InputError("af_metastable_exists needs antiferro coupling");
    const double n = N;
    const std::vector<double> f{(n / 2 - k - 1) / n, (n / 2 + k) / n, 1.0 / n};
    const std::vector<double> corner{1.0, -1.0, upper ? -1.0 : 1.0};
    if (pr.zero_temperature() && pr.gamma == 0.0) return corner_stable(pr, f, corner, -2.0 * (upper ? k + 1 : k) / n);
    return has_pattern(pr, solve_sectored_from(pr, f, mixed_seeds(corner)), corner);
}

OccupancySpectrum af_occupancy(double J, double C, double lam, double beta, int N) {
    if (!(J > 0 && C >= 1 && lam >= 0 && beta >= 0) || N < 2 || N % 2 != 0)
        throw InputError("af_occupancy needs J > 0, C >= 1, lam >= 0, beta >= 0 and even N >= 2");
    OccupancySpectrum o;
    for (int i = 0; i <= N / 2; ++i) {
        const double m = 2.0 * i / N;
        const double E = C * C * (J * m * m - lam);
        const double ld = (i == 0 ? 0.0 : std::log(2.0)) + log_binomial(N, N / 2 + i);
        o.k.push_back(i);
        o.energies.push_back(E);
        o.log_degeneracy.push_back(ld);
        // lam shifts every level equally, so it drops out of the weights
        o.log_weights.push_back(ld - beta * N * C * C * J * m * m);
    }
    normalise(o);
    return o;
}

OccupancySpectrum fm_occupancy(const ModelParams& pr, int N) {
    pr.validate();
    if (pr.p != 2 || pr.q != 2 || pr.coupling != Coupling::ferro) throw InputError("fm_occupancy covers the p = q = 2 ferromagnet");
    if (N < 2) throw InputError("fm_occupancy needs N >= 2");
    const double C = pr.nesting;
    OccupancySpectrum o;
    ModelParams cold = pr;
    cold.temperature = 0.0;
    cold.gamma = 0.0;
    for (int k = 0; 2 * k <= N; ++k) {
        if (k > 0 && !fm_metastable_exists(cold, double(k) / N)) continue;
        const double m = 1.0 - 2.0 * k / N;
        const double E = -C * C * (pr.J * m * m + pr.lambda);
        const double ld = DegeneracyTerm::make(N, k).log_degeneracy;
        o.k.push_back(k);
        o.energies.push_back(E);
        o.log_degeneracy.push_back(ld);
        // energies measured from the ground level keep the exponent small
        const double dE = E + C * C * (pr.J + pr.lambda);
        if (pr.zero_temperature())
            o.log_weights.push_back(k == 0 ? 0.0 : -std::numeric_limits<double>::infinity());
        else
            o.log_weights.push_back(ld - pr.beta() * N * dE);

        double Fk = std::numeric_limits<double>::quiet_NaN();
        if (k == 0) {
            Fk = free_energy_with_degeneracy(pr, N, 0, global_minimum(pr, {}, 1).config.magnetization(), 0.0);
        } else {
            const double x = double(k) / N;
            auto sols = solve_sectored_from(pr, {1.0 - x, x}, mixed_seeds({1.0, -1.0}));
            for (const auto& s : sols)
                if (locally_stable(pr, s.config) && s.config.sectors[0].w > 0 && s.config.sectors[1].w < 0)
                    Fk = free_energy_with_degeneracy(pr, N, k, s.config.sectors[0].w, s.config.sectors[1].w);
        }
        o.free_energy_over_C2.push_back(Fk / (C * C));
    }
    normalise(o);
    return o;
}

MetastabilityRegion fm_metastability_region(const ModelParams& pr, MetaAxis axis, const std::vector<double>& xs,
                                            int jobs) {
    pr.validate();
    MetastabilityRegion r;
    r.axis1 = "k_over_N";
    r.axis2 = to_string(axis);
    r.side_with_metastable = side_for(axis);
    r.boundary.resize(xs.size());
    parallel_for(xs.size(), jobs, [&](std::size_t i) {
        const double x = xs[i];
        r.boundary[i] = flip_point(
            x, [&](double y) { return fm_metastable_exists(at_axis(pr, axis, y), x); }, r.side_with_metastable);
    });
    return r;
}

MetastabilityRegion af_metastability_region(const ModelParams& pr, int N, MetaAxis axis, const std::vector<int>& ks,
                                            int jobs) {
    pr.validate();
    MetastabilityRegion r;
    r.axis1 = "k_over_N";
    r.axis2 = to_string(axis);
    r.side_with_metastable = side_for(axis);
    r.boundary.resize(ks.size());
    parallel_for(ks.size(), jobs, [&](std::size_t i) {
        const int k = ks[i];
        r.boundary[i] = flip_point(
            double(k) / N, [&](double y) { return af_metastable_exists(at_axis(pr, axis, y), k, N); },
            r.side_with_metastable);
    });
    return r;
}

MetastabilityRegion af_lambda_boundary(const ModelParams& pr, int N, int k, const std::vector<double>& gs, int jobs) {
    pr.validate();
    MetastabilityRegion r;
    r.axis1 = "gamma_over_C";
    r.axis2 = "lambda";
    r.side_with_metastable = MetaSide::above;
    r.boundary.resize(gs.size());
    parallel_for(gs.size(), jobs, [&](std::size_t i) {
        const ModelParams at = at_axis(pr, MetaAxis::gamma_over_C, gs[i]);
        r.boundary[i] = flip_point(
            gs[i], [&](double l) { return af_metastable_exists(at_axis(at, MetaAxis::lambda, l), k, N); },
            MetaSide::above);
    });
    return r;
}

}  // namespace nqac
