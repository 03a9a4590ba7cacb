#include "nqac/gap.hpp"

#include <cmath>

namespace nqac {

double ground_state_angle(double h, double gamma) { return std::atan2(gamma, h); }

GapEstimate instanton_overlap(const ModelParams& pr, double m0, double mc) {
    pr.validate();
    auto field = [&](double m) {
        // magnitudes only: the ferromagnetic branch of h(m)
        const double C = pr.nesting;
        return pr.p * pr.J * std::pow(C, pr.p - 1) * signed_pow(m, pr.p - 1) +
               pr.q * pr.lambda * std::pow(C, pr.q - 1) * signed_pow(m, pr.q - 1);
    };
    const double a0 = ground_state_angle(field(m0), pr.gamma);
    const double ac = ground_state_angle(field(mc), pr.gamma);
    GapEstimate g;
    g.overlap = std::min(1.0, std::abs(std::cos(0.5 * (a0 - ac))));
    g.log_gap_per_spin = std::log(g.overlap);
    g.at_params = pr;
    return g;
}

GapEstimate instanton_at_transition(const ModelParams& pr) {
    auto pts = first_order_points(pr);
    if (pts.empty()) {
        GapEstimate g;
        g.at_params = pr;
        return g;
    }
    ModelParams at = pr;
    at.gamma = pts.back().gamma;
    return instanton_overlap(at, pts.back().m_low, pts.back().m_high);
}

SpinWaveSpectrum spinwave_spectrum(double J, double C, double lam, double gamma) {
    if (!(J > 0 && C > 0 && lam > 0 && gamma >= 0)) throw InputError("spinwave_spectrum needs J, C, lam > 0 and gamma >= 0");
    SpinWaveSpectrum s;
    const double gc = 2 * J * C * lam;
    const double c = gamma >= gc ? 1.0 : gamma / gc;
    s.theta = gamma >= gc ? 0.0 : std::acos(c);
    const double sn2 = 1 - c * c;
    s.A = J * C * (1 - lam) * c * c + 2 * J * C * lam * sn2 + gamma * c;
    s.B = 2 * J * C * lam * sn2 - J * C * lam * c * c + gamma * c;
    s.lambda_A = J * C * (1 - lam) * c * c / s.A;
    s.lambda_B = -J * C * lam * c * c / s.B;
    double w0sq, w1sq;
    if (gamma >= gc) {
        w0sq = gamma * gamma + 2 * J * C * (1 - lam) * gamma;
        w1sq = gamma * (gamma - gc);
    } else {
        w0sq = gc * gc + (1 - lam) * gamma * gamma / lam;
        w1sq = gc * gc - gamma * gamma;
    }
    auto root = [&](double v) {
        const double tol = 1e-12 * std::max(1.0, gc * gc + gamma * gamma);
        if (v < -tol) throw NumericalError("negative spin-wave frequency squared (branch misassigned)");
        return v < 0 ? 0.0 : std::sqrt(v);
    };
    s.omega0 = root(w0sq);
    s.omega1 = root(w1sq);
    return s;
}

std::pair<double, double> gap_exponent_fit(const std::vector<double>& delta, const std::vector<double>& omega) {
    if (delta.size() != omega.size() || delta.size() < 2) throw InputError("fit needs matching samples, at least two");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = double(delta.size());
    for (std::size_t i = 0; i < delta.size(); ++i) {
        if (!(delta[i] > 0 && omega[i] > 0)) throw InputError("fit needs positive delta and omega");
        const double x = std::log(delta[i]), y = std::log(omega[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double den = n * sxx - sx * sx;
    if (std::abs(den) <= 1e-12 * n * sxx) throw InputError("degenerate sample spacing");
    const double slope = (n * sxy - sx * sy) / den;
    const double icpt = (sy - slope * sx) / n;
    return {slope, std::exp(icpt)};
}

}  // namespace nqac
