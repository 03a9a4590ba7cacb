#include "nqac/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace nqac {

namespace {

constexpr double kLog2 = 0.69314718055994530942;

std::string describe(const ModelParams& p) {
    std::ostringstream os;
    os << "p=" << p.p << " q=" << p.q << " J=" << p.J << " lambda=" << p.lambda << " eta=" << p.eta
       << " gamma=" << p.gamma << " T=" << p.temperature << " C=" << p.nesting << " coupling="
       << to_string(p.coupling);
    return os.str();
}

void require_finite(double value, const ModelParams& params, const char* what) {
    if (!std::isfinite(value)) {
        // name the parameter most likely responsible
        std::string culprit = "gamma";
        if (!std::isfinite(params.temperature) || params.temperature > 1e300) culprit = "temperature";
        else if (params.nesting > 1e6) culprit = "nesting";
        else if (params.lambda > 1e100) culprit = "lambda";
        else if (params.J > 1e100) culprit = "J";
        throw NumericalError(std::string(what) + " is not finite (check parameter '" + culprit + "'; " +
                             describe(params) + ")");
    }
}

// log(exp(a) + exp(b))
double log_add_exp(double a, double b) {
    const double hi = std::max(a, b);
    return hi + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace

double ModelParams::norm_scale() const { return std::pow(nesting, norm_exponent()); }

void ModelParams::validate() const {
    auto bad = [](const std::string& msg) { throw InputError(msg); };
    if (p < 2) bad("p must be >= 2");
    if (q < 2) bad("q must be >= 2");
    if (!std::isfinite(J) || J < 0) bad("J must be finite and >= 0");
    if (!std::isfinite(lambda) || lambda < 0) bad("lambda must be finite and >= 0");
    if (!std::isfinite(eta) || eta < 0) bad("eta must be finite and >= 0");
    if (!std::isfinite(gamma) || gamma < 0) bad("gamma must be finite and >= 0");
    if (!std::isfinite(temperature) || temperature < 0) bad("temperature must be finite and >= 0");
    if (!std::isfinite(nesting) || nesting < 1) bad("nesting must be finite and >= 1");
}

SectorConfig SectorConfig::symmetric(double m) { return SectorConfig{{{1.0, m}}}; }

SectorConfig SectorConfig::two_sector(double k_over_N, double w1, double w2) {
    return SectorConfig{{{1.0 - k_over_N, w1}, {k_over_N, w2}}};
}

SectorConfig SectorConfig::three_sector(int N, int k, double w1, double w2, double w3) {
    const double n = N;
    return SectorConfig{{{(n / 2 - k - 1) / n, w1}, {(n / 2 + k) / n, w2}, {1.0 / n, w3}}};
}

SectorConfig SectorConfig::from(const std::vector<double>& fractions, const std::vector<double>& w) {
    if (fractions.size() != w.size()) throw InputError("fractions and w differ in length");
    SectorConfig c;
    for (std::size_t i = 0; i < w.size(); ++i) c.sectors.push_back({fractions[i], w[i]});
    return c;
}

double SectorConfig::magnetization() const {
    double m = 0.0;
    for (const auto& s : sectors) m += s.fraction * s.w;
    return m;
}

std::vector<double> SectorConfig::fractions() const {
    std::vector<double> out;
    for (const auto& s : sectors) out.push_back(s.fraction);
    return out;
}

std::vector<double> SectorConfig::values() const {
    std::vector<double> out;
    for (const auto& s : sectors) out.push_back(s.w);
    return out;
}

void SectorConfig::validate() const {
    if (sectors.empty()) throw InputError("sector configuration is empty");
    double total = 0.0;
    for (const auto& s : sectors) {
        if (!(s.fraction >= 0.0 && s.fraction <= 1.0)) throw InputError("sector fraction outside [0,1]");
        if (!(s.w >= -1.0 && s.w <= 1.0)) throw InputError("sector order parameter outside [-1,1]");
        total += s.fraction;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InputError("sector fractions do not sum to 1");
}

DegeneracyTerm DegeneracyTerm::make(long N, long k) {
    if (N < 1 || k < 0 || k > N) throw InputError("degeneracy needs 0 <= k <= N, N >= 1");
    const double ld = kLog2 + std::lgamma(double(N) + 1) - std::lgamma(double(k) + 1) -
                      std::lgamma(double(N - k) + 1);
    return {N, k, ld};
}

double signed_pow(double x, int n) {
    const double a = std::pow(std::abs(x), n);
    return (x < 0 && (n % 2 != 0)) ? -a : a;
}

double log_2cosh(double x) {
    const double a = std::abs(x);
    return a + std::log1p(std::exp(-2.0 * a));
}

double local_field(const ModelParams& pr, double m, double w) {
    const double C = pr.nesting;
    return pr.sign() * pr.p * pr.J * std::pow(C, pr.p - 1) * signed_pow(m, pr.p - 1) +
           pr.q * pr.lambda * std::pow(C, pr.q - 1) * signed_pow(w, pr.q - 1);
}

double saddle_rhs(const ModelParams& pr, double m, double w) {
    const double h = local_field(pr, m, w);
    const double E = std::hypot(h, pr.gamma);
    if (E == 0.0) return 0.0;
    if (pr.zero_temperature()) return h / E;
    return h / E * std::tanh(pr.beta() * E);
}

double saddle_rhs_hybrid(const ModelParams& pr, double m, double w) {
    const double h = local_field(pr, m, w);
    const double vp = std::hypot(h + pr.eta, pr.gamma);
    const double vm = std::hypot(h - pr.eta, pr.gamma);
    auto branch = [&](double shift, double v) {
        if (v == 0.0) return 0.0;
        return pr.zero_temperature() ? (h + shift) / v : (h + shift) / v * std::tanh(pr.beta() * v);
    };
    if (pr.zero_temperature()) {
        if (vp > vm) return branch(pr.eta, vp);
        if (vm > vp) return branch(-pr.eta, vm);
        return 0.5 * (branch(pr.eta, vp) + branch(-pr.eta, vm));
    }
    const double b = pr.beta();
    const double lp = pr.nesting * log_2cosh(b * vp);
    const double lm = pr.nesting * log_2cosh(b * vm);
    const double wp = 1.0 / (1.0 + std::exp(lm - lp));
    return wp * branch(pr.eta, vp) + (1.0 - wp) * branch(-pr.eta, vm);
}

namespace {

double power_terms(const ModelParams& pr, const SectorConfig& config, double m) {
    const double C = pr.nesting;
    double f = (pr.p - 1) * pr.sign() * pr.J * std::pow(C, pr.p) * signed_pow(m, pr.p);
    double pen = 0.0;
    for (const auto& s : config.sectors) pen += s.fraction * signed_pow(s.w, pr.q);
    return f + (pr.q - 1) * pr.lambda * std::pow(C, pr.q) * pen;
}

}  // namespace

double free_energy(const ModelParams& pr, const SectorConfig& config) {
    config.validate();
    const double C = pr.nesting;
    const double m = config.magnetization();
    double F = power_terms(pr, config, m);
    for (const auto& s : config.sectors) {
        if (s.fraction == 0.0) continue;
        const double E = std::hypot(local_field(pr, m, s.w), pr.gamma);
        if (pr.zero_temperature())
            F -= C * s.fraction * E;
        else
            F -= C * pr.temperature * s.fraction * log_2cosh(pr.beta() * E);
    }
    require_finite(F, pr, "free energy");
    return F;
}

double free_energy_hybrid(const ModelParams& pr, const SectorConfig& config) {
    config.validate();
    const double C = pr.nesting;
    const double m = config.magnetization();
    double F = power_terms(pr, config, m);
    for (const auto& s : config.sectors) {
        if (s.fraction == 0.0) continue;
        const double h = local_field(pr, m, s.w);
        const double vp = std::hypot(h + pr.eta, pr.gamma);
        const double vm = std::hypot(h - pr.eta, pr.gamma);
        if (pr.zero_temperature()) {
            F -= C * s.fraction * std::max(vp, vm);
        } else {
            const double b = pr.beta();
            // the two branches are averaged, so eta = 0 gives free_energy exactly
            const double lp = C * log_2cosh(b * vp);
            const double lm = C * log_2cosh(b * vm);
            F -= pr.temperature * s.fraction * (log_add_exp(lp, lm) - kLog2);
        }
    }
    require_finite(F, pr, "hybrid free energy");
    return F;
}

double free_energy_with_degeneracy(const ModelParams& pr, long N, long k, double w1, double w2) {
    if (N < 1 || k < 0 || 2 * k > N) throw InputError("free_energy_with_degeneracy needs 0 <= k <= N/2");
    const double F = free_energy(pr, SectorConfig::two_sector(double(k) / double(N), w1, w2));
    if (pr.zero_temperature()) return F;
    return F - pr.temperature / double(N) * DegeneracyTerm::make(N, k).log_degeneracy;
}

FreeEnergySample sample_free_energy(const ModelParams& pr, const SectorConfig& config) {
    FreeEnergySample s;
    s.config = config;
    s.value = free_energy(pr, config);
    s.value_normalized = s.value / pr.norm_scale();
    return s;
}

ModelParams scale_params(const ModelParams& pr, double C, ScalingConvention convention) {
    if (!(C >= 1.0)) throw InputError("target_C must be >= 1");
    ModelParams out = pr;
    out.nesting = 1.0;
    const int p = pr.p, q = pr.q;
    switch (convention) {
        case ScalingConvention::saddle:
            out.temperature = pr.temperature / std::pow(C, p - 1);
            out.gamma = pr.gamma / std::pow(C, p - 1);
            out.lambda = pr.lambda * std::pow(C, q - p);
            out.eta = pr.eta / std::pow(C, p - 1);
            break;
        case ScalingConvention::low_t_free_energy:
            out.J = pr.J * std::pow(C, p);
            out.lambda = pr.lambda * std::pow(C, q);
            out.gamma = pr.gamma * C;
            out.eta = pr.eta * C;
            break;
        case ScalingConvention::low_t_partition:
            out.temperature = pr.temperature / std::pow(C, p);
            out.lambda = pr.lambda * std::pow(C, q - p);
            out.gamma = pr.gamma * std::pow(C, 1 - p);
            out.eta = pr.eta * std::pow(C, 1 - p);
            break;
    }
    return out;
}

std::string to_string(Coupling c) { return c == Coupling::ferro ? "ferro" : "antiferro"; }

std::string to_string(ScalingConvention c) {
    switch (c) {
        case ScalingConvention::saddle: return "saddle";
        case ScalingConvention::low_t_free_energy: return "lowT_free_energy";
        case ScalingConvention::low_t_partition: return "lowT_partition";
    }
    return "?";
}

}  // namespace nqac
