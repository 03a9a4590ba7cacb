#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nqac {

// Bad user input (unknown names, out-of-range values, malformed configs).
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A formula produced a non-finite value or a solver could not deliver.
struct NumericalError : std::domain_error {
    using std::domain_error::domain_error;
};

enum class Coupling { ferro, antiferro };

struct ModelParams {
    int p = 2;
    int q = 2;
    double J = 1.0;
    Coupling coupling = Coupling::ferro;
    double lambda = 0.0;
    double eta = 0.0;
    double gamma = 0.0;
    double temperature = 0.0;
    double nesting = 1.0;

    double beta() const { return 1.0 / temperature; }
    bool zero_temperature() const { return temperature == 0.0; }
    double sign() const { return coupling == Coupling::ferro ? 1.0 : -1.0; }
    // exponent n of the C^n normalisation, n = max(p, q)
    int norm_exponent() const { return p > q ? p : q; }
    double norm_scale() const;

    void validate() const;
};

struct Sector {
    double fraction;
    double w;
};

struct SectorConfig {
    std::vector<Sector> sectors;

    static SectorConfig symmetric(double m);
    // ((N-k)/N, w1), (k/N, w2)
    static SectorConfig two_sector(double k_over_N, double w1, double w2);
    // ((N/2-k-1)/N, w1), ((N/2+k)/N, w2), (1/N, w3)
    static SectorConfig three_sector(int N, int k, double w1, double w2, double w3);
    static SectorConfig from(const std::vector<double>& fractions, const std::vector<double>& w);

    double magnetization() const;
    std::vector<double> fractions() const;
    std::vector<double> values() const;
    void validate() const;
};

struct FreeEnergySample {
    SectorConfig config;
    double value = 0.0;
    double value_normalized = 0.0;
};

struct DegeneracyTerm {
    long N = 0;
    long k = 0;
    double log_degeneracy = 0.0;

    static DegeneracyTerm make(long N, long k);
};

// sign(x)^n |x|^n
double signed_pow(double x, int n);
// log(2 cosh x) without overflow
double log_2cosh(double x);

// h(w, m) = s p J C^{p-1} m^{p-1} + q lambda C^{q-1} w^{q-1}
double local_field(const ModelParams& params, double m, double w);
// (h/E) tanh(beta E); h/E at T = 0, 0 when E = 0
double saddle_rhs(const ModelParams& params, double m, double w);
// hybrid right-hand side, the Boltzmann mixture of the two branches h +/- eta
double saddle_rhs_hybrid(const ModelParams& params, double m, double w);

double free_energy(const ModelParams& params, const SectorConfig& config);
double free_energy_hybrid(const ModelParams& params, const SectorConfig& config);
double free_energy_with_degeneracy(const ModelParams& params, long N, long k, double w1, double w2);
FreeEnergySample sample_free_energy(const ModelParams& params, const SectorConfig& config);

enum class ScalingConvention { saddle, low_t_free_energy, low_t_partition };

// Reads `params` as a system nested at C = target_C and returns the
// equivalent parameters of the un-nested (C = 1) system.
ModelParams scale_params(const ModelParams& params, double target_C, ScalingConvention convention);

std::string to_string(Coupling c);
std::string to_string(ScalingConvention c);

}  // namespace nqac
