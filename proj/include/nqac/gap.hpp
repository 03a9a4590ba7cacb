#pragma once

#include <utility>
#include <vector>

#include "nqac/model.hpp"
#include "nqac/phase.hpp"

namespace nqac {

struct GapEstimate {
    double overlap = 1.0;
    double log_gap_per_spin = 0.0;  // log overlap
    ModelParams at_params;

    // log of overlap^{N C}
    double log_gap(double N) const { return N * at_params.nesting * log_gap_per_spin; }
};

// Ground-state angle of -h sigma_z - Gamma sigma_x.
double ground_state_angle(double h, double gamma);

GapEstimate instanton_overlap(const ModelParams& params, double m0, double mc);

// Overlap of the two degenerate minima at the first-order point of `params`
// (Gamma free); 1 when the transition is continuous.
GapEstimate instanton_at_transition(const ModelParams& params);

struct SpinWaveSpectrum {
    double theta = 0.0;
    double omega0 = 0.0;
    double omega1 = 0.0;
    double A = 0.0;
    double B = 0.0;
    double lambda_A = 0.0;
    double lambda_B = 0.0;

    double gap() const { return omega0 < omega1 ? omega0 : omega1; }
};

// lam is the penalty-to-coupling ratio of the p = q = 2 spin-wave Hamiltonian.
SpinWaveSpectrum spinwave_spectrum(double J, double C, double lam, double gamma);

// Least-squares fit of log omega against log delta: (slope, exp(intercept)).
std::pair<double, double> gap_exponent_fit(const std::vector<double>& delta, const std::vector<double>& omega);

}  // namespace nqac
