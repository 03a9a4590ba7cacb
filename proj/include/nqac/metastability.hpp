#pragma once

#include <string>
#include <vector>

#include "nqac/model.hpp"
#include "nqac/phase.hpp"

namespace nqac {

enum class MetaSide { below, above };
enum class MetaAxis { gamma_over_C, T_over_C, lambda };

std::string to_string(MetaAxis a);

struct MetastabilityRegion {
    std::string axis1;  // swept abscissa, e.g. k_over_N
    std::string axis2;  // bisected ordinate
    std::vector<CurvePoint> boundary;
    MetaSide side_with_metastable = MetaSide::below;
};

struct OccupancySpectrum {
    std::vector<int> k;
    std::vector<double> energies;  // per logical qubit
    std::vector<double> log_degeneracy;
    std::vector<double> log_weights;  // log d_k - beta N E_k
    std::vector<double> probabilities;
    std::vector<double> free_energy_over_C2;  // fm only; NaN where no saddle exists
};

// Hessian of the variational free energy E(w) + C sum_j f_j g(w_j), g being
// the single-spin Legendre dual of T log 2cosh.  Its stationary points and
// values match free_energy; unlike the Hubbard-Stratonovich surface it is
// convex along m for antiferromagnetic coupling, so it decides local stability.
std::vector<double> variational_hessian_eigenvalues(const ModelParams& params, const SectorConfig& config);

// Two-sector ferromagnet ((1 - k/N, w1), (k/N, w2)) with w1 > 0 > w2 locally stable.
bool fm_metastable_exists(const ModelParams& params, double k_over_N);

// Three-sector antiferromagnet with fractions (N/2-k-1, N/2+k, 1)/N.  upper
// selects w3 < 0, the (k+1)-th excited state; otherwise w3 > 0, the k-th.
bool af_metastable_exists(const ModelParams& params, int k, int N, bool upper = false);

// Levels i = 0..N/2 away from the balanced sector: E_i = C^2 [J (2i/N)^2 - lam].
OccupancySpectrum af_occupancy(double J, double C, double lam, double beta, int N);

// Gamma = 0 ground state plus every zero-temperature metastable k <= N/2.
OccupancySpectrum fm_occupancy(const ModelParams& params, int N);

// For each abscissa k/N, the ordinate where the existence predicate flips.
// The remaining parameters are taken from params.
MetastabilityRegion fm_metastability_region(const ModelParams& params, MetaAxis axis,
                                            const std::vector<double>& k_over_N, int jobs = 1);
// af: abscissae are k (integer-valued), N fixed.
MetastabilityRegion af_metastability_region(const ModelParams& params, int N, MetaAxis axis,
                                            const std::vector<int>& ks, int jobs = 1);

// Smallest lambda with the k-th AF excited state metastable, at each Gamma / C^{p-1}.
MetastabilityRegion af_lambda_boundary(const ModelParams& params, int N, int k, const std::vector<double>& gamma_over_C,
                                       int jobs = 1);

}  // namespace nqac
