#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nqac/model.hpp"

namespace nqac {

enum class Stability { local_min, saddle, local_max };

std::string to_string(Stability s);

struct SaddleSolution {
    SectorConfig config;
    double residual = 0.0;
    Stability stability = Stability::saddle;
    double free_energy = 0.0;
    int multiplicity = 1;
    std::vector<double> hessian_eigenvalues;
};

struct SolverSettings {
    int grid_points = 2001;
    double fp_tolerance = 1e-12;
    int max_iterations = 10000;
    double damping = 0.5;

    void validate() const;
};

// A free-energy profile along one order parameter w, together with the
// right-hand side of its fixed-point equation w = rhs(w).
struct Landscape {
    std::function<double(double)> free_energy;
    std::function<double(double)> rhs;
    std::function<double(double)> slope;
    std::function<SectorConfig(double)> config;
    bool z2 = false;
    double norm = 1.0;  // C^n used for normalised output
};

// ferro: the symmetric magnetisation m; antiferro: the local order n with
// sectors (1/2, n), (1/2, -n); eta > 0 switches to the hybrid free energy.
Landscape symmetric_landscape(const ModelParams& params);

struct Minimum {
    double w = 0.0;
    double F = 0.0;
};

// Local minima of a landscape on [lo, hi]: grid scan, Brent refinement and,
// where the fixed-point residual changes sign nearby, a root polish.
std::vector<Minimum> landscape_minima(const Landscape& L, double lo, double hi, int grid);
Minimum landscape_global_minimum(const Landscape& L, double lo, double hi, int grid);

// Classifies w on a 1-D landscape by the sign of the slope on either side.
Stability classify_1d(const Landscape& L, double w, double lo = -1.0, double hi = 1.0);

std::vector<SaddleSolution> solve_landscape(const Landscape& L, const SolverSettings& settings);
std::vector<SaddleSolution> solve_symmetric(const ModelParams& params, const SolverSettings& settings = {});

struct SectoredDiagnostics {
    int seeds = 0;
    int converged = 0;
    long iterations = 0;
};

// Gradient of free_energy with respect to each sector order parameter.
std::vector<double> free_energy_gradient(const ModelParams& params, const SectorConfig& config);
// Finite-difference Hessian (of the analytic gradient), symmetrised.
std::vector<std::vector<double>> free_energy_hessian(const ModelParams& params, const SectorConfig& config,
                                                     double step = 1e-6);
double sector_residual(const ModelParams& params, const SectorConfig& config);

std::vector<SaddleSolution> solve_sectored(const ModelParams& params, const std::vector<double>& fractions,
                                           const SolverSettings& settings = {},
                                           SectoredDiagnostics* diagnostics = nullptr);
// Same iteration from caller-supplied seeds only.
std::vector<SaddleSolution> solve_sectored_from(const ModelParams& params, const std::vector<double>& fractions,
                                                const std::vector<std::vector<double>>& seeds,
                                                const SolverSettings& settings = {},
                                                SectoredDiagnostics* diagnostics = nullptr);

SaddleSolution global_minimum(const ModelParams& params, const SolverSettings& settings, int sectors = 1);
SaddleSolution global_minimum(const ModelParams& params, const SolverSettings& settings,
                              const std::vector<double>& fractions);

}  // namespace nqac
