#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nqac/model.hpp"
#include "nqac/saddle.hpp"

namespace nqac {

enum class TransitionOrder { first, second, coexisting_first_and_second, none };
std::string to_string(TransitionOrder o);

// Gamma and F values are scaled: Gamma / C^{n-1}, F / C^n, with n = p for
// the ferromagnet and n = q for the antiferromagnetic local transition.
struct TransitionReport {
    std::optional<double> gamma_c1;
    std::optional<double> gamma_c2;
    TransitionOrder order = TransitionOrder::none;
    std::optional<double> barrier_height;
    std::optional<double> barrier_width;
    // the two competing minima at gamma_c1 (unscaled order parameter)
    std::optional<double> m_low;
    std::optional<double> m_high;
};

enum class TaylorMethod { analytic_T0, numeric };
std::string to_string(TaylorMethod m);

// Coefficients of F / C^n around m = 0; NaN where a method has no value.
struct TaylorCoefficients {
    double c2 = 0.0;
    double c3 = 0.0;
    double c4 = 0.0;
    double c6 = 0.0;
    TaylorMethod method = TaylorMethod::numeric;
};

TaylorCoefficients taylor_coefficients(const ModelParams& params, TaylorMethod method = TaylorMethod::numeric);

// Exact m^2 coefficient of F / C^n at m = 0 (any temperature).
double quadratic_coefficient(const ModelParams& params);

// Gamma at which the m^2 coefficient changes sign (physical units).
std::optional<double> locate_gamma_c2(const ModelParams& params);

enum class CriticalAxis { T_of_gamma, gamma_of_T };

struct CurvePoint {
    double x = 0.0;
    double y = 0.0;
    bool present = false;
};

// p = q = 2 critical line.  gamma_of_T: abscissae are T/C, ordinate Gamma/C.
// T_of_gamma: abscissae are Gamma/C, ordinate T/C.
std::vector<CurvePoint> critical_line_p2(const ModelParams& params, CriticalAxis axis,
                                         const std::vector<double>& abscissae);

struct FirstOrderPoint {
    double gamma = 0.0;  // physical units
    double m_low = 0.0;
    double m_high = 0.0;
    double F_low = 0.0;  // free energies of the two basin minima (unscaled)
    double F_high = 0.0;
};

struct ScanSettings {
    int m_grid = 401;
    int gamma_grid = 121;
    double jump_resolution = 2e-3;
    int bisection_steps = 64;
};

// All Gamma at which the global minimiser jumps between two degenerate minima.
std::vector<FirstOrderPoint> first_order_points(const ModelParams& params, const ScanSettings& scan = {});

std::optional<double> locate_gamma_c1(const ModelParams& params, const SolverSettings& settings = {});

TransitionReport classify_transition(const ModelParams& params, const SolverSettings& settings = {});

struct BarrierMetrics {
    double height = 0.0;  // normalised
    double width = 0.0;
    double m_low = 0.0;
    double m_high = 0.0;
    double m_max = 0.0;
};

BarrierMetrics barrier_between(const std::function<double(double)>& F, double a, double b, double norm = 1.0);
// params.gamma must sit at a first-order point.
BarrierMetrics barrier_metrics(const ModelParams& params, const SolverSettings& settings = {});

// lambda_c(T) / C^{p-2}; empty when no first-order region exists at this T.
std::optional<double> lambda_critical(const ModelParams& family, double temperature);

// Smallest temperature (units of C^p) known to have no first-order region,
// from a bisection between T = 0 and an absent temperature.
double first_order_ceiling(const ModelParams& family, double tolerance = 1e-4);

// PQAC-NQAC hybrid at T = 0: lambda_c / C^{p-2} against eta / C^{p-1}.
std::vector<CurvePoint> hybrid_critical_line(const ModelParams& family, const std::vector<double>& eta_scaled);
// eta_c / C^{p-1} at lambda = 0.
std::optional<double> pqac_critical_eta(const ModelParams& family);

bool has_first_order(const ModelParams& params);

// Temperature (units of C^p) where the first-order region ends at Gamma = 0:
// the point on the c2 = 0 line where c4 changes sign.  p = 4, q = 2 ferro only.
std::optional<double> tricritical_temperature(const ModelParams& family);

}  // namespace nqac
