#pragma once

// Independent reference computations used by the unit and acceptance tests.
// None of them call into the library's evaluators.

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "nqac/model.hpp"

namespace oracle {

using cd = std::complex<double>;

inline double log_binomial_exact(unsigned n, unsigned k) {
    boost::multiprecision::cpp_int b = 1;
    for (unsigned i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return std::log(b.convert_to<double>());
}

// Symmetric ferromagnetic free energy continued to complex m.
inline cd free_energy_complex(const nqac::ModelParams& pr, cd m) {
    const double C = pr.nesting;
    const cd h = double(pr.p) * pr.J * std::pow(C, pr.p - 1) * std::pow(m, pr.p - 1) +
                 double(pr.q) * pr.lambda * std::pow(C, pr.q - 1) * std::pow(m, pr.q - 1);
    const cd u = h * h + pr.gamma * pr.gamma;
    cd F = double(pr.p - 1) * pr.J * std::pow(C, pr.p) * std::pow(m, pr.p) +
           double(pr.q - 1) * pr.lambda * std::pow(C, pr.q) * std::pow(m, pr.q);
    if (pr.temperature == 0.0) return F - C * std::sqrt(u);
    // cosh(beta sqrt(u)) is entire in u, so either branch of the root works
    return F - C * pr.temperature * std::log(2.0 * std::cosh(std::sqrt(u) / pr.temperature));
}

// k-th Taylor coefficient of F / C^n at m = 0 by the trapezoid rule on |m| = r.
inline double cauchy_coefficient(const nqac::ModelParams& pr, int k, double r, int points = 256) {
    const double norm = std::pow(pr.nesting, pr.norm_exponent());
    cd acc = 0.0;
    for (int j = 0; j < points; ++j) {
        const double th = 2 * M_PI * j / points;
        const cd z = std::polar(r, th);
        acc += free_energy_complex(pr, z) * std::polar(1.0, -k * th);
    }
    return (acc / double(points)).real() / std::pow(r, k) / norm;
}

// ground state of -h sz - g sx via a dense eigensolver
inline Eigen::Vector2d ground_state(double h, double g) {
    Eigen::Matrix2d H;
    H << -h, -g, -g, h;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(H);
    return es.eigenvectors().col(0);
}

inline double overlap(double h0, double hc, double g) {
    return std::abs(ground_state(h0, g).dot(ground_state(hc, g)));
}

// a (m^2 - b^2)^2: minima at +-b, barrier a b^4 at m = 0
struct Quartic {
    double a, b;
    double operator()(double m) const { return a * (m * m - b * b) * (m * m - b * b); }
};

}  // namespace oracle
