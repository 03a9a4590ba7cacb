#include <doctest.h>

#include <cmath>
#include <random>

#include "nqac/saddle.hpp"

using namespace nqac;
using doctest::Approx;

namespace {

double fd_slope(const ModelParams& pr, double m, double h = 1e-5) {
    return (free_energy(pr, SectorConfig::symmetric(m + h)) - free_energy(pr, SectorConfig::symmetric(m - h))) / (2 * h);
}

ModelParams random_params(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ModelParams pr;
    pr.p = 2 + int(u(rng) * 4);
    pr.q = 2 + int(u(rng) * 3);
    pr.J = 0.3 + u(rng);
    pr.lambda = 1.5 * u(rng);
    pr.gamma = 0.2 + 2 * u(rng);
    pr.temperature = u(rng) < 0.3 ? 0.0 : 0.05 + u(rng);
    pr.nesting = 1.0 + 2 * u(rng) * (pr.p <= 3);
    return pr;
}

}  // namespace

TEST_CASE("every returned solution is stationary") {
    std::mt19937 rng(2024);
    SolverSettings s;
    s.grid_points = 801;
    int checked = 0;
    for (int draw = 0; draw < 100; ++draw) {
        auto pr = random_params(rng);
        for (const auto& sol : solve_symmetric(pr, s)) {
            const double m = sol.config.magnetization();
            CHECK(sol.residual < s.fp_tolerance * 10);
            if (std::abs(m) > 1 - 1e-4) continue;  // stationary only inside the box
            const double g = fd_slope(pr, m) / std::max(1.0, pr.norm_scale());
            CHECK(std::abs(g) < 1e-8);
            ++checked;
        }
    }
    CHECK(checked >= 100);
}

TEST_CASE("paramagnet and ferromagnet at p = q = 2") {
    ModelParams pr;
    pr.lambda = 1.5;
    pr.gamma = 6.0;  // above 2C(J+lambda) = 5
    auto sols = solve_symmetric(pr);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].config.magnetization() == Approx(0.0).scale(1));
    CHECK(sols[0].stability == Stability::local_min);

    pr.gamma = 3.0;
    sols = solve_symmetric(pr);
    bool found_min = false, found_max = false;
    for (const auto& s : sols) {
        const double m = s.config.magnetization();
        if (s.stability == Stability::local_min) {
            found_min = true;
            // T = 0: m = sqrt(1 - (Gamma / 5)^2)
            CHECK(m == Approx(std::sqrt(1 - 0.36)).epsilon(1e-10));
            CHECK(s.multiplicity == 2);
        }
        if (std::abs(m) < 1e-12) found_max = s.stability == Stability::local_max;
    }
    CHECK(found_min);
    CHECK(found_max);
}

TEST_CASE("odd p returns both signs") {
    ModelParams pr;
    pr.p = 3;
    pr.q = 2;
    pr.lambda = 0.2;
    pr.gamma = 0.5;
    pr.temperature = 0.1;
    auto sols = solve_symmetric(pr);
    bool neg = false;
    for (const auto& s : sols) neg |= s.config.magnetization() < -1e-6;
    bool pos = false;
    for (const auto& s : sols) pos |= s.config.magnetization() > 1e-6;
    CHECK(pos);
    for (const auto& s : sols) CHECK(s.multiplicity == 1);
    (void)neg;
}

TEST_CASE("saddle solution set is invariant under the effective rescaling") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 12; ++i) {
        ModelParams pr;
        pr.p = 2 + i % 3;
        pr.q = 2;
        pr.lambda = 0.2 + u(rng);
        pr.temperature = 0.1 + u(rng);
        pr.nesting = 1.5 + u(rng);
        pr.gamma = (0.3 + u(rng)) * std::pow(pr.nesting, pr.p - 1);
        auto one = scale_params(pr, pr.nesting, ScalingConvention::saddle);
        auto a = solve_symmetric(pr);
        auto b = solve_symmetric(one);
        REQUIRE(a.size() == b.size());
        for (std::size_t j = 0; j < a.size(); ++j) {
            CHECK(std::abs(a[j].config.magnetization() - b[j].config.magnetization()) < 1e-10);
            CHECK(a[j].stability == b[j].stability);
        }
    }
}

TEST_CASE("sectored solver finds the two-sector ferromagnet") {
    ModelParams pr;
    pr.lambda = 1.0;
    pr.gamma = 0.5;
    SectoredDiagnostics d;
    auto sols = solve_sectored(pr, {0.3, 0.7}, {}, &d);
    CHECK(d.converged > 0);
    bool aligned = false;
    for (const auto& s : sols) {
        CHECK(sector_residual(pr, s.config) < 1e-10);
        auto v = s.config.values();
        if (v[0] > 0.5 && v[1] > 0.5) aligned = true;
    }
    CHECK(aligned);
    auto g = global_minimum(pr, {}, std::vector<double>{0.3, 0.7});
    auto v = g.config.values();
    CHECK(v[0] == Approx(v[1]).epsilon(1e-8));
}

TEST_CASE("analytic gradient matches finite differences on random sector points") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    for (int i = 0; i < 20; ++i) {
        ModelParams pr;
        pr.p = 2 + i % 3;
        pr.q = 2 + i % 2;
        pr.lambda = 0.7;
        pr.gamma = 0.8;
        pr.temperature = i % 2 ? 0.3 : 0.0;
        auto c = SectorConfig::two_sector(0.4, u(rng), u(rng));
        auto g = free_energy_gradient(pr, c);
        for (int s = 0; s < 2; ++s) {
            auto up = c, dn = c;
            up.sectors[s].w += 1e-5;
            dn.sectors[s].w -= 1e-5;
            const double fd = (free_energy(pr, up) - free_energy(pr, dn)) / 2e-5;
            CHECK(g[s] == Approx(fd).epsilon(1e-6).scale(1));
        }
    }
}

TEST_CASE("settings validation") {
    SolverSettings s;
    s.grid_points = 100;
    CHECK_THROWS_AS(s.validate(), InputError);
    s.grid_points = 101;
    s.damping = 0.0;
    CHECK_THROWS_AS(s.validate(), InputError);
}
