#include <doctest.h>

#include <cmath>
#include <random>

#include "nqac/model.hpp"
#include "nqac/saddle.hpp"
#include "oracles.hpp"

using namespace nqac;
using doctest::Approx;

namespace {

ModelParams p2(double lam, double gamma = 0.0, double T = 0.0, double C = 1.0) {
    ModelParams pr;
    pr.lambda = lam;
    pr.gamma = gamma;
    pr.temperature = T;
    pr.nesting = C;
    return pr;
}

}  // namespace

TEST_CASE("free energy at gamma = 0 and T = 0") {
    auto pr = p2(1.5);
    CHECK(free_energy(pr, SectorConfig::symmetric(0.0)) == 0.0);
    CHECK(free_energy(pr, SectorConfig::symmetric(1.0)) == Approx(-2.5).epsilon(1e-15));
}

TEST_CASE("m = 0 leaves only the transverse term") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int i = 0; i < 20; ++i) {
        ModelParams pr;
        pr.p = 2 + i % 4;
        pr.q = 2 + (i / 4) % 3;
        pr.J = u(rng);
        pr.lambda = u(rng);
        pr.gamma = u(rng);
        pr.temperature = u(rng);
        pr.nesting = 1 + u(rng);
        const double want = -pr.nesting * pr.temperature * std::log(2 * std::cosh(pr.gamma / pr.temperature));
        CHECK(free_energy(pr, SectorConfig::symmetric(0.0)) == Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("log 2cosh survives large arguments") {
    CHECK(log_2cosh(1000.0) == Approx(1000.0 + 0.0).epsilon(1e-15));
    CHECK(log_2cosh(-1e5) == Approx(1e5));
    CHECK(log_2cosh(0.3) == Approx(std::log(2 * std::cosh(0.3))).epsilon(1e-15));
    auto pr = p2(1.0, 0.5, 1e-5);
    CHECK(std::isfinite(free_energy(pr, SectorConfig::symmetric(0.7))));
}

TEST_CASE("signed powers keep odd terms odd") {
    ModelParams pr;
    pr.p = 3;
    pr.q = 3;
    pr.lambda = 0.4;
    pr.gamma = 0.7;
    pr.nesting = 1.5;
    CHECK(signed_pow(-2.0, 3) == -8.0);
    CHECK(signed_pow(-2.0, 4) == 16.0);
    // |h| is even in m, so only the power terms survive in F(m) - F(-m)
    for (double m : {0.2, 0.6, 1.0}) {
        const double odd = free_energy(pr, SectorConfig::symmetric(m)) - free_energy(pr, SectorConfig::symmetric(-m));
        const double want = 2 * (2 * pr.J * std::pow(1.5, 3) + 2 * pr.lambda * std::pow(1.5, 3)) * m * m * m;
        CHECK(odd == Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("hybrid reduces to plain free energy at eta = 0") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        ModelParams pr;
        pr.p = 2 + i % 3;
        pr.q = 2 + i % 2;
        pr.lambda = 2 * u(rng);
        pr.gamma = 2 * u(rng);
        pr.temperature = i % 3 == 0 ? 0.0 : u(rng) + 0.01;
        pr.nesting = 1 + 2 * u(rng);
        auto c = SectorConfig::two_sector(0.3, 2 * u(rng) - 1, 2 * u(rng) - 1);
        CHECK(free_energy_hybrid(pr, c) == Approx(free_energy(pr, c)).epsilon(1e-12));
    }
}

TEST_CASE("hybrid antiferromagnet at T = 0 matches the closed form") {
    ModelParams pr;
    pr.coupling = Coupling::antiferro;
    pr.lambda = 0.8;
    pr.eta = 0.3;
    pr.gamma = 0.5;
    pr.nesting = 2.0;
    const double C = pr.nesting;
    for (double n : {0.0, 0.2, 0.7}) {
        auto cfg = SectorConfig::from({0.5, 0.5}, {n, -n});
        // the penalty qubit picks whichever branch lowers the energy
        const double want = pr.lambda * C * C * n * n - C * std::hypot(2 * pr.lambda * C * n + pr.eta, pr.gamma);
        CHECK(free_energy_hybrid(pr, cfg) == Approx(want).epsilon(1e-13));
    }
}

TEST_CASE("hybrid leading term makes m = 0 unstable for p > q") {
    ModelParams pr;
    pr.p = 4;
    pr.lambda = 0.5;
    pr.eta = 0.4;
    pr.gamma = 1.0;
    const double m = 1e-4;
    const double dF = (free_energy_hybrid(pr, SectorConfig::symmetric(m)) - free_energy_hybrid(pr, SectorConfig::symmetric(0))) /
                      std::pow(pr.nesting, pr.p);
    const double lead = -pr.q * pr.eta * pr.lambda * std::pow(pr.nesting, pr.q - pr.p) /
                        std::hypot(pr.eta, pr.gamma) * m;
    CHECK(dF < 0);
    CHECK(dF == Approx(lead).epsilon(1e-3));
}

TEST_CASE("degeneracy term") {
    CHECK(DegeneracyTerm::make(10, 0).log_degeneracy == Approx(std::log(2.0)));
    const double ld = DegeneracyTerm::make(100, 50).log_degeneracy;
    CHECK(ld == Approx(std::log(2.0) + oracle::log_binomial_exact(100, 50)).epsilon(1e-13));
    CHECK(DegeneracyTerm::make(1000000, 400000).log_degeneracy > 0);
    auto pr = p2(1.0, 0.0, 0.5);
    const double F0 = free_energy(pr, SectorConfig::two_sector(0.0, 1.0, 1.0));
    CHECK(free_energy_with_degeneracy(pr, 100, 0, 1.0, 1.0) == Approx(F0 - 0.5 / 100 * std::log(2.0)));
    CHECK_THROWS_AS(free_energy_with_degeneracy(pr, 10, 6, 1, 1), InputError);
    auto cold = p2(1.0);
    CHECK(free_energy_with_degeneracy(cold, 100, 30, 1, -1) ==
          free_energy(cold, SectorConfig::two_sector(0.3, 1, -1)));
}

TEST_CASE("entropy share of F/C^2 shrinks with C at fixed T/C") {
    double prev = 1e9;
    for (double C : {1.0, 2.0, 4.0, 8.0}) {
        auto pr = p2(1.0, 0.0, 0.5 * C, C);
        const double s = (free_energy(pr, SectorConfig::two_sector(0.3, 1, -1)) -
                          free_energy_with_degeneracy(pr, 100, 30, 1, -1)) /
                         (C * C);
        CHECK(s > 0);
        CHECK(s < prev);
        prev = s;
    }
}

TEST_CASE("validation errors") {
    ModelParams pr;
    pr.p = 1;
    CHECK_THROWS_AS(pr.validate(), InputError);
    pr = ModelParams{};
    pr.nesting = 0.5;
    CHECK_THROWS_AS(pr.validate(), InputError);
    CHECK_THROWS_AS(free_energy(ModelParams{}, SectorConfig::from({0.5, 0.4}, {0, 0})), InputError);
    ModelParams big;
    big.gamma = 1e308;
    big.lambda = 1e308;
    big.nesting = 10;
    try {
        free_energy(big, SectorConfig::symmetric(1.0));
        FAIL("expected a numerical error");
    } catch (const NumericalError& e) {
        CHECK(std::string(e.what()).find("parameter") != std::string::npos);
    }
}

TEST_CASE("scale_params conventions") {
    ModelParams pr;
    pr.temperature = 0.3;
    pr.gamma = 1.2;
    pr.lambda = 0.7;
    for (auto conv : {ScalingConvention::saddle, ScalingConvention::low_t_free_energy, ScalingConvention::low_t_partition}) {
        auto s = scale_params(pr, 1.0, conv);
        CHECK(s.temperature == pr.temperature);
        CHECK(s.gamma == pr.gamma);
        CHECK(s.lambda == pr.lambda);
        CHECK(s.J == pr.J);
    }
    auto s = scale_params(pr, 3.0, ScalingConvention::saddle);
    CHECK(s.beta() == Approx(3 * pr.beta()));
    CHECK(s.gamma == Approx(pr.gamma / 3));
    CHECK(s.lambda == Approx(pr.lambda));
    ModelParams p4;
    p4.p = 4;
    p4.temperature = 0.5;
    p4.gamma = 1.0;
    p4.lambda = 1.0;
    auto t = scale_params(p4, 2.0, ScalingConvention::low_t_partition);
    CHECK(t.beta() == Approx(16 * p4.beta()));
    CHECK(t.lambda == Approx(0.25));
    CHECK(t.gamma == Approx(0.125));
    CHECK_THROWS_AS(scale_params(p4, 0.5, ScalingConvention::saddle), InputError);
}

TEST_CASE("normalised free energy is independent of C at fixed scaled arguments") {
    for (int p : {2, 3, 4}) {
        double ref = 0;
        for (double C : {1.0, 2.0, 3.5}) {
            ModelParams pr;
            pr.p = p;
            pr.q = 2;
            pr.nesting = C;
            pr.lambda = 0.6 * std::pow(C, p - 2);
            pr.gamma = 1.1 * std::pow(C, p - 1);
            auto s = sample_free_energy(pr, SectorConfig::symmetric(0.4));
            CHECK(s.value_normalized * std::pow(C, pr.norm_exponent()) == Approx(s.value).epsilon(1e-15));
            if (C == 1.0) ref = s.value_normalized;
            CHECK(s.value_normalized == Approx(ref).epsilon(1e-10));
        }
    }
}

TEST_CASE("low-temperature scaling relations") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.2, 1.5);
    for (int i = 0; i < 20; ++i) {
        ModelParams pr;
        pr.p = 2 + i % 3;
        pr.q = 2 + (i / 3) % 3;
        pr.J = u(rng);
        pr.lambda = u(rng);
        pr.gamma = u(rng);
        pr.nesting = 1 + u(rng);
        pr.temperature = 1e-3 * pr.J * std::pow(pr.nesting, pr.p);
        auto fe = scale_params(pr, pr.nesting, ScalingConvention::low_t_free_energy);
        auto lp = scale_params(pr, pr.nesting, ScalingConvention::low_t_partition);
        for (double m : {0.0, 0.3, 0.8, 1.0}) {
            auto c = SectorConfig::symmetric(m);
            const double F = free_energy(pr, c);
            CHECK(std::abs(free_energy(fe, c) - F) < 1e-6 * std::abs(F));
            CHECK(std::abs(std::pow(pr.nesting, pr.p) * free_energy(lp, c) - F) < 1e-6 * std::abs(F));
        }
    }
}

TEST_CASE("antiferromagnet with q = 2 is the ferromagnet with J = 0") {
    for (double T : {0.0, 0.4}) {
        ModelParams af;
        af.coupling = Coupling::antiferro;
        af.J = 1.3;
        af.lambda = 0.9;
        af.gamma = 0.6;
        af.temperature = T;
        af.nesting = 2;
        ModelParams fm = af;
        fm.coupling = Coupling::ferro;
        fm.J = 0.0;
        for (double n : {0.0, 0.25, 0.5, 0.9}) {
            const double a = free_energy(af, SectorConfig::from({0.5, 0.5}, {n, -n}));
            const double b = free_energy(fm, SectorConfig::symmetric(n));
            CHECK(a == Approx(b).epsilon(1e-14));
        }
    }
}

TEST_CASE("figure-caption free energies have degenerate minima") {
    ModelParams pr;
    pr.p = pr.q = 4;
    pr.lambda = 1.0;
    pr.gamma = 2.37;
    pr.temperature = 0.01;
    auto L = symmetric_landscape(pr);
    auto mins = landscape_minima(L, 0.0, 1.0, 2001);
    REQUIRE(mins.size() == 2);
    CHECK(std::abs(mins[0].F - mins[1].F) < 1e-3);  // 2.37 is the caption's rounding of the crossing
}
