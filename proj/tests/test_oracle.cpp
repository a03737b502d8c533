#include <doctest.h>

#include <cmath>

#include "qjump/engine.hpp"
#include "qjump/errors.hpp"
#include "qjump/model.hpp"
#include "qjump/oracle.hpp"
#include "qjump/rng.hpp"

using namespace qjump;

TEST_CASE("t = 0 is the identity map") {
    const ModelParams p{1.3, -0.4, 2.0};
    auto s = make_initial_state({InitialKind::EqualSuperposition, 2}, 12);
    s.s12[5] = {0.1, -0.2};
    const auto out = evolve_oracle(s, p, 0.0);
    for (std::size_t n = 0; n <= s.n_max(); ++n) {
        CHECK(out.s11[n] == doctest::Approx(s.s11[n]).epsilon(1e-14));
        CHECK(out.s22[n] == doctest::Approx(s.s22[n]).epsilon(1e-14));
        CHECK(std::abs(out.s12[n] - s.s12[n]) < 1e-14);
    }
    CHECK(out.leaked == doctest::Approx(0.0));
}

TEST_CASE("closed system: population returns after a full Rabi period") {
    const ModelParams p{1.0, 0.0, 0.0};
    const auto s = make_initial_state({InitialKind::LeftLocalized, 0}, 2);
    const auto out = evolve_oracle(s, p, std::numbers::pi);
    CHECK(out.s11[0] == doctest::Approx(1.0).epsilon(1e-12));
    // and the quarter period empties the left dot
    const auto quarter = evolve_oracle(s, p, std::numbers::pi / 2.0);
    CHECK(quarter.s11[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(quarter.s22[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("matrix exponential reproduces the Poisson cascade") {
    const ModelParams p{0.0, 0.0, 0.8};
    const auto out =
        evolve_oracle(make_initial_state({InitialKind::LeftLocalized, 0}, 40), p, 5.0);
    double expected = std::exp(-4.0);  // Poisson(D1 t = 4)
    for (std::size_t n = 0; n <= 12; ++n) {
        CHECK(out.s11[n] == doctest::Approx(expected).epsilon(1e-10));
        expected *= 4.0 / static_cast<double>(n + 1);
    }
    CHECK(out.total_trace() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oracle matches the RK4 integrator on random parameter sets") {
    Xoshiro256pp rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
        const ModelParams p{2.0 * rng.uniform(), -2.0 + 4.0 * rng.uniform(),
                            0.05 + 0.55 * rng.uniform()};
        auto s = make_initial_state(
            {trial % 2 ? InitialKind::EqualSuperposition : InitialKind::EqualMixture, 0},
            32);
        const auto a = evolve(s, p, 5.0, stability_dt(p));
        const auto b = evolve_oracle(s, p, 5.0);
        for (std::size_t n = 0; n <= 32; ++n) {
            worst = std::max(worst, std::abs(a.s11[n] - b.s11[n]));
            worst = std::max(worst, std::abs(a.s22[n] - b.s22[n]));
            worst = std::max(worst, std::abs(a.s12[n] - b.s12[n]));
        }
        worst = std::max(worst, std::abs(a.leaked - b.leaked));
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("oracle rejects ladders beyond its dimension cap") {
    const ModelParams p{1.0, 0.0, 1.0};
    const auto s = make_initial_state({InitialKind::LeftLocalized, 0}, 65);
    CHECK_THROWS_AS(evolve_oracle(s, p, 1.0), ConfigError);
    CHECK_NOTHROW(evolve_oracle(make_initial_state({InitialKind::LeftLocalized, 0}, 64),
                                p, 0.5));
}

TEST_CASE("oracle conserves total trace including the leak row") {
    const ModelParams p{0.7, 1.1, 3.0};
    const auto out =
        evolve_oracle(make_initial_state({InitialKind::EqualMixture, 0}, 20), p, 12.0);
    CHECK(out.total_trace() == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(out.leaked > 0.0);  // D1 t = 36 pushes real mass past n = 20
}
