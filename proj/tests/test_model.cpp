#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qjump/errors.hpp"
#include "qjump/model.hpp"
#include "qjump/rng.hpp"

using namespace qjump;

TEST_CASE("derive_rate matches T1 * bias / (2 pi)") {
    CHECK(derive_rate({0.0, 0.0, 1.0}) == 0.0);
    CHECK(derive_rate({1.0, 0.0, 2.0 * std::numbers::pi}) == doctest::Approx(1.0));
    CHECK(derive_rate({0.5, 0.0, std::numbers::pi}) == doctest::Approx(0.25));
}

TEST_CASE("derive_rate is linear in bias and transmission") {
    Xoshiro256pp rng(7);
    for (int i = 0; i < 50; ++i) {
        const double t1 = rng.uniform();
        const double bias = 0.1 + 5.0 * rng.uniform();
        const double base = derive_rate({t1, 0.0, bias});
        CHECK(derive_rate({t1, 0.0, 3.0 * bias}) == doctest::Approx(3.0 * base));
        if (t1 <= 0.5)
            CHECK(derive_rate({2.0 * t1, 0.0, bias}) == doctest::Approx(2.0 * base));
    }
}

TEST_CASE("derive_rate rejects invalid detector parameters") {
    CHECK_THROWS_AS(derive_rate({1.0, 0.0, 0.0}), ConfigError);
    CHECK_THROWS_AS(derive_rate({1.0, 0.0, -1.0}), ConfigError);
    CHECK_THROWS_AS(derive_rate({1.5, 0.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(derive_rate({-0.1, 0.0, 1.0}), ConfigError);
    CHECK_THROWS_AS(derive_rate({0.5, 0.6, 1.0}), ConfigError);
}

TEST_CASE("from_detector requires a fully blocked contact") {
    const auto p = ModelParams::from_detector(1.0, 0.0, {0.5, 0.0, std::numbers::pi});
    CHECK(p.d1 == doctest::Approx(0.25));
    CHECK_THROWS_AS(ModelParams::from_detector(1.0, 0.0, {0.5, 0.1, 1.0}),
                    ConfigError);
}

TEST_CASE("initial states carry unit trace at n0") {
    for (const auto kind :
         {InitialKind::LeftLocalized, InitialKind::RightLocalized,
          InitialKind::EqualMixture, InitialKind::EqualSuperposition}) {
        const auto s = make_initial_state({kind, 0}, 10);
        CHECK(s.total_trace() == doctest::Approx(1.0));
        CHECK(s.t == 0.0);
        CHECK(s.n_max() == 10);
    }

    const auto left = make_initial_state({InitialKind::LeftLocalized, 0}, 10);
    CHECK(left.s11[0] == 1.0);
    CHECK(left.s22[0] == 0.0);
    CHECK(left.s12[0] == std::complex<double>{0.0, 0.0});

    const auto mix = make_initial_state({InitialKind::EqualMixture, 0}, 10);
    CHECK(mix.s11[0] == 0.5);
    CHECK(mix.s22[0] == 0.5);
    CHECK(mix.s12[0] == std::complex<double>{0.0, 0.0});
}

TEST_CASE("equal superposition is a pure state") {
    const auto s = make_initial_state({InitialKind::EqualSuperposition, 0}, 4);
    CHECK(s.s12[0].real() == 0.5);
    // purity: s11 s22 = |s12|^2
    CHECK(s.s11[0] * s.s22[0] == doctest::Approx(std::norm(s.s12[0])));
}

TEST_CASE("initial state respects n0 and rejects n0 beyond the ladder") {
    const auto s = make_initial_state({InitialKind::LeftLocalized, 7}, 10);
    CHECK(s.s11[7] == 1.0);
    CHECK(s.s11[0] == 0.0);
    CHECK_THROWS_AS(make_initial_state({InitialKind::LeftLocalized, 11}, 10),
                    ConfigError);
}

TEST_CASE("every preset yields positive semidefinite blocks") {
    for (const auto kind :
         {InitialKind::LeftLocalized, InitialKind::RightLocalized,
          InitialKind::EqualMixture, InitialKind::EqualSuperposition}) {
        const auto s = make_initial_state({kind, 3}, 6);
        for (std::size_t n = 0; n <= s.n_max(); ++n) {
            CHECK(s.s11[n] >= 0.0);
            CHECK(s.s22[n] >= 0.0);
            CHECK(s.s11[n] * s.s22[n] >= std::norm(s.s12[n]) - 1e-15);
        }
    }
}

TEST_CASE("reduced presets match the ladder presets") {
    for (const auto kind :
         {InitialKind::LeftLocalized, InitialKind::RightLocalized,
          InitialKind::EqualMixture, InitialKind::EqualSuperposition}) {
        const auto full = make_initial_state({kind, 0}, 5);
        const auto red = make_initial_reduced({kind, 0});
        CHECK(red.s11 == doctest::Approx(full.population_left()));
        CHECK(red.s12.real() == doctest::Approx(full.coherence().real()));
        CHECK(red.s12.imag() == doctest::Approx(full.coherence().imag()));
    }
}

TEST_CASE("zeno_time formula") {
    const ModelParams p{2.0, 0.0, 16.0};
    CHECK(p.zeno_time() == doctest::Approx(16.0 / (8.0 * 4.0)));
    CHECK_THROWS_AS((ModelParams{0.0, 0.0, 1.0}.zeno_time()), ConfigError);
}
