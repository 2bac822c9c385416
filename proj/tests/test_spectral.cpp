#include <doctest.h>

#include <cmath>

#include "monodrift/rng.hpp"
#include "monodrift/spectral.hpp"

using namespace monodrift;

TEST_CASE("norms and pairing on explicit vectors") {
    GalerkinSpace space({1.0, 4.0, 9.0}, {});
    CHECK(space.lambda1() == 1.0);

    CHECK(h_norm_sq(space, StateVec{{0.0, 0.0, 0.0}}) == 0.0);
    CHECK(h_norm_sq(space, StateVec{{1.0, 0.0, 0.0}}) == 1.0);
    CHECK(h_norm_sq(space, StateVec{{3.0, 4.0, 0.0}}) == 25.0);

    CHECK(v_norm_sq(space, StateVec{{1.0, 0.0, 0.0}}) == 1.0);
    CHECK(v_norm_sq(space, StateVec{{0.0, 1.0, 0.0}}) == 4.0);
    CHECK(v_norm_sq(space, StateVec{{1.0, 1.0, 1.0}}) == 14.0);
    CHECK(v_norm_sq(space, StateVec{{1.0, 1.0, 1.0}}) >=
          space.lambda1() * h_norm_sq(space, StateVec{{1.0, 1.0, 1.0}}));

    GalerkinSpace two({1.0, 1.0}, {});
    CHECK(dual_pair(two, DualVec{{0.0, 0.0}}, StateVec{{1.0, 2.0}}) == 0.0);
    CHECK(dual_pair(two, DualVec{{1.0, 2.0}}, StateVec{{2.0, 1.0}}) == 4.0);
    CHECK(dual_pair(two, embed(StateVec{{1.0, 1.0}}), StateVec{{1.0, -1.0}}) == 0.0);
}

TEST_CASE("dimension mismatch is a usage error") {
    GalerkinSpace space({1.0, 2.0}, {});
    CHECK_THROWS(h_norm_sq(space, StateVec{{1.0}}));
    CHECK_THROWS(v_norm_sq(space, StateVec{{1.0, 2.0, 3.0}}));
    CHECK_THROWS(dual_pair(space, DualVec{{1.0}}, StateVec{{1.0, 2.0}}));
}

TEST_CASE("weights must be positive") {
    CHECK_THROWS(GalerkinSpace({1.0, 0.0}, {}));
    CHECK_THROWS(GalerkinSpace({-1.0}, {}));
    CHECK_THROWS(GalerkinSpace({}, {}));
}

TEST_CASE("sampler respects the radius and is deterministic") {
    GalerkinSpace space({1.0, 4.0, 9.0, 16.0}, {});
    const StateVec zero = sample_state(space, 0.0, 11);
    for (double c : zero.coeffs) CHECK(c == 0.0);
    for (std::uint64_t s = 0; s < 200; ++s) {
        const StateVec v = sample_state(space, 2.5, s);
        CHECK(std::sqrt(h_norm_sq(space, v)) <= 2.5 + 1e-12);
    }
    const StateVec a = sample_state(space, 1.0, 77);
    const StateVec b = sample_state(space, 1.0, 77);
    for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k] == b[k]);
}

TEST_CASE("embedding inequality holds exactly on random samples") {
    GalerkinSpace space = make_sine_space_1d(16);
    CHECK(space.lambda1() == 1.0);
    for (int i = 0; i < 10000; ++i) {
        const StateVec v = sample_state(space, 3.0, rng::derive_seed(3, i));
        CHECK(space.lambda1() * h_norm_sq(space, v) <= v_norm_sq(space, v));
    }
}

TEST_CASE("dual pairing of an embedded state is the H inner product") {
    GalerkinSpace space = make_sine_space_1d(8);
    for (int i = 0; i < 100; ++i) {
        const StateVec u = sample_state(space, 2.0, rng::derive_seed(5, 2 * i));
        const StateVec v = sample_state(space, 2.0, rng::derive_seed(5, 2 * i + 1));
        double direct = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) direct += u[k] * v[k];
        CHECK(dual_pair(space, embed(u), v) == doctest::Approx(direct).epsilon(1e-15));
    }
}

TEST_CASE("fractional weights for the 1D space") {
    GalerkinSpace space = make_sine_space_1d(4, 1.25);
    CHECK(space.v_weight(0) == doctest::Approx(1.0));
    CHECK(space.v_weight(1) == doctest::Approx(std::pow(4.0, 1.25)));
}
