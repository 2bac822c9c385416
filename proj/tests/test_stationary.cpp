// Path metric axioms, pull-back convergence with rate recovery on the OU
// benchmark, invariant-law statistics, and the stationarity tests.

#include <doctest.h>

#include <cmath>
#include <vector>

#include "monodrift/errors.hpp"
#include "monodrift/framework.hpp"
#include "monodrift/integrator.hpp"
#include "monodrift/models.hpp"
#include "monodrift/rng.hpp"
#include "monodrift/stationary.hpp"

using namespace monodrift;

namespace {

ModelSpec single_mode_ou(double a = 1.0, double sigma = 1.0) {
    GalerkinSpace space({1.0}, {});
    return build_linear_1d(space, a, build_noise(NoiseKind::Additive, {sigma}));
}

ModelSpec burgers(int n = 12, double chi = 1.0) {
    return build_burgers_1d(make_sine_space_1d(n), chi,
                            build_noise(NoiseKind::Additive, {1.0, 1.0}));
}

Path constant_path(const TimeGrid& grid, const StateVec& value) {
    Path p;
    p.grid = grid;
    p.states.assign(static_cast<std::size_t>(grid.n_steps) + 1, value);
    return p;
}

Path random_path(const GalerkinSpace& space, const TimeGrid& grid, std::uint64_t seed) {
    Path p;
    p.grid = grid;
    for (std::int64_t i = 0; i <= grid.n_steps; ++i)
        p.states.push_back(sample_state(space, 1.0, rng::derive_seed(seed, i)));
    return p;
}

}  // namespace

TEST_CASE("metric: identical paths and the constant-difference closed form") {
    GalerkinSpace space({0.5, 1.0}, {});
    const TimeGrid grid = TimeGrid::make(-8.0, 8.0, 0.125);
    const Path a = constant_path(grid, StateVec{{0.3, 0.1}});
    MetricConfig cfg;
    cfg.n_max = 20;
    CHECK(d_metric(a, a, cfg, space) == 0.0);

    // single-mode difference delta e_1 with w_1 = 0.5: every bracket is delta^2
    const double delta = 0.4;
    const Path b = constant_path(grid, StateVec{{0.3 + delta, 0.1}});
    cfg.n_max = 8;  // windows up to the path support
    const double expected =
        delta * std::sqrt(1.0 - std::ldexp(1.0, -cfg.n_max));
    CHECK(d_metric(a, b, cfg, space) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("metric: pseudometric axioms on random paths") {
    const GalerkinSpace space = make_sine_space_1d(4);
    const TimeGrid grid = TimeGrid::make(-2.0, 2.0, 0.25);
    MetricConfig cfg;
    for (int trial = 0; trial < 30; ++trial) {
        const Path x = random_path(space, grid, 3 * trial);
        const Path y = random_path(space, grid, 3 * trial + 1);
        const Path z = random_path(space, grid, 3 * trial + 2);
        const double dxy = d_metric(x, y, cfg, space);
        const double dyx = d_metric(y, x, cfg, space);
        CHECK(dxy >= 0.0);
        CHECK(dxy == doctest::Approx(dyx).epsilon(1e-12));
        CHECK(d_metric(x, z, cfg, space) <=
              dxy + d_metric(y, z, cfg, space) + 1e-12);
    }
}

TEST_CASE("metric: sum variant dominates the min variant") {
    const GalerkinSpace space = make_sine_space_1d(4);
    const TimeGrid grid = TimeGrid::make(-2.0, 2.0, 0.25);
    MetricConfig min_cfg;
    MetricConfig sum_cfg;
    sum_cfg.combine = MetricConfig::Combine::Sum;
    const Path x = random_path(space, grid, 100);
    const Path y = random_path(space, grid, 101);
    CHECK(d_metric(x, y, sum_cfg, space) >= d_metric(x, y, min_cfg, space));
}

TEST_CASE("pullback: OU distances decay at the drift rate") {
    const double a = 1.0;
    const ModelSpec m = single_mode_ou(a);
    PullbackOptions opts;
    opts.schedule = {2, 4, 8, 16};
    opts.dt = 1e-3;
    opts.tol = 1e-3;
    opts.metric.gamma = 4.0 * a;  // weighted equivalent metric resolves the rate
    opts.enforce_eps_tilde = false;
    StateVec xi = StateVec::zeros(1);
    xi[0] = 2.0;
    const auto [path, diag] = pullback(m, 0.05, xi, opts, 11);
    REQUIRE(diag.pair_distances.size() == 3);
    CHECK(diag.converged);
    CHECK(diag.pair_distances[1] < diag.pair_distances[0]);
    CHECK(diag.pair_distances[2] < diag.pair_distances[1]);
    CHECK(std::abs(-diag.fitted_rate - a) < 0.25 * a);
    CHECK(path.grid.t0 == -16.0);
}

TEST_CASE("pullback: burgers converges with negative fitted rate") {
    const ModelSpec m = burgers();
    const ConstantsReport rep = thresholds(m, 1e-3);
    const double eps = rep.eps_tilde / 2.0;
    PullbackOptions opts;
    opts.schedule = {2, 4, 8, 16};
    opts.dt = 1e-3;
    opts.tol = 1e-4;
    opts.metric.gamma = 2.0;
    const auto [path, diag] = pullback(m, eps, StateVec::zeros(12), opts, 21);
    CHECK(diag.converged);
    CHECK(diag.fitted_rate < 0.0);
    for (std::size_t i = 1; i < diag.pair_distances.size(); ++i)
        CHECK(diag.pair_distances[i] < diag.pair_distances[i - 1]);
}

TEST_CASE("pullback: the limit forgets the initial condition") {
    const ModelSpec m = burgers();
    const ConstantsReport rep = thresholds(m, 1e-3);
    const double eps = rep.eps_tilde / 2.0;
    PullbackOptions opts;
    opts.schedule = {2, 4, 8, 16};
    opts.dt = 1e-3;
    opts.tol = 1e-4;
    StateVec xi2 = StateVec::zeros(12);
    xi2[0] = 1.0;
    xi2[3] = -0.5;
    const auto [p1, d1] = pullback(m, eps, StateVec::zeros(12), opts, 33);
    const auto [p2, d2] = pullback(m, eps, xi2, opts, 33);
    double dist_sq = 0.0;
    for (int k = 0; k < 12; ++k) {
        const double d = p1.back()[k] - p2.back()[k];
        dist_sq += d * d;
    }
    CHECK(std::sqrt(dist_sq) < opts.tol);
}

TEST_CASE("pullback: eps above the threshold is rejected when enforced") {
    const ModelSpec m = single_mode_ou();
    const ConstantsReport rep = thresholds(m, 0.01);
    PullbackOptions opts;
    opts.schedule = {2, 4};
    CHECK_THROWS_AS(pullback(m, rep.eps_tilde * 1.5, StateVec::zeros(1), opts, 1),
                    InadmissibleEpsError);
    opts.enforce_eps_tilde = false;
    CHECK_NOTHROW(pullback(m, rep.eps_tilde * 1.5, StateVec::zeros(1), opts, 1));
}

TEST_CASE("invariant samples: OU stationary variance and eps ordering") {
    const double a = 1.0, sigma = 1.0;
    const ModelSpec m = single_mode_ou(a, sigma);
    PullbackOptions opts;
    opts.schedule = {4, 8};
    opts.dt = 1e-3;
    opts.tol = 5e-3;
    opts.metric.gamma = 4.0;
    opts.enforce_eps_tilde = false;
    const int n_draws = 2000;
    std::vector<double> second_moments;
    for (const double eps : {0.2, 0.1, 0.05}) {
        const SampleSet set = invariant_samples(m, eps, n_draws, opts, 17, 4);
        double sum_sq = 0.0;
        for (const auto& v : set.values) sum_sq += v[0] * v[0];
        const double var = sum_sq / n_draws;
        second_moments.push_back(var);
        const double exact = eps * sigma * sigma / (2.0 * a);
        CHECK(std::abs(var - exact) < 3.0 * exact * std::sqrt(2.0 / n_draws));
    }
    CHECK(second_moments[0] > second_moments[1]);
    CHECK(second_moments[1] > second_moments[2]);
}

TEST_CASE("invariant samples: permuting seeds permutes draws") {
    const ModelSpec m = single_mode_ou();
    PullbackOptions opts;
    opts.schedule = {2, 4};
    opts.dt = 1e-2;
    opts.tol = 0.1;
    opts.metric.gamma = 4.0;
    opts.enforce_eps_tilde = false;
    const SampleSet set = invariant_samples(m, 0.05, 10, opts, 5, 1);
    // draw i is fully determined by its recorded seed
    PullbackOptions run_opts = opts;
    run_opts.require_convergence = true;
    for (int i = 0; i < 10; ++i) {
        const auto [path, diag] =
            pullback(m, 0.05, StateVec::zeros(1), run_opts, set.seeds[i]);
        CHECK(path.back()[0] == set.values[i][0]);
    }
}

TEST_CASE("stationarity test accepts the OU invariant law across times") {
    const ModelSpec m = single_mode_ou();
    PullbackOptions opts;
    opts.schedule = {4, 8};
    opts.dt = 1e-3;
    opts.tol = 5e-3;
    opts.metric.gamma = 4.0;
    opts.enforce_eps_tilde = false;
    const StationarityResult res = stationarity_test(m, 0.05, 0.0, 1.0, 400, opts, 27, 4);
    CHECK(res.p_flag);
    // identical times give a statistic of exactly zero
    const StationarityResult same = stationarity_test(m, 0.05, 1.0, 1.0, 50, opts, 27, 4);
    CHECK(same.statistic == 0.0);
}

TEST_CASE("transient samples fail the two-time test") {
    const ModelSpec m = single_mode_ou();
    StateVec xi = StateVec::zeros(1);
    xi[0] = 5.0;  // far above the noise scale
    const StationarityResult res =
        stationarity_test_transient(m, 0.05, xi, 0.0, 5.0, 200, 1e-2, 3, 4);
    CHECK_FALSE(res.p_flag);
}

TEST_CASE("one-step evolution preserves the invariant law") {
    const ModelSpec m = single_mode_ou();
    PullbackOptions opts;
    opts.schedule = {4, 8};
    opts.dt = 1e-3;
    opts.tol = 5e-3;
    opts.metric.gamma = 4.0;
    opts.enforce_eps_tilde = false;
    const double eps = 0.05;
    const int n = 300;
    const SampleSet base = invariant_samples(m, eps, n, opts, 41, 4);
    std::vector<StateVec> evolved(base.values.size());
    const TimeGrid grid = TimeGrid::make(0.0, 0.5, 1e-3);
    for (std::size_t i = 0; i < base.values.size(); ++i) {
        const NoisePath noise =
            NoisePath::brownian(grid, m.noise_dim(), rng::derive_seed(991, i));
        evolved[i] = simulate(m, eps, base.values[i], grid, &noise).back();
    }
    const SampleSet fresh = invariant_samples(m, eps, n, opts, 42, 4);
    const StationarityResult res =
        two_sample_energy_test(evolved, fresh.values, m.space, 77);
    CHECK(res.p_flag);
}
