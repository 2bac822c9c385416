// Pull-back construction of stationary solutions: solve from increasingly
// deep start times -n against one double-sided noise path, watch the
// truncated path-space metric between consecutive runs decay, and sample
// the invariant law from independent pull-back runs.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "monodrift/integrator.hpp"
#include "monodrift/models.hpp"

namespace monodrift {

struct MetricConfig {
    int n_max = 16;      // truncation of the window series
    double gamma = 0.0;  // exponential weight rate of the equivalent metric
    enum class Combine { Min, Sum } combine = Combine::Min;
};

/// Truncated path-space distance
///   ( sum_{N=1}^{n_max} 2^{-N} [1 ^ S_N ^ I_N] )^{1/2},
/// S_N the (optionally e^{-gamma(N-s)}-weighted) sup of |x-y|_H^2 over grid
/// nodes in [-N, N], I_N the trapezoid of |x-y|_V^2 over the same window;
/// windows are clipped to the common support of the two paths. The "^" is
/// the literal minimum; Combine::Sum replaces S_N ^ I_N by S_N + I_N.
double d_metric(const Path& x, const Path& y, const MetricConfig& cfg,
                const GalerkinSpace& space);

struct PullbackOptions {
    std::vector<int> schedule{2, 4, 8, 16};  // pull-back depths, increasing
    double t_end = 0.0;
    double dt = 1e-3;
    double tol = 1e-4;
    MetricConfig metric;
    bool enforce_eps_tilde = true;  // reject eps >= eps_tilde before running
    bool require_convergence = false;
};

struct PullbackDiagnostics {
    std::vector<double> start_times;     // -n_1 > -n_2 > ...
    std::vector<double> pair_distances;  // d between consecutive runs
    double fitted_rate = 0.0;            // slope of log distance vs depth n
    bool converged = false;
};

/// Deepest pull-back trajectory on [-n_last, t_end] plus convergence
/// diagnostics. All runs share one noise path keyed so that every
/// sub-window reuses identical increments.
std::pair<Path, PullbackDiagnostics> pullback(const ModelSpec& model, double eps,
                                              const StateVec& xi, const PullbackOptions& opts,
                                              std::uint64_t seed);

struct SampleSet {
    std::vector<StateVec> values;
    double time = 0.0;
    double eps = 0.0;
    std::vector<std::uint64_t> seeds;
};

/// n_draws independent pull-back runs, each contributing the state at
/// opts.t_end.
SampleSet invariant_samples(const ModelSpec& model, double eps, int n_draws,
                            const PullbackOptions& opts, std::uint64_t master_seed,
                            int workers = 1);

struct StationarityResult {
    double statistic = 0.0;
    double threshold = 0.0;  // permutation quantile at level 0.01
    bool p_flag = false;     // true when NOT rejected
};

/// Two-sample energy-distance test between pull-back draws at t_a and t_b.
StationarityResult stationarity_test(const ModelSpec& model, double eps, double t_a,
                                     double t_b, int n_draws, const PullbackOptions& opts,
                                     std::uint64_t seed, int workers = 1);

/// Same test on deliberately transient samples: forward runs from xi0 at
/// time 0, compared at t_a and t_b with no pull-back.
StationarityResult stationarity_test_transient(const ModelSpec& model, double eps,
                                               const StateVec& xi0, double t_a, double t_b,
                                               int n_draws, double dt, std::uint64_t seed,
                                               int workers = 1);

/// Energy-distance permutation test on two prepared sample sets.
StationarityResult two_sample_energy_test(const std::vector<StateVec>& a,
                                          const std::vector<StateVec>& b,
                                          const GalerkinSpace& space, std::uint64_t seed,
                                          int n_permutations = 199, double level = 0.01);

}  // namespace monodrift
