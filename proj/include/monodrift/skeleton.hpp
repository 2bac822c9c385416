// Deterministic skeleton equation dX = A^0(X) dt + B(X) v dt, the
// Cameron-Martin action, and rate-function evaluation by penalized control
// optimization: J(v) = action(v) + mu |X_v(t1) - target|_H^2 minimized by
// limited-memory quasi-Newton descent with an exact discrete adjoint
// gradient, continued over an increasing mu schedule.

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "monodrift/integrator.hpp"
#include "monodrift/models.hpp"
#include "monodrift/stationary.hpp"

namespace monodrift {

/// Cameron-Martin action 1/2 sum_steps dt |v_step|_U^2.
double action(const Control& control);

/// eps = 0 drift, no Stratonovich correction, control forcing only.
Path skeleton_solve(const ModelSpec& model, const StateVec& xi, const TimeGrid& grid,
                    const Control* control);

/// eps = 0 pull-back limit approximation with the same diagnostics
/// machinery as the stochastic pull-back. The control is read by absolute
/// time (zero outside its support).
std::pair<Path, PullbackDiagnostics> skeleton_pullback(const ModelSpec& model,
                                                       const Control& control,
                                                       const PullbackOptions& opts);

/// Exact gradient of J(v) = action(v) + mu |X_v(t1) - target|_H^2 for the
/// discrete semi-implicit scheme, flattened step-major (n_steps x K).
std::vector<double> adjoint_gradient(const ModelSpec& model, const StateVec& xi,
                                     const TimeGrid& grid, const Control& control,
                                     const StateVec& target, double mu);

struct RateOptions {
    std::vector<double> mu_schedule{10.0, 100.0, 1000.0};
    int max_iters_per_stage = 500;
    double gap_tol = 1e-3;
    double grad_tol = 1e-8;
    int lbfgs_memory = 10;
    double armijo_c = 1e-4;
    double backtrack = 0.5;
    int max_line_search = 40;
    double dt = 1e-3;
};

struct RateResult {
    double value = 0.0;        // action(v*) — best-so-far if not converged
    Control control;
    double endpoint_gap = 0.0; // H-distance of achieved endpoint to target
    int iterations = 0;
    bool converged = false;    // endpoint_gap <= gap_tol
    std::vector<double> trace; // accepted objective values, nonincreasing
};

/// Minimize the penalized action over piecewise-constant controls on
/// [t0, t1]. With xi = 0, t0 = -T_back, t1 = 0 this approximates the
/// invariant-measure rate I'(target); an unreachable target is reported as
/// converged = false (the infimum over the empty set).
RateResult rate_endpoint(const ModelSpec& model, const StateVec& xi, double t0, double t1,
                         const StateVec& target, const RateOptions& opts);

struct QuasipotentialRow {
    StateVec target;
    double rate = 0.0;
    double v_norm_sq_ref = 0.0;
    double ratio = 0.0;
    bool converged = false;
};

struct QuasipotentialReport {
    std::vector<QuasipotentialRow> rows;
    double ratio_spread = 0.0;  // (max - min) / mean over converged rows
};

/// Compare computed rates against |phi|_V^2 across targets.
QuasipotentialReport quasipotential_crosscheck(const ModelSpec& model,
                                               const std::vector<StateVec>& targets,
                                               double t_back, const RateOptions& opts,
                                               int workers = 1);

}  // namespace monodrift
