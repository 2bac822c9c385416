#include "monodrift/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "monodrift/errors.hpp"
#include "monodrift/parallel.hpp"

namespace monodrift {

double action(const Control& control) {
    double s = 0.0;
    for (double v : control.values) s += v * v;
    return 0.5 * control.grid.dt * s;
}

Path skeleton_solve(const ModelSpec& model, const StateVec& xi, const TimeGrid& grid,
                    const Control* control) {
    return simulate(model, 0.0, xi, grid, nullptr, control);
}

std::pair<Path, PullbackDiagnostics> skeleton_pullback(const ModelSpec& model,
                                                       const Control& control,
                                                       const PullbackOptions& opts) {
    if (opts.schedule.empty()) throw ConfigError("skeleton_pullback: empty schedule");
    PullbackDiagnostics diag;
    Path prev;
    Path deepest;
    const StateVec xi = StateVec::zeros(model.dim());
    for (std::size_t j = 0; j < opts.schedule.size(); ++j) {
        const int n = opts.schedule[j];
        const TimeGrid grid = TimeGrid::make(-n, opts.t_end, opts.dt);
        Path run = simulate(model, 0.0, xi, grid, nullptr, &control);
        diag.start_times.push_back(-static_cast<double>(n));
        if (j > 0)
            diag.pair_distances.push_back(d_metric(prev, run, opts.metric, model.space));
        prev = std::move(run);
        if (j + 1 == opts.schedule.size()) deepest = prev;
    }
    const std::size_t m = diag.pair_distances.size();
    if (m >= 2) {
        double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double xj = static_cast<double>(opts.schedule[j]);
            const double yj = std::log(std::max(diag.pair_distances[j], 1e-300));
            sx += xj;
            sy += yj;
            sxx += xj * xj;
            sxy += xj * yj;
        }
        diag.fitted_rate =
            (static_cast<double>(m) * sxy - sx * sy) / (static_cast<double>(m) * sxx - sx * sx);
    }
    diag.converged = !diag.pair_distances.empty() && diag.pair_distances.back() < opts.tol;
    return {std::move(deepest), std::move(diag)};
}

std::vector<double> adjoint_gradient(const ModelSpec& model, const StateVec& xi,
                                     const TimeGrid& grid, const Control& control,
                                     const StateVec& target, double mu) {
    if (!(mu > 0.0)) throw ConfigError("adjoint_gradient: mu must be positive");
    const int n = model.dim();
    const int K = model.noise_dim();
    const auto n_steps = grid.n_steps;
    const double dt = grid.dt;

    const Path path = simulate(model, 0.0, xi, grid, nullptr, &control);

    std::vector<double> grad(static_cast<std::size_t>(n_steps) * K, 0.0);
    // terminal cotangent of the penalty
    StateVec lam = StateVec::zeros(n);
    for (int i = 0; i < n; ++i) lam[i] = 2.0 * mu * (path.back()[i] - target[i]);

    std::vector<double> v_row(K);
    StateVec w = StateVec::zeros(n);
    for (std::int64_t s = n_steps - 1; s >= 0; --s) {
        const StateVec& x = path.states[static_cast<std::size_t>(s)];
        control.value_at(grid.node(s), v_row);
        for (int i = 0; i < n; ++i) w[i] = lam[i] / (1.0 + dt * model.implicit_diag[i]);

        // control slot: d(action)/dv + dt * B(x)^T w
        const NoiseMatrix b = model.noise(x);
        for (int c = 0; c < K; ++c) {
            double bt = 0.0;
            for (int i = 0; i < n; ++i) bt += b.at(i, c) * w[i];
            grad[static_cast<std::size_t>(s) * K + c] =
                dt * control.at(s, c) + dt * bt;
        }

        // state slot: lam_s = w + dt * (Jf^T w + d(B v)/dx^T w), where the
        // explicit remainder is f(x) = A^0(x) + D x
        const StateVec jf = model.drift_vjp(0.0, x, DualVec{w.coeffs});
        const StateVec jb = model.noise_vjp(x, v_row, w);
        for (int i = 0; i < n; ++i)
            lam[i] = w[i] + dt * (jf[i] + model.implicit_diag[i] * w[i] + jb[i]);
    }
    return grad;
}

namespace {

struct Objective {
    const ModelSpec& model;
    const StateVec& xi;
    const TimeGrid& grid;
    const StateVec& target;
    double mu;

    double value(const Control& control, double* gap_out = nullptr) const {
        Path path;
        try {
            path = simulate(model, 0.0, xi, grid, nullptr, &control);
        } catch (const BlowupError&) {
            return std::numeric_limits<double>::infinity();
        }
        double gap_sq = 0.0;
        for (int i = 0; i < model.dim(); ++i) {
            const double d = path.back()[i] - target[i];
            gap_sq += d * d;
        }
        if (gap_out) *gap_out = std::sqrt(gap_sq);
        return action(control) + mu * gap_sq;
    }
};

double vec_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

RateResult rate_endpoint(const ModelSpec& model, const StateVec& xi, double t0, double t1,
                         const StateVec& target, const RateOptions& opts) {
    const TimeGrid grid = TimeGrid::make(t0, t1, opts.dt);
    const int K = model.noise_dim();
    const auto dof = static_cast<std::size_t>(grid.n_steps) * K;

    RateResult result;
    result.control = Control::zeros(grid, K);
    Control& control = result.control;

    for (double mu : opts.mu_schedule) {
        const Objective obj{model, xi, grid, target, mu};
        double f = obj.value(control);
        std::vector<double> g = adjoint_gradient(model, xi, grid, control, target, mu);
        result.trace.push_back(f);

        // L-BFGS two-loop recursion with Armijo backtracking
        std::deque<std::vector<double>> s_hist, y_hist;
        std::deque<double> rho_hist;
        for (int iter = 0; iter < opts.max_iters_per_stage; ++iter) {
            const double gnorm = vec_norm(g);
            if (gnorm <= opts.grad_tol * std::max(1.0, std::abs(f))) break;

            std::vector<double> dir = g;
            std::vector<double> alpha(s_hist.size());
            for (std::size_t h = s_hist.size(); h-- > 0;) {
                alpha[h] = rho_hist[h] * dot(s_hist[h], dir);
                axpy(-alpha[h], y_hist[h], dir);
            }
            if (!s_hist.empty()) {
                const double yy = dot(y_hist.back(), y_hist.back());
                const double sy = 1.0 / rho_hist.back();
                if (yy > 0.0)
                    for (double& d : dir) d *= sy / yy;
            }
            for (std::size_t h = 0; h < s_hist.size(); ++h) {
                const double beta = rho_hist[h] * dot(y_hist[h], dir);
                axpy(alpha[h] - beta, s_hist[h], dir);
            }
            for (double& d : dir) d = -d;

            double slope = dot(g, dir);
            if (slope >= 0.0) {  // fall back to steepest descent
                for (std::size_t i = 0; i < dof; ++i) dir[i] = -g[i];
                slope = -gnorm * gnorm;
            }

            double step_len = 1.0;
            const std::vector<double> v0 = control.values;
            double f_new = std::numeric_limits<double>::infinity();
            bool accepted = false;
            for (int ls = 0; ls < opts.max_line_search; ++ls) {
                for (std::size_t i = 0; i < dof; ++i)
                    control.values[i] = v0[i] + step_len * dir[i];
                f_new = obj.value(control);
                if (f_new <= f + opts.armijo_c * step_len * slope) {
                    accepted = true;
                    break;
                }
                step_len *= opts.backtrack;
            }
            if (!accepted) {
                control.values = v0;
                break;
            }

            std::vector<double> g_new =
                adjoint_gradient(model, xi, grid, control, target, mu);
            std::vector<double> s_vec(dof), y_vec(dof);
            for (std::size_t i = 0; i < dof; ++i) {
                s_vec[i] = control.values[i] - v0[i];
                y_vec[i] = g_new[i] - g[i];
            }
            const double sy = dot(s_vec, y_vec);
            if (sy > 1e-12 * vec_norm(s_vec) * vec_norm(y_vec)) {
                s_hist.push_back(std::move(s_vec));
                y_hist.push_back(std::move(y_vec));
                rho_hist.push_back(1.0 / sy);
                if (static_cast<int>(s_hist.size()) > opts.lbfgs_memory) {
                    s_hist.pop_front();
                    y_hist.pop_front();
                    rho_hist.pop_front();
                }
            }
            f = f_new;
            g = std::move(g_new);
            result.trace.push_back(f);
            ++result.iterations;
        }
    }

    double gap = 0.0;
    const Objective final_obj{model, xi, grid, target, opts.mu_schedule.back()};
    final_obj.value(control, &gap);
    result.value = action(control);
    result.endpoint_gap = gap;
    result.converged = gap <= opts.gap_tol;
    return result;
}

QuasipotentialReport quasipotential_crosscheck(const ModelSpec& model,
                                               const std::vector<StateVec>& targets,
                                               double t_back, const RateOptions& opts,
                                               int workers) {
    QuasipotentialReport report;
    report.rows.resize(targets.size());
    const StateVec xi = StateVec::zeros(model.dim());
    parallel_for(static_cast<std::int64_t>(targets.size()), workers, [&](std::int64_t i) {
        QuasipotentialRow row;
        row.target = targets[static_cast<std::size_t>(i)];
        const RateResult r = rate_endpoint(model, xi, -t_back, 0.0, row.target, opts);
        row.rate = r.value;
        row.v_norm_sq_ref = v_norm_sq(model.space, row.target);
        row.ratio = row.v_norm_sq_ref > 0.0 ? row.rate / row.v_norm_sq_ref : 0.0;
        row.converged = r.converged;
        report.rows[static_cast<std::size_t>(i)] = std::move(row);
    });
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
    int count = 0;
    for (const auto& row : report.rows) {
        if (!row.converged || row.v_norm_sq_ref == 0.0) continue;
        lo = std::min(lo, row.ratio);
        hi = std::max(hi, row.ratio);
        sum += row.ratio;
        ++count;
    }
    report.ratio_spread = count > 0 ? (hi - lo) / (sum / count) : 0.0;
    return report;
}

}  // namespace monodrift
