#include "monodrift/integrator.hpp"

#include <cmath>

#include "monodrift/errors.hpp"
#include "monodrift/framework.hpp"
#include "monodrift/parallel.hpp"

namespace monodrift {

TimeGrid TimeGrid::make(double t0, double t1, double dt) {
    if (!(dt > 0.0)) throw ConfigError("TimeGrid: dt must be positive");
    if (!(t1 > t0)) throw ConfigError("TimeGrid: t1 must exceed t0");
    TimeGrid g;
    g.t0 = t0;
    g.t1 = t1;
    g.dt = dt;
    g.n_steps = static_cast<std::int64_t>(std::llround((t1 - t0) / dt));
    if (g.n_steps < 1 ||
        std::abs(static_cast<double>(g.n_steps) * dt - (t1 - t0)) >
            1e-12 * std::max(1.0, std::abs(t1 - t0)))
        throw ConfigError("TimeGrid: (t1 - t0) must be an integer multiple of dt");
    return g;
}

NoisePath NoisePath::brownian(const TimeGrid& grid, int cols, std::uint64_t seed) {
    if (cols < 1) throw ConfigError("NoisePath: need cols >= 1");
    const rng::StepScheme scheme = rng::StepScheme::from_dt(grid.dt);
    const double base_f = grid.t0 / grid.dt;
    const auto base = static_cast<std::int64_t>(std::llround(base_f));
    if (std::abs(base_f - static_cast<double>(base)) > 1e-9 * std::max(1.0, std::abs(base_f)))
        throw ConfigError("NoisePath: t0 must be aligned to the dt lattice");
    NoisePath p;
    p.grid = grid;
    p.cols = cols;
    p.seed = seed;
    p.increments.resize(static_cast<std::size_t>(grid.n_steps) * cols);
    for (std::int64_t i = 0; i < grid.n_steps; ++i)
        for (int c = 0; c < cols; ++c)
            p.increments[static_cast<std::size_t>(i) * cols + c] =
                rng::brownian_increment(seed, c, scheme, base + i);
    return p;
}

Control Control::zeros(const TimeGrid& grid, int cols) {
    Control c;
    c.grid = grid;
    c.cols = cols;
    c.values.assign(static_cast<std::size_t>(grid.n_steps) * cols, 0.0);
    return c;
}

void Control::value_at(double t, std::vector<double>& out) const {
    out.assign(cols, 0.0);
    const double pos = (t - grid.t0) / grid.dt;
    const auto idx = static_cast<std::int64_t>(std::floor(pos + 1e-9));
    if (idx < 0 || idx >= grid.n_steps) return;
    for (int c = 0; c < cols; ++c) out[c] = at(idx, c);
}

const StateVec& Path::at_time(double t) const {
    const double pos = (t - grid.t0) / grid.dt;
    const auto idx = static_cast<std::int64_t>(std::llround(pos));
    if (idx < 0 || idx > grid.n_steps ||
        std::abs(pos - static_cast<double>(idx)) > 1e-6)
        throw ConfigError("Path::at_time: t is not a grid node");
    return states[static_cast<std::size_t>(idx)];
}

namespace {

StateVec step_impl(const ModelSpec& model, double eps, const StateVec& x, double dt,
                   const std::vector<double>& dW, const std::vector<double>& v,
                   const NoiseMatrix* cached_noise) {
    const int n = model.dim();
    const DualVec a = model.drift(eps, x);
    StateVec next = StateVec::zeros(n);
    // explicit remainder: full drift plus back the implicit diagonal part
    for (int i = 0; i < n; ++i)
        next[i] = x[i] + dt * (a[i] + model.implicit_diag[i] * x[i]);
    if (!dW.empty() || !v.empty()) {
        const NoiseMatrix local = cached_noise ? NoiseMatrix{} : model.noise(x);
        const NoiseMatrix& b = cached_noise ? *cached_noise : local;
        const double root_eps = std::sqrt(eps);
        for (int c = 0; c < b.cols; ++c) {
            const double w = (dW.empty() ? 0.0 : root_eps * dW[c]) +
                             (v.empty() ? 0.0 : dt * v[c]);
            if (w == 0.0) continue;
            for (int i = 0; i < n; ++i) next[i] += w * b.at(i, c);
        }
    }
    for (int i = 0; i < n; ++i) next[i] /= 1.0 + dt * model.implicit_diag[i];
    return next;
}

}  // namespace

StateVec step(const ModelSpec& model, double eps, const StateVec& x, double dt,
              const std::vector<double>& dW, const std::vector<double>& v) {
    return step_impl(model, eps, x, dt, dW, v, nullptr);
}

Path simulate(const ModelSpec& model, double eps, const StateVec& xi, const TimeGrid& grid,
              const NoisePath* noise, const Control* control) {
    if (static_cast<int>(xi.size()) != model.dim())
        throw ConfigError("simulate: initial state dimension mismatch");
    std::int64_t noise_offset = 0;
    if (noise) {
        if (noise->cols != model.noise_dim())
            throw ConfigError("simulate: noise column count mismatch");
        if (std::abs(noise->grid.dt - grid.dt) > 1e-12)
            throw ConfigError("simulate: noise grid dt mismatch");
        const double off = (grid.t0 - noise->grid.t0) / grid.dt;
        noise_offset = static_cast<std::int64_t>(std::llround(off));
        if (std::abs(off - static_cast<double>(noise_offset)) > 1e-6 || noise_offset < 0 ||
            noise_offset + grid.n_steps > noise->grid.n_steps)
            throw ConfigError("simulate: noise path does not cover the run grid");
    }
    if (control && control->cols != model.noise_dim())
        throw ConfigError("simulate: control column count mismatch");

    Path path;
    path.grid = grid;
    path.states.reserve(static_cast<std::size_t>(grid.n_steps) + 1);
    path.states.push_back(xi);
    std::vector<double> dw;
    std::vector<double> v;
    NoiseMatrix cached;
    const bool use_cache = model.noise_state_independent && (noise || control);
    if (use_cache) cached = model.noise(xi);
    StateVec x = xi;
    for (std::int64_t i = 0; i < grid.n_steps; ++i) {
        if (noise) {
            dw.resize(noise->cols);
            for (int c = 0; c < noise->cols; ++c) dw[c] = noise->at(noise_offset + i, c);
        }
        if (control) control->value_at(grid.node(i), v);
        x = step_impl(model, eps, x, grid.dt, dw, v, use_cache ? &cached : nullptr);
        for (double coeff : x.coeffs)
            if (!std::isfinite(coeff))
                throw BlowupError("simulate: nonfinite state", i, grid.node(i + 1));
        path.states.push_back(x);
    }
    return path;
}

EnergySeries energy_series(const ModelSpec& model, const Path& path) {
    const auto& space = model.space;
    const double beta = model.mono.beta;
    const std::size_t n = path.states.size();
    EnergySeries es;
    es.t.resize(n);
    es.h_sq.resize(n);
    es.v_sq_int.resize(n);
    es.h_beta_v_int.resize(n);
    es.h_2beta.resize(n);
    double prev_v = 0.0, prev_bv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        es.t[i] = path.grid.node(static_cast<std::int64_t>(i));
        const double h = h_norm_sq(space, path.states[i]);
        const double v = v_norm_sq(space, path.states[i]);
        const double hb = std::pow(h, beta / 2.0);
        es.h_sq[i] = h;
        es.h_2beta[i] = std::pow(h, 1.0 + beta / 2.0);
        if (i == 0) {
            es.v_sq_int[i] = 0.0;
            es.h_beta_v_int[i] = 0.0;
        } else {
            es.v_sq_int[i] = es.v_sq_int[i - 1] + 0.5 * path.grid.dt * (prev_v + v);
            es.h_beta_v_int[i] =
                es.h_beta_v_int[i - 1] + 0.5 * path.grid.dt * (prev_bv + hb * v);
        }
        prev_v = v;
        prev_bv = hb * v;
    }
    return es;
}

ExponentialReport exponential_report(const ModelSpec& model, double eps, const StateVec& xi,
                                     const TimeGrid& grid, double gamma, double delta,
                                     int n_paths, std::uint64_t seed, int workers,
                                     double slack) {
    const FrameworkConstants consts = effective_constants(model, eps);
    const double lam_g0 = consts.lambda1 * consts.gamma0;
    const double beta = consts.beta;
    if (!(gamma > 0.0) || gamma > lam_g0 / 2.0 + 1e-12)
        throw ConfigError("exponential_report: gamma must lie in (0, lambda1 gamma0 / 2]");
    if (!(delta > 0.0)) throw ConfigError("exponential_report: delta must be positive");
    if (eps > 0.0) {
        const double cap0 = lam_g0 / (8.0 * eps * consts.c_b);
        const double cap_beta = (1.0 + beta) * lam_g0 /
                                (2.0 * (2.0 + beta) * (2.0 + beta) * consts.c_b * eps);
        if (delta >= std::min(cap0, cap_beta))
            throw ConfigError("exponential_report: delta exceeds the admissible range");
    }
    const double c_are = c_a_rho_eps(consts, eps);

    const double T = grid.t1;
    const double t0 = grid.t0;
    const double xi_h = h_norm_sq(model.space, xi);
    const double xi_hb = std::pow(xi_h, 1.0 + beta / 2.0);

    struct PathStats {
        double sup_a = 0.0, exp_b = 0.0, sup_ab = 0.0, exp_bb = 0.0;
    };
    std::vector<PathStats> stats(n_paths);

    parallel_for(n_paths, workers, [&](std::int64_t p) {
        const NoisePath noise =
            NoisePath::brownian(grid, model.noise_dim(), rng::derive_seed(seed, p));
        const Path path = simulate(model, eps, xi, grid, &noise, nullptr);
        const double dt = grid.dt;
        const double decay = std::exp(-gamma * dt);
        double i_gamma = 0.0, i_plain = 0.0, i_gamma_b = 0.0, i_plain_b = 0.0;
        double prev_v = v_norm_sq(model.space, path.states[0]);
        double prev_hb = std::pow(h_norm_sq(model.space, path.states[0]), beta / 2.0);
        PathStats st;
        for (std::size_t i = 0; i < path.states.size(); ++i) {
            const double t = grid.node(static_cast<std::int64_t>(i));
            const double h = h_norm_sq(model.space, path.states[i]);
            const double v = v_norm_sq(model.space, path.states[i]);
            const double hb = std::pow(h, beta / 2.0);
            if (i > 0) {
                i_gamma = decay * i_gamma + 0.5 * dt * (decay * prev_v + v);
                i_plain += 0.5 * dt * (prev_v + v);
                i_gamma_b = decay * i_gamma_b + 0.5 * dt * (decay * prev_hb * prev_v + hb * v);
                i_plain_b += 0.5 * dt * (prev_hb * prev_v + hb * v);
            }
            const double w = std::exp(-gamma * (T - t));
            st.sup_a = std::max(st.sup_a, w * (h + consts.gamma0 * i_gamma));
            st.exp_b = std::max(st.exp_b, h + 0.5 * consts.gamma0 * i_plain - c_are * (t - t0));
            if (beta > 0.0) {
                const double h2b = std::pow(h, 1.0 + beta / 2.0);
                st.sup_ab = std::max(st.sup_ab, w * (h2b + consts.gamma0 * i_gamma_b));
                st.exp_bb = std::max(
                    st.exp_bb, h2b + 0.5 * consts.gamma0 * i_plain_b -
                                   (1.0 + beta / 2.0) * (c_are + beta * consts.c_b * eps) *
                                       (t - t0));
            }
            prev_v = v;
            prev_hb = hb;
        }
        stats[p] = st;
    });

    double mean_a = 0.0, mean_eb = 0.0, mean_ab = 0.0, mean_ebb = 0.0;
    for (const auto& st : stats) {
        mean_a += st.sup_a;
        mean_eb += std::exp(delta * st.exp_b);
        if (beta > 0.0) {
            mean_ab += st.sup_ab;
            mean_ebb += std::exp(delta * st.exp_bb);
        }
    }
    mean_a /= n_paths;
    mean_eb /= n_paths;

    ExponentialReport rep;
    rep.gamma = gamma;
    rep.delta = delta;
    rep.n_paths = n_paths;
    rep.slack = slack;

    const double bound_a =
        2.0 * std::exp(-gamma * (T - t0)) * xi_h + (2.0 * c_are + 36.0 * eps * consts.c_b) / gamma;
    rep.lines.push_back({"energy_sup", mean_a, bound_a, mean_a <= slack * bound_a});
    const double bound_b = 2.0 * std::exp(delta * xi_h);
    rep.lines.push_back({"exp_sup", mean_eb, bound_b, mean_eb <= slack * bound_b});
    if (beta > 0.0) {
        mean_ab /= n_paths;
        mean_ebb /= n_paths;
        const double bound_ab =
            2.0 * std::exp(-gamma * (T - t0)) * xi_hb +
            (2.0 + beta) * (c_are + (18.0 + 10.0 * beta) * consts.c_b * eps) / gamma;
        rep.lines.push_back(
            {"energy_sup_beta", mean_ab, bound_ab, mean_ab <= slack * bound_ab});
        const double bound_bb = 2.0 * std::exp(delta * xi_hb);
        rep.lines.push_back(
            {"exp_sup_beta", mean_ebb, bound_bb, mean_ebb <= slack * bound_bb});
    }
    return rep;
}

}  // namespace monodrift
