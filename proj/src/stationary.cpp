#include "monodrift/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "monodrift/errors.hpp"
#include "monodrift/framework.hpp"
#include "monodrift/parallel.hpp"
#include "monodrift/rng.hpp"

namespace monodrift {

double d_metric(const Path& x, const Path& y, const MetricConfig& cfg,
                const GalerkinSpace& space) {
    if (std::abs(x.grid.dt - y.grid.dt) > 1e-12)
        throw ConfigError("d_metric: paths must share dt");
    const double dt = x.grid.dt;
    const double lo = std::max(x.grid.t0, y.grid.t0);
    const double hi = std::min(x.grid.t1, y.grid.t1);
    if (!(hi >= lo)) throw ConfigError("d_metric: paths have no common support");
    const double align = (y.grid.t0 - x.grid.t0) / dt;
    if (std::abs(align - std::llround(align)) > 1e-6)
        throw ConfigError("d_metric: grids are not node-aligned");

    // per-node squared H and V differences over the common window
    const auto i0x = static_cast<std::int64_t>(std::llround((lo - x.grid.t0) / dt));
    const auto i0y = static_cast<std::int64_t>(std::llround((lo - y.grid.t0) / dt));
    const auto n_nodes =
        static_cast<std::int64_t>(std::llround((hi - lo) / dt)) + 1;
    std::vector<double> dh(n_nodes), dv(n_nodes);
    const int dim = space.dim();
    for (std::int64_t i = 0; i < n_nodes; ++i) {
        const StateVec& xs = x.states[static_cast<std::size_t>(i0x + i)];
        const StateVec& ys = y.states[static_cast<std::size_t>(i0y + i)];
        double h = 0.0, v = 0.0;
        for (int k = 0; k < dim; ++k) {
            const double d = xs[k] - ys[k];
            h += d * d;
            v += space.v_weight(k) * d * d;
        }
        dh[i] = h;
        dv[i] = v;
    }

    double total = 0.0;
    for (int N = 1; N <= cfg.n_max; ++N) {
        const double w_lo = std::max(lo, -static_cast<double>(N));
        const double w_hi = std::min(hi, static_cast<double>(N));
        if (!(w_hi >= w_lo)) continue;
        const auto a = static_cast<std::int64_t>(std::llround((w_lo - lo) / dt));
        const auto b = static_cast<std::int64_t>(std::llround((w_hi - lo) / dt));
        double sup_h = 0.0;
        double int_v = 0.0;
        for (std::int64_t i = a; i <= b; ++i) {
            const double s = lo + static_cast<double>(i) * dt;
            const double weight =
                cfg.gamma > 0.0 ? std::exp(-cfg.gamma * (static_cast<double>(N) - s)) : 1.0;
            sup_h = std::max(sup_h, weight * dh[i]);
            if (i > a) int_v += 0.5 * dt * (dv[i - 1] + dv[i]);
        }
        const double bracket = cfg.combine == MetricConfig::Combine::Min
                                   ? std::min(1.0, std::min(sup_h, int_v))
                                   : std::min(1.0, sup_h + int_v);
        total += std::ldexp(bracket, -N);
    }
    return std::sqrt(total);
}

std::pair<Path, PullbackDiagnostics> pullback(const ModelSpec& model, double eps,
                                              const StateVec& xi, const PullbackOptions& opts,
                                              std::uint64_t seed) {
    if (opts.schedule.empty()) throw ConfigError("pullback: empty schedule");
    for (std::size_t i = 0; i + 1 < opts.schedule.size(); ++i)
        if (opts.schedule[i] >= opts.schedule[i + 1])
            throw ConfigError("pullback: schedule must be strictly increasing");
    if (opts.enforce_eps_tilde && eps > 0.0) {
        const ConstantsReport rep = thresholds(model, eps);
        if (eps >= rep.eps_tilde)
            throw InadmissibleEpsError("pullback: eps >= eps_tilde = " +
                                       std::to_string(rep.eps_tilde));
    }

    const int n_last = opts.schedule.back();
    const TimeGrid deep_grid = TimeGrid::make(-n_last, opts.t_end, opts.dt);
    const NoisePath noise =
        eps > 0.0 ? NoisePath::brownian(deep_grid, model.noise_dim(), seed) : NoisePath{};

    PullbackDiagnostics diag;
    Path prev;
    Path deepest;
    for (std::size_t j = 0; j < opts.schedule.size(); ++j) {
        const int n = opts.schedule[j];
        const TimeGrid grid = TimeGrid::make(-n, opts.t_end, opts.dt);
        Path run = simulate(model, eps, xi, grid, eps > 0.0 ? &noise : nullptr, nullptr);
        diag.start_times.push_back(-static_cast<double>(n));
        if (j > 0)
            diag.pair_distances.push_back(d_metric(prev, run, opts.metric, model.space));
        prev = std::move(run);
        if (j + 1 == opts.schedule.size()) deepest = prev;
    }

    // least-squares slope of log(distance) against the shallower depth
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
        const double denom = static_cast<double>(m) * sxx - sx * sx;
        diag.fitted_rate = (static_cast<double>(m) * sxy - sx * sy) / denom;
    }
    diag.converged = !diag.pair_distances.empty() && diag.pair_distances.back() < opts.tol;
    if (opts.require_convergence && !diag.converged)
        throw std::runtime_error("pullback: not converged at depth " +
                                 std::to_string(n_last) + " (last distance " +
                                 std::to_string(diag.pair_distances.empty()
                                                    ? -1.0
                                                    : diag.pair_distances.back()) +
                                 ")");
    return {std::move(deepest), std::move(diag)};
}

SampleSet invariant_samples(const ModelSpec& model, double eps, int n_draws,
                            const PullbackOptions& opts, std::uint64_t master_seed,
                            int workers) {
    SampleSet set;
    set.time = opts.t_end;
    set.eps = eps;
    set.values.resize(n_draws);
    set.seeds.resize(n_draws);
    PullbackOptions run_opts = opts;
    run_opts.require_convergence = true;
    // check the admissibility gate once, not per draw
    if (opts.enforce_eps_tilde && eps > 0.0) {
        const ConstantsReport rep = thresholds(model, eps);
        if (eps >= rep.eps_tilde)
            throw InadmissibleEpsError("invariant_samples: eps >= eps_tilde = " +
                                       std::to_string(rep.eps_tilde));
    }
    run_opts.enforce_eps_tilde = false;
    const StateVec xi = StateVec::zeros(model.dim());
    parallel_for(n_draws, workers, [&](std::int64_t i) {
        const std::uint64_t s = rng::derive_seed(master_seed, static_cast<std::uint64_t>(i));
        set.seeds[i] = s;
        auto [path, diag] = pullback(model, eps, xi, run_opts, s);
        set.values[i] = path.back();
    });
    return set;
}

StationarityResult two_sample_energy_test(const std::vector<StateVec>& a,
                                          const std::vector<StateVec>& b,
                                          const GalerkinSpace& space, std::uint64_t seed,
                                          int n_permutations, double level) {
    const int na = static_cast<int>(a.size());
    const int nb = static_cast<int>(b.size());
    const int n = na + nb;
    // pooled pairwise H distances
    std::vector<const StateVec*> pool;
    pool.reserve(n);
    for (const auto& s : a) pool.push_back(&s);
    for (const auto& s : b) pool.push_back(&s);
    std::vector<double> dist(static_cast<std::size_t>(n) * n, 0.0);
    const int dim = space.dim();
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < dim; ++k) {
                const double d = (*pool[i])[k] - (*pool[j])[k];
                s += d * d;
            }
            const double r = std::sqrt(s);
            dist[static_cast<std::size_t>(i) * n + j] = r;
            dist[static_cast<std::size_t>(j) * n + i] = r;
        }

    auto energy_stat = [&](const std::vector<int>& labels) {
        double within_a = 0.0, within_b = 0.0, between = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double d = dist[static_cast<std::size_t>(i) * n + j];
                if (labels[i] == 0 && labels[j] == 0)
                    within_a += d;
                else if (labels[i] == 1 && labels[j] == 1)
                    within_b += d;
                else
                    between += d;
            }
        return 2.0 * between / (static_cast<double>(na) * nb) -
               2.0 * within_a / (static_cast<double>(na) * na) -
               2.0 * within_b / (static_cast<double>(nb) * nb);
    };

    std::vector<int> labels(n, 0);
    for (int i = na; i < n; ++i) labels[i] = 1;
    StationarityResult res;
    res.statistic = energy_stat(labels);

    std::vector<double> perm_stats(n_permutations);
    for (int p = 0; p < n_permutations; ++p) {
        std::vector<int> shuffled = labels;
        // Fisher-Yates with keyed draws
        for (int i = n - 1; i > 0; --i) {
            const std::uint64_t u = rng::hash_key(
                {seed, 0x9e57ULL, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(i)});
            const int j = static_cast<int>(u % static_cast<std::uint64_t>(i + 1));
            std::swap(shuffled[i], shuffled[j]);
        }
        perm_stats[p] = energy_stat(shuffled);
    }
    std::sort(perm_stats.begin(), perm_stats.end());
    const auto idx = static_cast<std::size_t>(
        std::ceil((1.0 - level) * static_cast<double>(n_permutations + 1)) - 1);
    res.threshold = perm_stats[std::min(idx, perm_stats.size() - 1)];
    res.p_flag = res.statistic <= res.threshold;
    return res;
}

namespace {

std::uint64_t time_keyed_seed(std::uint64_t seed, double t, std::int64_t i) {
    std::uint64_t bits;
    static_assert(sizeof(double) == sizeof(std::uint64_t));
    std::memcpy(&bits, &t, sizeof(bits));
    return rng::hash_key({seed, bits, static_cast<std::uint64_t>(i)});
}

}  // namespace

StationarityResult stationarity_test(const ModelSpec& model, double eps, double t_a,
                                     double t_b, int n_draws, const PullbackOptions& opts,
                                     std::uint64_t seed, int workers) {
    auto draw_at = [&](double t) {
        std::vector<StateVec> values(n_draws);
        PullbackOptions run_opts = opts;
        run_opts.t_end = t;
        run_opts.require_convergence = true;
        run_opts.enforce_eps_tilde = false;
        const StateVec xi = StateVec::zeros(model.dim());
        parallel_for(n_draws, workers, [&](std::int64_t i) {
            auto [path, diag] = pullback(model, eps, xi, run_opts,
                                         time_keyed_seed(seed, t, i));
            values[i] = path.back();
        });
        return values;
    };
    if (opts.enforce_eps_tilde && eps > 0.0) {
        const ConstantsReport rep = thresholds(model, eps);
        if (eps >= rep.eps_tilde)
            throw InadmissibleEpsError("stationarity_test: eps >= eps_tilde");
    }
    const auto a = draw_at(t_a);
    const auto b = draw_at(t_b);
    return two_sample_energy_test(a, b, model.space, rng::hash_key({seed, 0x7e57ULL}));
}

StationarityResult stationarity_test_transient(const ModelSpec& model, double eps,
                                               const StateVec& xi0, double t_a, double t_b,
                                               int n_draws, double dt, std::uint64_t seed,
                                               int workers) {
    auto draw_at = [&](double t) {
        std::vector<StateVec> values(n_draws);
        parallel_for(n_draws, workers, [&](std::int64_t i) {
            if (t <= 0.0) {
                values[i] = xi0;
                return;
            }
            const TimeGrid grid = TimeGrid::make(0.0, t, dt);
            const NoisePath noise =
                NoisePath::brownian(grid, model.noise_dim(), time_keyed_seed(seed, t, i));
            values[i] = simulate(model, eps, xi0, grid, &noise, nullptr).back();
        });
        return values;
    };
    const auto a = draw_at(t_a);
    const auto b = draw_at(t_b);
    return two_sample_energy_test(a, b, model.space, rng::hash_key({seed, 0x7e58ULL}));
}

}  // namespace monodrift
