#include "monodrift/runner.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <limits>

#include <json.hpp>

#include "monodrift/errors.hpp"
#include "monodrift/framework.hpp"
#include "monodrift/integrator.hpp"
#include "monodrift/ldp.hpp"
#include "monodrift/report.hpp"
#include "monodrift/skeleton.hpp"
#include "monodrift/stationary.hpp"

namespace monodrift {

using ojson = nlohmann::ordered_json;

namespace {

NoiseSpec noise_from_config(const RunConfig& cfg) {
    std::vector<double> amps = cfg.noise_amps;
    if (amps.empty()) amps.assign(static_cast<std::size_t>(cfg.noise_columns), cfg.noise_amp);
    return build_noise(cfg.noise_kind, std::move(amps), cfg.sigma0);
}

std::optional<KraichnanSpec> kraichnan_from_config(const RunConfig& cfg) {
    if (cfg.kraichnan_amps.empty()) return std::nullopt;
    KraichnanSpec spec;
    for (std::size_t i = 0; i < cfg.kraichnan_amps.size(); ++i) {
        KraichnanField f;
        f.amplitude = cfg.kraichnan_amps[i];
        f.wavevector = {static_cast<int>(cfg.kraichnan_k1[i]),
                        static_cast<int>(cfg.kraichnan_k2[i])};
        f.trig = cfg.kraichnan_trig.empty() ? 0 : static_cast<int>(cfg.kraichnan_trig[i]);
        spec.fields.push_back(f);
    }
    return spec;
}

StateVec initial_state(const RunConfig& cfg, const ModelSpec& model) {
    StateVec xi = StateVec::zeros(model.dim());
    if (cfg.init_mode >= 0) {
        if (cfg.init_mode >= model.dim()) throw ConfigError("init.mode out of range");
        xi[cfg.init_mode] = cfg.init_amp;
    }
    return xi;
}

MetricConfig metric_from_config(const RunConfig& cfg) {
    MetricConfig m;
    m.n_max = cfg.metric_n_max;
    m.gamma = cfg.metric_gamma;
    m.combine = cfg.metric_combine == "sum" ? MetricConfig::Combine::Sum
                                            : MetricConfig::Combine::Min;
    return m;
}

PullbackOptions pullback_from_config(const RunConfig& cfg) {
    PullbackOptions opts;
    opts.schedule.clear();
    for (double n : cfg.schedule) opts.schedule.push_back(static_cast<int>(n));
    opts.tol = cfg.pb_tol;
    opts.t_end = cfg.pb_t_end;
    opts.dt = cfg.pb_dt;
    opts.metric = metric_from_config(cfg);
    opts.enforce_eps_tilde = cfg.enforce_thresholds;
    return opts;
}

RateOptions rate_from_config(const RunConfig& cfg, double dt) {
    RateOptions opts;
    opts.mu_schedule = cfg.rate_mu;
    opts.max_iters_per_stage = cfg.rate_max_iters;
    opts.gap_tol = cfg.rate_gap_tol;
    opts.grad_tol = cfg.rate_grad_tol;
    opts.dt = dt;
    return opts;
}

int resolve_workers(const RunConfig& cfg) {
    if (cfg.workers > 0) return cfg.workers;
    if (const char* env = std::getenv("MONODRIFT_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

ojson constants_json(const ConstantsReport& r) {
    ojson j;
    j["eps0"] = r.eps0;
    j["delta_eps"] = r.delta_eps;
    j["c_a_rho_eps"] = r.c_a_rho_eps;
    j["c_a_rho"] = r.c_a_rho;
    j["gamma_tilde0"] = r.gamma_tilde0;
    j["eps_tilde"] = r.eps_tilde;
    j["eps_tilde_ns_remark"] = r.eps_tilde_ns_remark;
    j["d1"] = r.d1;
    j["d2"] = r.d2;
    j["c_rho1_used"] = r.c_rho1_used;
    return j;
}

ojson audit_json(const AuditReport& a) {
    ojson j;
    j["condition"] = condition_name(a.condition);
    j["samples"] = a.samples;
    j["worst_margin"] = a.worst_margin;
    j["worst_line"] = a.worst_line;
    j["worst_index"] = a.worst_index;
    j["seed"] = a.seed;
    j["c_rho1_used"] = a.c_rho1_used;
    j["witness_v1"] = a.witness_v1.coeffs;
    j["witness_v2"] = a.witness_v2.coeffs;
    return j;
}

void write_manifest(const RunConfig& cfg, const std::string& out_dir,
                    const std::string& command) {
    ojson j;
    j["tool"] = "monodrift";
    j["version"] = "0.1.0";
    j["command"] = command;
    j["seed"] = cfg.seed;
    j["config_hash"] = hex64(fnv1a64(cfg.resolved));
    j["resolved_config"] = cfg.resolved;
    write_text_file(out_dir + "/manifest.json", j.dump(2) + "\n");
}

std::string path_csv(const Path& path) {
    std::vector<std::string> header{"t"};
    const auto dim = path.states.front().size();
    for (std::size_t k = 0; k < dim; ++k) header.push_back("coeff_" + std::to_string(k));
    CsvWriter csv(std::move(header));
    for (std::size_t i = 0; i < path.states.size(); ++i) {
        std::vector<double> row{path.grid.node(static_cast<std::int64_t>(i))};
        row.insert(row.end(), path.states[i].coeffs.begin(), path.states[i].coeffs.end());
        csv.row(row);
    }
    return csv.text();
}

std::string energy_csv(const EnergySeries& es) {
    CsvWriter csv({"t", "h_sq", "v_sq_int", "h_beta_v_int", "h_2beta"});
    for (std::size_t i = 0; i < es.t.size(); ++i)
        csv.row({es.t[i], es.h_sq[i], es.v_sq_int[i], es.h_beta_v_int[i], es.h_2beta[i]});
    return csv.text();
}

void enforce_eps_gate(const RunConfig& cfg, const ModelSpec& model, double eps) {
    if (!cfg.enforce_thresholds || eps <= 0.0) return;
    const ConstantsReport rep = thresholds(model, eps);
    if (eps >= rep.eps_tilde)
        throw ConfigError("eps = " + std::to_string(eps) +
                          " rejected: eps_tilde = " + std::to_string(rep.eps_tilde) +
                          " (set enforce_thresholds = false to override)");
}

}  // namespace

ModelSpec build_model_from_config(const RunConfig& cfg) {
    const NoiseSpec noise = noise_from_config(cfg);
    if (cfg.model == "linear1d") {
        std::vector<double> w(static_cast<std::size_t>(cfg.dim));
        std::vector<ModeLabel> labels(w.size());
        for (int k = 1; k <= cfg.dim; ++k) {
            w[k - 1] = std::pow(static_cast<double>(k) * k, cfg.frac_alpha);
            labels[k - 1] = ModeLabel{k, 0, 1};
        }
        GalerkinSpace space(std::move(w), std::move(labels));
        return build_linear_1d(space, cfg.chi, noise,
                               cfg.gamma0 > 0.0 ? std::optional<double>(cfg.gamma0)
                                                : std::nullopt);
    }
    if (cfg.model == "burgers1d")
        return build_burgers_1d(make_sine_space_1d(cfg.dim), cfg.chi, noise);
    if (cfg.model == "semilinear1d")
        return build_semilinear_1d(make_sine_space_1d(cfg.dim), cfg.chi,
                                   ReactionSpec{cfg.alpha, cfg.c, 3, 0.0}, noise,
                                   cfg.convection);
    if (cfg.model == "gl1d")
        return build_gl_1d(make_sine_space_1d(cfg.dim), cfg.chi, cfg.alpha, cfg.c, noise);
    if (cfg.model == "ns2d")
        return build_ns_2d(make_ns_space_2d(cfg.k_max, cfg.frac_alpha), cfg.chi, noise,
                           kraichnan_from_config(cfg));
    throw ConfigError("unknown model preset '" + cfg.model + "'");
}

namespace {

void run_check(const RunConfig& cfg, const ModelSpec& model, const std::string& out_dir) {
    const double eps0 = cfg.check_eps0 >= 0.0 ? cfg.check_eps0 : cfg.eps;
    ojson j;
    j["model"] = model.name;
    j["constants"] = constants_json(thresholds(model, eps0));
    ojson audits = ojson::array();
    for (Condition c : {Condition::A2, Condition::A3, Condition::A4})
        audits.push_back(audit_json(audit_condition(model, cfg.eps, c, cfg.check_samples,
                                                    cfg.check_radius, cfg.seed)));
    j["audits"] = audits;
    write_text_file(out_dir + "/check.json", j.dump(2) + "\n");
}

void run_simulate(const RunConfig& cfg, const ModelSpec& model, const std::string& out_dir) {
    enforce_eps_gate(cfg, model, cfg.eps);
    const TimeGrid grid = TimeGrid::make(cfg.t0, cfg.t1, cfg.dt);
    const NoisePath noise = NoisePath::brownian(grid, model.noise_dim(), cfg.seed);
    const Path path = simulate(model, cfg.eps, initial_state(cfg, model), grid, &noise);
    const EnergySeries es = energy_series(model, path);
    write_text_file(out_dir + "/path.csv", path_csv(path));
    write_text_file(out_dir + "/energy.csv", energy_csv(es));
    if (cfg.plots) {
        PlotSeries s{"|X|_H^2", es.t, es.h_sq};
        PlotSeries v{"int |X|_V^2", es.t, es.v_sq_int};
        write_text_file(out_dir + "/energy.svg",
                        render_line_plot_svg("trajectory energies", "t", "energy", {s, v}));
    }
}

void run_estimates(const RunConfig& cfg, const ModelSpec& model, const std::string& out_dir) {
    enforce_eps_gate(cfg, model, cfg.eps);
    const TimeGrid grid = TimeGrid::make(cfg.t0, cfg.t1, cfg.dt);
    const FrameworkConstants consts = effective_constants(model, cfg.eps);
    const double lam_g0 = consts.lambda1 * consts.gamma0;
    const double gamma = cfg.est_gamma > 0.0 ? cfg.est_gamma : lam_g0 / 4.0;
    double delta = cfg.est_delta;
    if (delta <= 0.0)
        delta = cfg.eps > 0.0 ? 0.25 * lam_g0 / (8.0 * cfg.eps * consts.c_b) : 1.0;
    const ExponentialReport rep =
        exponential_report(model, cfg.eps, initial_state(cfg, model), grid, gamma, delta,
                           cfg.est_paths, cfg.seed, resolve_workers(cfg), cfg.est_slack);
    ojson j;
    j["model"] = model.name;
    j["eps"] = cfg.eps;
    j["gamma"] = rep.gamma;
    j["delta"] = rep.delta;
    j["n_paths"] = rep.n_paths;
    j["slack"] = rep.slack;
    ojson lines = ojson::array();
    for (const auto& l : rep.lines) {
        ojson lj;
        lj["name"] = l.name;
        lj["estimate"] = l.estimate;
        lj["bound"] = l.bound;
        lj["pass"] = l.pass;
        lines.push_back(lj);
    }
    j["lines"] = lines;
    j["all_pass"] = rep.all_pass();
    write_text_file(out_dir + "/estimates.json", j.dump(2) + "\n");
}

void run_pullback(const RunConfig& cfg, const ModelSpec& model, const std::string& out_dir) {
    const PullbackOptions opts = pullback_from_config(cfg);
    const auto [path, diag] = pullback(model, cfg.eps, initial_state(cfg, model), opts,
                                       cfg.seed);
    ojson j;
    j["model"] = model.name;
    j["eps"] = cfg.eps;
    j["start_times"] = diag.start_times;
    j["pair_distances"] = diag.pair_distances;
    j["fitted_rate"] = diag.fitted_rate;
    j["converged"] = diag.converged;
    write_text_file(out_dir + "/pullback.json", j.dump(2) + "\n");
    write_text_file(out_dir + "/stationary_path.csv", path_csv(path));
    if (cfg.plots && diag.pair_distances.size() >= 2) {
        PlotSeries s;
        s.label = "pair distance";
        for (std::size_t i = 0; i < diag.pair_distances.size(); ++i) {
            s.x.push_back(-diag.start_times[i]);
            s.y.push_back(diag.pair_distances[i]);
        }
        write_text_file(out_dir + "/decay.svg",
                        render_line_plot_svg("pull-back decay", "depth n", "d-metric",
                                             {s}, true));
    }
}

void run_invariant(const RunConfig& cfg, const ModelSpec& model, const std::string& out_dir) {
    PullbackOptions opts = pullback_from_config(cfg);
    opts.t_end = cfg.inv_time;
    const SampleSet set = invariant_samples(model, cfg.eps, cfg.inv_draws, opts, cfg.seed,
                                            resolve_workers(cfg));
    std::vector<std::string> header{"draw", "seed"};
    for (int k = 0; k < model.dim(); ++k) header.push_back("coeff_" + std::to_string(k));
    CsvWriter csv(std::move(header));
    for (std::size_t i = 0; i < set.values.size(); ++i) {
        std::vector<std::string> row{std::to_string(i), std::to_string(set.seeds[i])};
        for (double c : set.values[i].coeffs) row.push_back(format_full(c));
        csv.raw_row(row);
    }
    write_text_file(out_dir + "/samples.csv", csv.text());
}

void run_rate(const RunConfig& cfg, const ModelSpec& model, const std::string& out_dir) {
    if (cfg.rate_target_mode < 0 || cfg.rate_target_mode >= model.dim())
        throw ConfigError("rate.target_mode out of range");
    StateVec target = StateVec::zeros(model.dim());
    target[cfg.rate_target_mode] = cfg.rate_target_amp;
    const RateOptions opts = rate_from_config(cfg, cfg.rate_dt);
    const RateResult res = rate_endpoint(model, StateVec::zeros(model.dim()),
                                         -cfg.rate_t_back, 0.0, target, opts);
    ojson j;
    j["model"] = model.name;
    j["value"] = res.value;
    j["endpoint_gap"] = res.endpoint_gap;
    j["iterations"] = res.iterations;
    j["converged"] = res.converged;
    j["trace"] = res.trace;
    write_text_file(out_dir + "/rate.json", j.dump(2) + "\n");

    std::vector<std::string> header{"t"};
    for (int c = 0; c < res.control.cols; ++c) header.push_back("v_" + std::to_string(c));
    CsvWriter csv(std::move(header));
    for (std::int64_t i = 0; i < res.control.grid.n_steps; ++i) {
        std::vector<double> row{res.control.grid.node(i)};
        for (int c = 0; c < res.control.cols; ++c) row.push_back(res.control.at(i, c));
        csv.row(row);
    }
    write_text_file(out_dir + "/control.csv", csv.text());
}

void run_quasipotential(const RunConfig& cfg, const ModelSpec& model,
                        const std::string& out_dir) {
    std::vector<StateVec> targets;
    for (std::size_t i = 0; i < cfg.qp_target_modes.size(); ++i) {
        const int mode = static_cast<int>(cfg.qp_target_modes[i]);
        if (mode < 0 || mode >= model.dim())
            throw ConfigError("quasipotential.target_modes out of range");
        StateVec t = StateVec::zeros(model.dim());
        t[mode] = cfg.qp_target_amps[i];
        targets.push_back(std::move(t));
    }
    const RateOptions opts = rate_from_config(cfg, cfg.qp_dt);
    const QuasipotentialReport rep =
        quasipotential_crosscheck(model, targets, cfg.qp_t_back, opts, resolve_workers(cfg));
    CsvWriter csv({"target_mode", "target_amp", "rate", "v_norm_sq", "ratio", "converged"});
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& row = rep.rows[i];
        csv.row({cfg.qp_target_modes[i], cfg.qp_target_amps[i], row.rate, row.v_norm_sq_ref,
                 row.ratio, row.converged ? 1.0 : 0.0});
    }
    write_text_file(out_dir + "/quasipotential.csv", csv.text());
    ojson j;
    j["ratio_spread"] = rep.ratio_spread;
    write_text_file(out_dir + "/quasipotential.json", j.dump(2) + "\n");
}

void run_probe(const RunConfig& cfg, const ModelSpec& model, const std::string& out_dir) {
    const EventSpec event = cfg.probe_event == "h_ball"
                                ? EventSpec::h_ball_complement(cfg.probe_level)
                                : EventSpec::mode_threshold(cfg.probe_mode_index,
                                                            cfg.probe_level);
    std::vector<double> eps_list = cfg.eps_list;
    if (eps_list.empty()) eps_list = {cfg.eps};
    PullbackOptions opts = pullback_from_config(cfg);
    for (double eps : eps_list) enforce_eps_gate(cfg, model, eps);
    opts.enforce_eps_tilde = false;

    std::vector<double> p_hat, se;
    for (double eps : eps_list) {
        const auto [p, s] = estimate_probability(model, eps, event, cfg.probe_draws, opts,
                                                 cfg.seed, resolve_workers(cfg));
        p_hat.push_back(p);
        se.push_back(s);
    }
    ojson j;
    j["model"] = model.name;
    j["event"] = cfg.probe_event;
    j["level"] = cfg.probe_level;
    j["n_draws"] = cfg.probe_draws;
    j["eps_list"] = eps_list;
    j["p_hat"] = p_hat;
    j["stderr"] = se;

    CsvWriter csv({"eps", "p_hat", "stderr", "neg_eps_log_p"});
    int n_pos = 0;
    for (double p : p_hat)
        if (p > 0.0) ++n_pos;
    if (n_pos >= 3 && eps_list.size() >= 3) {
        const ProbeResult res = slope_fit(eps_list, p_hat, se);
        j["neg_eps_log_p"] = res.neg_eps_log_p;
        j["fitted_limit"] = res.fitted_limit;
        for (std::size_t i = 0; i < eps_list.size(); ++i)
            csv.row({eps_list[i], p_hat[i], se[i], res.neg_eps_log_p[i]});
        if (cfg.plots) {
            PlotSeries s1{"-eps log p", eps_list, res.neg_eps_log_p};
            write_text_file(out_dir + "/scaling.svg",
                            render_line_plot_svg("LDP scaling", "eps", "-eps log p", {s1}));
        }
    } else {
        j["fitted_limit"] = nullptr;
        j["note"] = "fewer than 3 positive estimates; no extrapolation";
        for (std::size_t i = 0; i < eps_list.size(); ++i) {
            const double y = p_hat[i] > 0.0 ? -eps_list[i] * std::log(p_hat[i])
                                            : std::numeric_limits<double>::quiet_NaN();
            csv.row({eps_list[i], p_hat[i], se[i], y});
        }
    }
    write_text_file(out_dir + "/probe.json", j.dump(2) + "\n");
    write_text_file(out_dir + "/probe.csv", csv.text());
}

}  // namespace

int run_subcommand(const std::string& command, const RunConfig& cfg,
                   const std::string& out_dir) {
    try {
        ensure_directory(out_dir);
        const ModelSpec model = build_model_from_config(cfg);
        if (command == "check")
            run_check(cfg, model, out_dir);
        else if (command == "simulate")
            run_simulate(cfg, model, out_dir);
        else if (command == "estimates")
            run_estimates(cfg, model, out_dir);
        else if (command == "pullback")
            run_pullback(cfg, model, out_dir);
        else if (command == "invariant")
            run_invariant(cfg, model, out_dir);
        else if (command == "rate")
            run_rate(cfg, model, out_dir);
        else if (command == "quasipotential")
            run_quasipotential(cfg, model, out_dir);
        else if (command == "probe")
            run_probe(cfg, model, out_dir);
        else
            throw ConfigError("unknown subcommand '" + command + "'");
        write_manifest(cfg, out_dir, command);
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace monodrift
