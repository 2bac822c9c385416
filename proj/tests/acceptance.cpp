// Acceptance suite: one test case per criterion, each printing a single
// PASS/FAIL line. Tolerances are pinned in code.

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "monodrift/framework.hpp"
#include "monodrift/integrator.hpp"
#include "monodrift/ldp.hpp"
#include "monodrift/models.hpp"
#include "monodrift/rng.hpp"
#include "monodrift/skeleton.hpp"
#include "monodrift/stationary.hpp"

using namespace monodrift;
namespace fs = std::filesystem;

namespace {

int workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 4 : static_cast<int>(hw);
}

void report(int id, const std::string& desc, bool ok) {
    std::printf("[criterion %2d] %s: %s\n", id, ok ? "PASS" : "FAIL", desc.c_str());
    std::fflush(stdout);
    CHECK_MESSAGE(ok, "criterion ", id, ": ", desc);
}

ModelSpec burgers_preset(int dim = 24) {
    return build_burgers_1d(make_sine_space_1d(dim), 1.0,
                            build_noise(NoiseKind::Additive, {1.0, 1.0}));
}

ModelSpec gl_preset(int dim = 24) {
    return build_gl_1d(make_sine_space_1d(dim), 1.0, 1.0, 1.0,
                       build_noise(NoiseKind::Additive, {1.0}));
}

ModelSpec ns_additive_preset(int k_max = 2, int cols = 4) {
    return build_ns_2d(make_ns_space_2d(k_max), 1.0,
                       build_noise(NoiseKind::Additive, std::vector<double>(cols, 1.0)));
}

ModelSpec ns_decaying_preset(int k_max = 2) {
    return build_ns_2d(make_ns_space_2d(k_max), 1.0,
                       build_noise(NoiseKind::DecayingMult, {1.0}, 1.0));
}

ModelSpec ou_model(double a = 1.0, double sigma = 1.0) {
    GalerkinSpace space({1.0}, {});
    return build_linear_1d(space, a, build_noise(NoiseKind::Additive, {sigma}));
}

double eps_half_tilde(const ModelSpec& m) { return thresholds(m, 1e-3).eps_tilde / 2.0; }

}  // namespace

TEST_CASE("criterion 1: constants engine") {
    FrameworkConstants c;
    c.lambda1 = 1.0;
    c.gamma0 = 1.0;
    c.beta = 0.0;
    c.c_rho1 = 1.0;
    c.c_rho2 = 0.0;
    c.c_b = 1.0;
    c.l_b = 0.0;
    c.a0_dual_norm = 0.0;
    const ConstantsReport r = thresholds(c, 0.0);
    const bool ok = std::abs(r.gamma_tilde0 - 0.0) <= 1e-12 &&
                    std::abs(r.eps_tilde - 0.03125) <= 1e-12 &&
                    std::abs(delta_eps(c, 0.1) - 0.4) <= 1e-12 &&
                    std::abs(c_a_rho_eps(c, 0.1) - 0.1) <= 1e-12;
    report(1, "thresholds, delta and C_{A,rho,eps} on the reference constants", ok);
}

TEST_CASE("criterion 2: condition audits on the preset matrix") {
    const std::vector<ModelSpec> presets = {burgers_preset(), gl_preset(),
                                            ns_additive_preset(), ns_decaying_preset()};
    bool ok = true;
    for (const auto& m : presets) {
        const double eps = eps_half_tilde(m);
        for (Condition cond : {Condition::A2, Condition::A3, Condition::A4}) {
            const AuditReport rep = audit_condition(m, eps, cond, 10000, 2.0, 1234);
            if (rep.worst_margin < -1e-9) {
                std::printf("  audit %s/%s margin %.3e (line %s)\n", m.name.c_str(),
                            condition_name(cond).c_str(), rep.worst_margin,
                            rep.worst_line.c_str());
                ok = false;
            }
        }
    }
    report(2, "A2/A3/A4 audits, 1e4 samples in H-radius 2, all presets", ok);
}

TEST_CASE("criterion 3: exponential estimates") {
    bool ok = true;
    for (const ModelSpec& m : {burgers_preset(16), ns_additive_preset()}) {
        const double eps = eps_half_tilde(m);
        const FrameworkConstants consts = effective_constants(m, eps);
        const double lam_g0 = consts.lambda1 * consts.gamma0;
        const double cap = lam_g0 / (8.0 * eps * consts.c_b);
        const TimeGrid grid = TimeGrid::make(0.0, 5.0, 1e-3);
        const StateVec xi = StateVec::zeros(m.dim());
        for (double gamma : {0.25 * lam_g0, 0.5 * lam_g0})
            for (double delta : {0.25 * cap, 0.5 * cap}) {
                const ExponentialReport rep = exponential_report(
                    m, eps, xi, grid, gamma, delta, 200, 77, workers(), 1.1);
                for (const auto& line : rep.lines)
                    if (!line.pass) {
                        std::printf("  %s %s: est %.4g bound %.4g\n", m.name.c_str(),
                                    line.name.c_str(), line.estimate, line.bound);
                        ok = false;
                    }
            }
    }
    report(3, "all in-range (gamma, delta) bound lines, 200 paths, slack 1.1", ok);
}

TEST_CASE("criterion 4: pull-back Cauchy property") {
    bool ok = true;
    const std::vector<ModelSpec> presets = {burgers_preset(16), gl_preset(16),
                                            ns_additive_preset(), ns_decaying_preset()};
    for (const auto& m : presets) {
        const double eps = eps_half_tilde(m);
        PullbackOptions opts;
        opts.schedule = {2, 4, 8, 16};
        opts.dt = 1e-3;
        opts.tol = 1e-3;
        opts.metric.gamma = 2.0 * m.space.lambda1() * m.mono.gamma0;
        const auto [path, diag] = pullback(m, eps, StateVec::zeros(m.dim()), opts, 404);
        bool decreasing = true;
        for (std::size_t i = 1; i < diag.pair_distances.size(); ++i)
            decreasing = decreasing && diag.pair_distances[i] < diag.pair_distances[i - 1];
        if (!(decreasing && diag.fitted_rate < 0.0)) {
            std::printf("  %s: distances not Cauchy (rate %.3f)\n", m.name.c_str(),
                        diag.fitted_rate);
            ok = false;
        }
    }
    // rate recovery on the linear model
    const double a = 1.0;
    const ModelSpec ou = ou_model(a);
    PullbackOptions opts;
    opts.schedule = {2, 4, 8, 16};
    opts.dt = 1e-3;
    opts.tol = 1e-3;
    opts.metric.gamma = 4.0 * a;
    StateVec xi = StateVec::zeros(1);
    xi[0] = 2.0;
    const auto [path, diag] = pullback(ou, 0.05, xi, opts, 405);
    if (std::abs(-diag.fitted_rate - a) > 0.25 * a) {
        std::printf("  linear fitted rate %.3f vs drift rate %.3f\n", -diag.fitted_rate, a);
        ok = false;
    }
    report(4, "distances strictly decreasing, rate < 0; linear rate within 25%", ok);
}

TEST_CASE("criterion 5: OU rate oracle and gradient check") {
    const ModelSpec m = ou_model(1.0, 1.0);
    StateVec target = StateVec::zeros(1);
    target[0] = 0.5;
    RateOptions opts;
    opts.dt = 1e-3;
    const RateResult res = rate_endpoint(m, StateVec::zeros(1), -10.0, 0.0, target, opts);
    bool ok = res.converged && std::abs(res.value - 0.25) <= 0.02 * 0.25;

    // adjoint gradient against central differences at the optimizer's state
    const TimeGrid grid = TimeGrid::make(-10.0, 0.0, 1e-3);
    Control probe = res.control;
    for (std::size_t i = 0; i < probe.values.size(); i += 97)
        probe.values[i] += 0.05;  // move off the optimum so the gradient is informative
    const auto g = adjoint_gradient(m, StateVec::zeros(1), grid, probe, target, 100.0);
    auto objective = [&](const Control& c) {
        const Path p = skeleton_solve(m, StateVec::zeros(1), grid, &c);
        const double d = p.back()[0] - target[0];
        return action(c) + 100.0 * d * d;
    };
    const double h = 1e-6;
    double max_rel = 0.0;
    for (std::size_t j = 0; j < probe.values.size(); j += 499) {
        Control cp = probe, cm = probe;
        cp.values[j] += h;
        cm.values[j] -= h;
        const double fd = (objective(cp) - objective(cm)) / (2.0 * h);
        max_rel = std::max(max_rel,
                           std::abs(fd - g[j]) / std::max({std::abs(fd), std::abs(g[j]), 1e-8}));
    }
    if (max_rel > 1e-5) ok = false;
    std::printf("  rate %.5f (target 0.25), gap %.2e, grad rel err %.2e\n", res.value,
                res.endpoint_gap, max_rel);
    report(5, "OU rate 0.25 within 2%, adjoint matches central differences at 1e-5", ok);
}

TEST_CASE("criterion 6: NS quasi-potential proportionality") {
    const ModelSpec m = build_ns_2d(make_ns_space_2d(2), 1.0,
                                    build_noise(NoiseKind::Additive,
                                                std::vector<double>(12, 1.0)));
    // five single-mode targets across |k|^2 in {1, 2, 4}
    const std::vector<int> modes{0, 2, 4, 8, 10};
    const double amp = 0.25;
    std::vector<StateVec> targets;
    for (int mode : modes) {
        StateVec t = StateVec::zeros(m.dim());
        t[mode] = amp;
        targets.push_back(std::move(t));
    }
    RateOptions opts;
    opts.dt = 5e-3;
    opts.gap_tol = 2e-3;
    const QuasipotentialReport rep = quasipotential_crosscheck(m, targets, 8.0, opts,
                                                               workers());
    bool ok = rep.ratio_spread < 0.10;
    for (const auto& row : rep.rows) {
        std::printf("  target |phi|_V^2 %.4f -> rate %.5f ratio %.4f%s\n",
                    row.v_norm_sq_ref, row.rate, row.ratio,
                    row.converged ? "" : " (not converged)");
        ok = ok && row.converged;
    }
    // doubling the first target quadruples the rate
    StateVec doubled = StateVec::zeros(m.dim());
    doubled[modes[0]] = 2.0 * amp;
    const RateResult r2 =
        rate_endpoint(m, StateVec::zeros(m.dim()), -8.0, 0.0, doubled, opts);
    const double quad_ratio = r2.value / rep.rows[0].rate;
    std::printf("  spread %.3f, doubling ratio %.4f\n", rep.ratio_spread, quad_ratio);
    ok = ok && r2.converged && std::abs(quad_ratio - 4.0) <= 0.05 * 4.0;
    report(6, "ratio spread < 10% over five targets; doubling quadruples within 5%", ok);
}

TEST_CASE("criterion 7: LDP scaling on the OU benchmark") {
    const ModelSpec m = ou_model();
    const EventSpec event = EventSpec::mode_threshold(0, 0.5);
    const std::vector<double> eps_list{0.2, 0.1, 0.05, 0.025};
    PullbackOptions opts;
    opts.schedule = {4, 8};
    opts.dt = 1e-3;
    opts.tol = 5e-3;
    opts.metric.gamma = 4.0;
    opts.enforce_eps_tilde = false;
    std::vector<double> p_hat, se;
    for (double eps : eps_list) {
        const auto [p, s] = estimate_probability(m, eps, event, 100000, opts, 2027,
                                                 workers());
        p_hat.push_back(p);
        se.push_back(s);
        std::printf("  eps %.3f: p_hat %.3e (se %.1e)\n", eps, p, s);
    }
    const ProbeResult res = slope_fit(eps_list, p_hat, se, 0.25);
    int inversions = 0;
    double prev = 1e300;
    for (std::size_t i = 0; i < res.neg_eps_log_p.size(); ++i) {
        const double y = res.neg_eps_log_p[i];
        if (std::isnan(y)) continue;
        if (y >= prev) ++inversions;
        prev = y;
    }
    const bool ok =
        std::abs(res.fitted_limit - 0.25) <= 0.2 * 0.25 && inversions <= 1;
    std::printf("  fitted limit %.4f (analytic 0.25), inversions %d\n", res.fitted_limit,
                inversions);
    report(7, "fitted limit within 20% of 0.25, trend monotone up to one inversion", ok);
}

TEST_CASE("criterion 8: stationarity tests") {
    bool ok = true;
    {
        const ModelSpec m = ou_model();
        const double eps = eps_half_tilde(m);
        PullbackOptions opts;
        opts.schedule = {4, 8};
        opts.dt = 1e-3;
        opts.tol = 5e-3;
        opts.metric.gamma = 4.0;
        const StationarityResult res =
            stationarity_test(m, eps, 0.0, 1.0, 400, opts, 55, workers());
        std::printf("  linear: statistic %.4e threshold %.4e\n", res.statistic,
                    res.threshold);
        ok = ok && res.p_flag;
    }
    {
        const ModelSpec m = burgers_preset(12);
        const double eps = eps_half_tilde(m);
        PullbackOptions opts;
        opts.schedule = {4, 8, 16};
        opts.dt = 1e-3;
        opts.tol = 5e-3;
        opts.metric.gamma = 1.0;
        const StationarityResult res =
            stationarity_test(m, eps, 0.0, 1.0, 400, opts, 56, workers());
        std::printf("  burgers: statistic %.4e threshold %.4e\n", res.statistic,
                    res.threshold);
        ok = ok && res.p_flag;
    }
    {
        const ModelSpec m = ou_model();
        StateVec xi = StateVec::zeros(1);
        xi[0] = 5.0;
        const StationarityResult res =
            stationarity_test_transient(m, 0.05, xi, 0.0, 5.0, 400, 1e-2, 57, workers());
        std::printf("  transient: statistic %.4e threshold %.4e\n", res.statistic,
                    res.threshold);
        ok = ok && !res.p_flag;
    }
    report(8, "two-sample test passes on linear and Burgers; transient case fails", ok);
}

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(MONODRIFT_CLI_PATH) + " " + args +
                            " > /dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

TEST_CASE("criterion 9: CLI determinism") {
    const fs::path dir = fs::temp_directory_path() / "monodrift_acceptance_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);

    const std::string common =
        "seed = 11\nworkers = 2\n[space]\ndim = 8\nk_max = 2\n"
        "[grid]\nt0 = 0.0\nt1 = 0.5\ndt = 0.001\n"
        "[pullback]\nschedule = [2, 4]\ndt = 0.001\ntol = 0.05\n"
        "[metric]\ngamma = 4.0\n"
        "[invariant]\nn_draws = 10\n"
        "[estimates]\nn_paths = 20\n"
        "[rate]\nt_back = 2.0\ndt = 0.01\ntarget_amp = 0.3\nmax_iters = 60\n"
        "[quasipotential]\nt_back = 2.0\ndt = 0.01\ntarget_modes = [0, 1]\n"
        "target_amps = [0.2, 0.2]\n"
        "[probe]\nevent = \"mode_threshold\"\nlevel = 0.3\nn_draws = 40\n"
        "[check]\nn_samples = 150\n";
    struct Job {
        const char* command;
        const char* model;
        const char* eps;
        std::vector<const char*> files;
    };
    const std::vector<Job> jobs = {
        {"check", "burgers1d", "0.002", {"check.json"}},
        {"simulate", "burgers1d", "0.002", {"path.csv", "energy.csv"}},
        {"estimates", "linear1d", "0.05", {"estimates.json"}},
        {"pullback", "linear1d", "0.05", {"pullback.json", "stationary_path.csv"}},
        {"invariant", "linear1d", "0.05", {"samples.csv"}},
        {"rate", "linear1d", "0.05", {"rate.json", "control.csv"}},
        {"quasipotential", "linear1d", "0.05", {"quasipotential.csv"}},
        {"probe", "linear1d", "0.05", {"probe.csv", "probe.json"}},
    };
    bool ok = true;
    for (const auto& job : jobs) {
        const fs::path cfg = dir / (std::string(job.command) + ".toml");
        std::ofstream(cfg) << "model = \"" << job.model << "\"\neps = " << job.eps << "\n"
                           << (std::string(job.model) == "linear1d"
                                   ? "enforce_thresholds = false\n"
                                   : "")
                           << common;
        const std::string o1 = (dir / (std::string(job.command) + "_a")).string();
        const std::string o2 = (dir / (std::string(job.command) + "_b")).string();
        const int c1 = run_cli(std::string(job.command) + " --config " + cfg.string() +
                               " --out " + o1);
        const int c2 = run_cli(std::string(job.command) + " --config " + cfg.string() +
                               " --out " + o2);
        if (c1 != 0 || c2 != 0) {
            std::printf("  %s exited %d/%d\n", job.command, c1, c2);
            ok = false;
            continue;
        }
        for (const char* f : job.files) {
            const std::string a = slurp(fs::path(o1) / f);
            const std::string b = slurp(fs::path(o2) / f);
            if (a.empty() || a != b) {
                std::printf("  %s: %s differs between reruns\n", job.command, f);
                ok = false;
            }
        }
    }
    report(9, "every subcommand rerun is byte-identical", ok);
}

TEST_CASE("criterion 10: skeleton dissipation") {
    bool ok = true;
    {
        const ModelSpec m = burgers_preset(16);
        StateVec xi = StateVec::zeros(16);
        xi[0] = 0.9;
        xi[2] = -0.5;
        const TimeGrid grid = TimeGrid::make(0.0, 4.0, 1e-3);
        const Path p = skeleton_solve(m, xi, grid, nullptr);
        const double gamma = m.space.lambda1() * m.mono.gamma0 / 4.0;
        const double h0 = h_norm_sq(m.space, xi);
        for (std::size_t i = 0; i < p.states.size(); ++i) {
            const double t = grid.node(static_cast<std::int64_t>(i));
            if (h_norm_sq(m.space, p.states[i]) > 1.05 * h0 * std::exp(-gamma * t))
                ok = false;
        }
    }
    {
        const ModelSpec m = ns_additive_preset();
        const StateVec xi = sample_state(m.space, 1.0, 606);
        const TimeGrid grid = TimeGrid::make(0.0, 4.0, 1e-3);
        const Path p = skeleton_solve(m, xi, grid, nullptr);
        const double gamma = m.space.lambda1() * m.mono.gamma0 / 4.0;
        const double h0 = h_norm_sq(m.space, xi);
        for (std::size_t i = 0; i < p.states.size(); ++i) {
            const double t = grid.node(static_cast<std::int64_t>(i));
            if (h_norm_sq(m.space, p.states[i]) > 1.05 * h0 * std::exp(-gamma * t))
                ok = false;
        }
    }
    report(10, "free decay dominates exp(-lambda1 gamma0 t / 4) with slack 1.05", ok);
}
