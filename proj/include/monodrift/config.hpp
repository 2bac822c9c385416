// Run configuration: a TOML-style key/value file with sections, validated
// against a fixed schema. Parsing collects every error (with line numbers)
// before failing; unknown keys are rejected. The resolved configuration
// (all defaults filled, canonical order) is what the manifest embeds.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace monodrift {

struct RunConfig {
    std::string model;  // linear1d | burgers1d | semilinear1d | gl1d | ns2d
    std::uint64_t seed = 1;
    int workers = 0;  // 0: resolve from --workers / MONODRIFT_WORKERS / 1
    double eps = 0.01;
    std::vector<double> eps_list;
    bool plots = false;
    bool enforce_thresholds = true;

    // [space]
    int dim = 32;
    int k_max = 2;
    double frac_alpha = 1.0;

    // [params]
    double chi = 1.0;
    double alpha = 1.0;
    double c = 1.0;
    double gamma0 = 0.0;  // 0 = model default
    bool convection = true;

    // [noise]
    std::string noise_kind = "additive";
    int noise_columns = 1;
    double noise_amp = 1.0;
    std::vector<double> noise_amps;
    double sigma0 = 1.0;
    std::vector<double> kraichnan_amps;
    std::vector<double> kraichnan_k1;
    std::vector<double> kraichnan_k2;
    std::vector<double> kraichnan_trig;

    // [grid]
    double t0 = 0.0;
    double t1 = 5.0;
    double dt = 1e-3;

    // [init]
    int init_mode = -1;  // -1 = zero state
    double init_amp = 1.0;

    // [metric]
    int metric_n_max = 16;
    double metric_gamma = 0.0;
    std::string metric_combine = "min";

    // [pullback]
    std::vector<double> schedule{2, 4, 8, 16};
    double pb_tol = 1e-4;
    double pb_t_end = 0.0;
    double pb_dt = 1e-3;

    // [invariant]
    int inv_draws = 200;
    double inv_time = 0.0;

    // [estimates]
    double est_gamma = 0.0;  // 0 = lambda1*gamma0/4
    double est_delta = 0.0;  // 0 = auto
    int est_paths = 200;
    double est_slack = 1.1;

    // [rate]
    double rate_t_back = 10.0;
    double rate_dt = 1e-3;
    int rate_target_mode = 0;
    double rate_target_amp = 0.5;
    std::vector<double> rate_mu{10.0, 100.0, 1000.0};
    int rate_max_iters = 500;
    double rate_gap_tol = 1e-3;
    double rate_grad_tol = 1e-8;

    // [quasipotential]
    double qp_t_back = 8.0;
    double qp_dt = 5e-3;
    std::vector<double> qp_target_modes{0, 2, 4};
    std::vector<double> qp_target_amps{0.3, 0.3, 0.3};

    // [probe]
    std::string probe_event = "mode_threshold";
    double probe_level = 0.5;
    int probe_mode_index = 0;
    int probe_draws = 10000;

    // [check]
    double check_eps0 = -1.0;  // -1 = use eps
    int check_samples = 10000;
    double check_radius = 2.0;

    std::string resolved;  // canonical serialization with defaults filled
};

/// Parse and validate; throws ConfigError listing every problem at once.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Canonical serialization (what `resolved` holds). Call after mutating a
/// result-affecting field such as seed so the manifest reflects the run.
std::string serialize_config(const RunConfig& cfg);

/// Documented schema (keys, types, defaults) generated from the validator.
std::string config_schema_text();

}  // namespace monodrift
