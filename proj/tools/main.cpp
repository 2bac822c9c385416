// monodrift: spectral-Galerkin simulation and large-deviations toolkit for
// variational SPDEs with locally monotone coefficients.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "monodrift/config.hpp"
#include "monodrift/errors.hpp"
#include "monodrift/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"spectral-Galerkin SPDE simulation and large-deviations toolkit"};
    app.require_subcommand(0, 1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed_override = 0;
    bool seed_set = false;
    int workers_override = 0;
    bool print_schema = false;
    app.add_flag("--print-schema", print_schema, "print the config schema and exit");

    const std::vector<std::string> commands = {"check",     "simulate", "estimates",
                                               "pullback",  "invariant", "rate",
                                               "quasipotential", "probe"};
    for (const auto& name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "config file path")->required();
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed_override, "override the config seed")
            ->each([&](const std::string&) { seed_set = true; });
        sub->add_option("--workers", workers_override, "worker threads");
    }

    CLI11_PARSE(app, argc, argv);

    if (print_schema) {
        std::cout << monodrift::config_schema_text();
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return 2;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    monodrift::RunConfig cfg;
    try {
        cfg = monodrift::parse_config_file(config_path);
    } catch (const monodrift::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (seed_set) {
        cfg.seed = seed_override;
        // the seed changes results, so it belongs in the resolved config
        cfg.resolved = monodrift::serialize_config(cfg);
    }
    if (workers_override > 0) cfg.workers = workers_override;

    return monodrift::run_subcommand(command, cfg, out_dir);
}
