// Subcommand orchestration: build the configured model, enforce the
// admissibility gate, run the requested computation, and write the JSON /
// CSV / SVG outputs plus the manifest into the output directory.

#pragma once

#include <string>

#include "monodrift/config.hpp"
#include "monodrift/models.hpp"

namespace monodrift {

ModelSpec build_model_from_config(const RunConfig& cfg);

/// Returns the process exit code: 0 success, 1 computation error, 2 config
/// error (including a rejected eps when enforce_thresholds is set).
int run_subcommand(const std::string& command, const RunConfig& cfg,
                   const std::string& out_dir);

}  // namespace monodrift
