#pragma once

#include <string>
#include <vector>

#include "intermap/config.hpp"
#include "intermap/report.hpp"

namespace intermap {

/// Output directory resolution: explicit config value, then the
/// INTERMAP_LAB_OUT environment variable, then the working directory.
std::string resolve_out_dir(const std::string& requested);

/// Runs the configured experiment, writes per-experiment CSV data and a
/// ReportRow summary (CSV + JSON) into the output directory.
/// Exit codes: 0 all rows pass, 3 numerical failure, 4 some row failed.
int run_experiment(const ExperimentConfig& cfg);

/// Row computation without report emission; used by run_experiment and
/// by tests.
std::vector<ReportRow> compute_rows(const ExperimentConfig& cfg, const std::string& dir);

} // namespace intermap
