#pragma once

#include <filesystem>

#include "config.hpp"

namespace cmclab::experiment {

struct RunResult {
  json report;
  bool pass = false;
};

/// Runs the configured scenario, writes report.json, fields/, plots/ and
/// tables/ below `out_dir`, and returns the report.
RunResult run(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

/// Report without its "timings" entry, for run-to-run comparison.
json without_timings(json report);

}  // namespace cmclab::experiment
