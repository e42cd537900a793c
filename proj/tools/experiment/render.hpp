#pragma once

// Report artifacts: JSON forms of lines and solves, SVG overlays and CSV
// tables. Everything here is a pure function of report.json and the stored
// field CSVs, so `cmclab report <dir>` reproduces the files of a run.

#include <filesystem>
#include <string>
#include <vector>

#include "cmclab/analysis.hpp"
#include "config.hpp"

namespace cmclab::experiment {

json point_json(const Point2& p);
json line_to_json(const DivergenceLine& line);
json unclassified_to_json(const UnclassifiedComponent& u);
json endpoint_to_json(const EndpointClass& e);
/// {residual_norm, iterations, converged, max_W} plus the stop reason.
json solve_to_json(const CMCSolution& sol);

/// Circle arc stored under a line's "arc" key.
CircleArc arc_of_line(const json& line);

/// Domain outline, divergent-node heat mask (when `estimate` is given),
/// lines with nu ticks and endpoint markers. y points up in the picture.
std::string render_svg(const Domain& dom, const ConvergenceDomainEstimate* estimate, const json& lines);

/// Rewrites plots/*.svg and tables/*.csv from `report` (as stored in
/// report.json) and the field files it lists. Returns the written paths
/// relative to `dir`.
std::vector<std::string> render_artifacts(const std::filesystem::path& dir, const json& report);

/// Reads a stored sequence back as solutions with the report's H.
std::vector<CMCSolution> read_sequence(const std::filesystem::path& dir, const json& files, double H);

}  // namespace cmclab::experiment
