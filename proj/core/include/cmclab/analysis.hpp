#pragma once

// Sequence-level analysis of solutions u_n: the convergence-domain estimate,
// divergence-line detection and validation, endpoint classification and
// boundary blow-up profiles.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cmclab/geometry.hpp"
#include "cmclab/grid.hpp"
#include "cmclab/solver.hpp"

namespace cmclab {

/// Estimate of the set where W_n stays bounded, from a finite sequence.
struct ConvergenceDomainEstimate {
  GridPtr grid;
  double tau = 0.0;
  std::vector<double> sup_W;                ///< max over n; NaN off the interior
  std::vector<std::uint8_t> bounded_mask;   ///< interior nodes with sup_W <= tau, despeckled

  bool bounded(std::size_t idx) const noexcept { return bounded_mask[idx] != 0; }
  /// Interior nodes not in the bounded mask.
  bool divergent(std::size_t idx) const noexcept {
    return grid->kind(idx) == NodeKind::interior && bounded_mask[idx] == 0;
  }
  std::size_t divergent_count() const;
};

/// sup_W over the sequence on interior nodes and the threshold mask. Single
/// divergent nodes without divergent neighbours are dropped first, then single
/// bounded nodes enclosed by divergent neighbours are filled; both steps keep
/// the mask monotone in tau and in the sequence.
/// Throws ParameterError for tau <= 1 or an empty sequence, ConfigError for
/// solutions on different grids.
ConvergenceDomainEstimate convergence_domain(std::span<const CMCSolution> seq, double tau);

/// R = min(r0 / 2, 3 / (8 M^2 C_tilde)).
double gradient_bound_radius(double H, double M, double r0, double C_tilde);

struct EndpointClass {
  enum class Kind { interior, on_boundary_piece, corner };
  Kind kind = Kind::interior;
  std::size_t piece = 0;   ///< boundary piece, or the piece leaving the corner
  double distance_to_boundary = 0.0;
  Point2 point;
};

std::string to_string(EndpointClass::Kind k);

struct DivergenceLine {
  /// Radius exactly 1/(2H); oriented so that (nu, tangent) is direct, with
  /// nu = normal_at pointing to the center.
  CircleArc arc = CircleArc::circle({}, 1.0);
  double h = 0.0;              ///< grid spacing of the analysed sequence
  double fit_rms = 0.0;
  double refit_curvature = 0.0;  ///< curvature of the free-radius refit
  std::size_t component_nodes = 0;
  /// Arclength range of arc used for validation.
  double validation_begin = 0.0;
  double validation_end = 0.0;
  std::vector<double> flux_ratios;
  std::vector<double> alignment;
  std::vector<double> alignment_min;
  std::optional<std::pair<EndpointClass, EndpointClass>> endpoints;
  bool accepted = false;
  std::string reason;

  Curve validation_curve() const;
};

/// Divergent component that is not a 1/(2H) arc.
struct UnclassifiedComponent {
  std::size_t nodes = 0;
  double best_rms = 0.0;
  Point2 centroid;
  std::string reason;
};

struct DetectorParams {
  double tau = 10.0;
  std::size_t min_component_nodes = 8;
  double fit_tol = 0.0;          ///< 0 selects 2h
  double curvature_tol = 0.05;   ///< relative, for the free-radius refit
  double min_flux_ratio = 0.9;
  double min_alignment = 0.9;
  double min_coverage = 0.5;     ///< of the arc length, for validation
  double boundary_trim = 8.0;    ///< chain points closer to the boundary (in h) are not fitted
};

struct DetectionResult {
  ConvergenceDomainEstimate estimate;
  std::vector<DivergenceLine> lines;
  std::vector<UnclassifiedComponent> unclassified;

  std::size_t accepted_count() const;
};

/// Divergent set, components, skeletons, fixed-radius center fit, free
/// refit, flux and alignment validation, endpoint classification.
/// Needs at least three solutions on one grid.
DetectionResult detect_divergence_lines(std::span<const CMCSolution> seq, const Domain& dom, double H,
                                        const DetectorParams& params);

/// integral of w_n over sub_arc divided by -length(sub_arc), per n.
/// Throws PartialCoverageError if sub_arc leaves a mask.
std::vector<double> flux_ratio(const DivergenceLine& line, std::span<const CMCSolution> seq,
                               const Curve& sub_arc);

struct AlignmentSeries {
  std::vector<double> mean;
  std::vector<double> min;
};

/// Mean and min over the validation range of <N_n, (nu, 0)>, per n.
AlignmentSeries normal_alignment(const DivergenceLine& line, std::span<const CMCSolution> seq);

/// Corner if within 3h of a non-smooth vertex, on_boundary_piece if within
/// 3h of a piece, interior otherwise. Closed lines have no endpoints.
std::optional<std::pair<EndpointClass, EndpointClass>> classify_endpoints(const DivergenceLine& line,
                                                                           const Domain& dom);

struct BlowupRow {
  double offset = 0.0;
  double mean_u = 0.0;
  double coverage = 0.0;  ///< fraction of offset-curve samples inside the mask
  double slope = 0.0;     ///< d(mean_u)/d(offset) toward the next kept row; NaN if none
  bool skipped = false;
  std::string note;
};

/// Mean of u over the arcs concentric to `arc` at radius R - offset (offset
/// measured along nu). Rows with less than half of the samples inside the
/// mask are skipped with a note.
std::vector<BlowupRow> boundary_blowup_profile(const CMCSolution& sol, const CircleArc& arc,
                                               const std::vector<double>& offsets);

}  // namespace cmclab
