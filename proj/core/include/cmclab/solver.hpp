#pragma once

// Dirichlet solver for Div(grad u / W) = 2H on gridded domains, and an
// independent radial integrator for the unduloid profile.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cmclab/geometry.hpp"
#include "cmclab/grid.hpp"

namespace cmclab {

/// Data as a function of the boundary-ring node position and of the arclength
/// of its projection onto the tagged piece.
using DataFunction = std::function<double(const Point2& x, double s)>;

struct FiniteData {
  DataFunction value;
};

/// n * base, the monotone family of a ramped boundary arc.
struct RampData {
  DataFunction base;
  double scale = 1.0;
};

/// Finite level standing in for +/- infinity.
struct CappedData {
  double level = 0.0;
};

using PieceData = std::variant<FiniteData, RampData, CappedData>;

/// Boundary data keyed by data_tag.
class BoundaryData {
 public:
  BoundaryData() = default;

  BoundaryData& set(const std::string& tag, PieceData data);
  bool has(const std::string& tag) const { return by_tag_.count(tag) != 0; }
  const PieceData& at(const std::string& tag) const;
  const std::map<std::string, PieceData>& entries() const noexcept { return by_tag_; }

  /// Value at a boundary-ring node: the data of the nearest boundary piece,
  /// evaluated at the node and the projected arclength.
  double value_at(const Domain& dom, const Point2& x) const;

  /// Throws ConfigError if some piece of dom has a tag with no data.
  void check_tags(const Domain& dom) const;

 private:
  std::map<std::string, PieceData> by_tag_;
};

struct SolverConfig {
  double h = 1.0 / 64.0;
  double residual_tol = 1e-8;   ///< max-norm of the interior residual
  int max_newton_iters = 60;
  double armijo = 1e-4;         ///< sufficient-decrease constant
  double backtrack = 0.5;       ///< step reduction factor
  double min_step = 0x1p-20;
  double linear_tol = 1e-10;

  /// Throws ParameterError for non-positive tolerances or spacing.
  void validate() const;
};

struct SolverDiagnostics {
  double max_W = 1.0;                        ///< over interior nodes
  std::vector<std::size_t> serrin_violations;  ///< pieces with exterior curvature < 2H
  double min_step_taken = 1.0;
  std::string stop_reason;
};

struct CMCSolution {
  ScalarField field;
  double H = 0.0;
  BoundaryData data;
  double residual_norm = 0.0;  ///< max-norm over interior nodes
  int iterations = 0;
  bool converged = false;
  SolverDiagnostics diagnostics;
};

/// Damped Newton on the conservative residual, started from the discrete
/// Poisson problem Delta u = 2H with the same data (or from `warm_start`
/// when it is given and lives on the same grid). Non-convergence is reported
/// through `converged`, with the best iterate returned.
CMCSolution solve_dirichlet(const Domain& dom, const BoundaryData& data, double H,
                            const SolverConfig& cfg,
                            const ScalarField* warm_start = nullptr);

using DataFamily = std::function<BoundaryData(double n)>;

/// One solve per n, each warm-started from the previous solution plus the
/// discrete harmonic extension of the data increment.
std::vector<CMCSolution> solve_sequence(const Domain& dom, const DataFamily& family, double H,
                                        const SolverConfig& cfg, const std::vector<double>& n_list);

/// Pieces whose exterior curvature is below 2H (relative slack 1e-12).
std::vector<std::size_t> serrin_check(const Domain& dom, double H);

/// Tabulated unduloid profile f with f(1/(2H)) = 0.
class RadialProfile {
 public:
  struct Node {
    double s;     ///< branch variable: r = r1 + s^2 (inner) or r2 - s^2 (outer)
    double r;
    double f;
    double dfds;  ///< derivative in the branch variable s
  };

  RadialProfile(double H, double t, std::vector<Node> inner, std::vector<Node> outer);

  double H() const noexcept { return H_; }
  double t() const noexcept { return t_; }
  double r1() const noexcept { return r1_; }
  double r2() const noexcept { return r2_; }
  /// Nodes ordered from the central circle toward r1 (inner) or r2 (outer).
  const std::vector<Node>& inner() const noexcept { return inner_; }
  const std::vector<Node>& outer() const noexcept { return outer_; }

  /// Cubic Hermite interpolation in the branch variable. DomainError outside
  /// [r1, r2].
  double value_at(double r) const;

 private:
  double H_;
  double t_;
  double r1_;
  double r2_;
  std::vector<Node> inner_;
  std::vector<Node> outer_;
};

/// Integrates f' = g / sqrt(1 - g^2) from r = 1/(2H) toward both rims with
/// classical RK4 in the variables r = r1 + s^2 and r = r2 - s^2. The step
/// count doubles (starting from n_steps) until Richardson-extrapolated
/// values agree to 1e-11.
RadialProfile solve_radial(double t, double H, int n_steps);

}  // namespace cmclab
