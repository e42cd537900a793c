#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "cmclab/geometry.hpp"
#include "cmclab/vec.hpp"

namespace cmclab {

enum class NodeKind : std::uint8_t { exterior = 0, boundary = 1, interior = 2 };

/// Uniform node grid x = origin.x + i h, y = origin.y + j h with a mask.
///
/// Nodes strictly inside the domain whose eight neighbors are all inside are
/// interior; the remaining inside nodes form the boundary ring that carries
/// Dirichlet data; everything else is exterior.
class Grid {
 public:
  Grid(Point2 origin, double h, int nx, int ny, std::vector<NodeKind> kinds);

  /// Covers the bounding box of `dom` with a two-node margin; node positions
  /// are classified with Domain::contains.
  static std::shared_ptr<const Grid> from_domain(const Domain& dom, double h);
  /// Rebuilds interior/boundary classes from an inside/outside flag per node.
  static std::vector<NodeKind> classify(int nx, int ny, const std::vector<std::uint8_t>& inside);

  const Point2& origin() const noexcept { return origin_; }
  double h() const noexcept { return h_; }
  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  std::size_t size() const noexcept { return kinds_.size(); }

  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(i);
  }
  int i_of(std::size_t idx) const noexcept { return static_cast<int>(idx % static_cast<std::size_t>(nx_)); }
  int j_of(std::size_t idx) const noexcept { return static_cast<int>(idx / static_cast<std::size_t>(nx_)); }
  bool in_range(int i, int j) const noexcept { return i >= 0 && j >= 0 && i < nx_ && j < ny_; }

  Point2 position(int i, int j) const noexcept { return {origin_.x + i * h_, origin_.y + j * h_}; }
  Point2 position(std::size_t idx) const noexcept { return position(i_of(idx), j_of(idx)); }

  NodeKind kind(int i, int j) const noexcept {
    return in_range(i, j) ? kinds_[index(i, j)] : NodeKind::exterior;
  }
  NodeKind kind(std::size_t idx) const noexcept { return kinds_[idx]; }
  bool active(int i, int j) const noexcept { return kind(i, j) != NodeKind::exterior; }
  const std::vector<NodeKind>& kinds() const noexcept { return kinds_; }

  std::size_t count(NodeKind k) const;

  /// Same origin, spacing, dimensions and mask.
  bool same_layout(const Grid& other) const;

 private:
  Point2 origin_;
  double h_;
  int nx_;
  int ny_;
  std::vector<NodeKind> kinds_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Grid-sampled function. Values live on every non-exterior node; exterior
/// entries are NaN. Interior values are finite.
class ScalarField {
 public:
  ScalarField(GridPtr grid, std::vector<double> values);

  /// Samples `f` on every non-exterior node.
  template <class F>
  static ScalarField sample(GridPtr grid, F&& f) {
    std::vector<double> values(grid->size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t idx = 0; idx < grid->size(); ++idx) {
      if (grid->kind(idx) != NodeKind::exterior) values[idx] = f(grid->position(idx));
    }
    return ScalarField(std::move(grid), std::move(values));
  }

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const std::vector<double>& values() const noexcept { return values_; }
  double operator[](std::size_t idx) const noexcept { return values_[idx]; }
  double at(int i, int j) const noexcept { return values_[grid_->index(i, j)]; }

  ScalarField shifted(double c) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Per-node derived data with a validity flag. Nodes that could not be
/// computed (no usable stencil) are invalid and listed in `flagged`.
template <class T>
struct NodeData {
  GridPtr grid;
  std::vector<T> values;
  std::vector<std::uint8_t> valid;
  std::vector<std::size_t> flagged;

  bool is_valid(std::size_t idx) const noexcept { return valid[idx] != 0; }
  bool is_valid(int i, int j) const noexcept {
    return grid->in_range(i, j) && valid[grid->index(i, j)] != 0;
  }
  const T& at(int i, int j) const noexcept { return values[grid->index(i, j)]; }
};

using RealField = NodeData<double>;
using VectorField = NodeData<Vec2>;

/// Components (p/W, q/W) of the flux 1-form (p/W) dy - (q/W) dx.
struct FluxForm : NodeData<Vec2> {};
/// Upward unit normals (-p/W, -q/W, 1/W) of the graph.
struct NormalMap : NodeData<Vec3> {};

/// Bilinear interpolation inside the grid cell containing p. Empty when p is
/// outside the grid or a cell corner is invalid.
template <class T, class Valid>
std::optional<T> interpolate_cell(const Grid& grid, const std::vector<T>& values, Valid&& valid,
                                  const Point2& p) {
  const double fx = (p.x - grid.origin().x) / grid.h();
  const double fy = (p.y - grid.origin().y) / grid.h();
  if (!(fx >= 0.0) || !(fy >= 0.0)) return std::nullopt;
  int i = static_cast<int>(fx);
  int j = static_cast<int>(fy);
  if (i >= grid.nx() - 1) i = grid.nx() - 2;
  if (j >= grid.ny() - 1) j = grid.ny() - 2;
  if (i < 0 || j < 0 || fx > grid.nx() - 1 || fy > grid.ny() - 1) return std::nullopt;
  const double ax = fx - i;
  const double ay = fy - j;
  const std::size_t i00 = grid.index(i, j);
  const std::size_t i10 = grid.index(i + 1, j);
  const std::size_t i01 = grid.index(i, j + 1);
  const std::size_t i11 = grid.index(i + 1, j + 1);
  if (!valid(i00) || !valid(i10) || !valid(i01) || !valid(i11)) return std::nullopt;
  const double w00 = (1.0 - ax) * (1.0 - ay);
  const double w10 = ax * (1.0 - ay);
  const double w01 = (1.0 - ax) * ay;
  const double w11 = ax * ay;
  return values[i00] * w00 + values[i10] * w10 + values[i01] * w01 + values[i11] * w11;
}

std::optional<double> interpolate(const ScalarField& f, const Point2& p);
std::optional<Vec2> interpolate(const FluxForm& w, const Point2& p);
std::optional<Vec3> interpolate(const NormalMap& n, const Point2& p);

}  // namespace cmclab
