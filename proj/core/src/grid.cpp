#include "cmclab/grid.hpp"

#include <algorithm>
#include <cmath>

#include "cmclab/errors.hpp"

namespace cmclab {

Grid::Grid(Point2 origin, double h, int nx, int ny, std::vector<NodeKind> kinds)
    : origin_(origin), h_(h), nx_(nx), ny_(ny), kinds_(std::move(kinds)) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("Grid: spacing must be positive");
  if (nx < 3 || ny < 3) throw ParameterError("Grid: need at least 3x3 nodes");
  if (kinds_.size() != static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny)) {
    throw ParameterError("Grid: mask size does not match dimensions");
  }
}

std::vector<NodeKind> Grid::classify(int nx, int ny, const std::vector<std::uint8_t>& inside) {
  std::vector<NodeKind> kinds(inside.size(), NodeKind::exterior);
  auto in = [&](int i, int j) {
    return i >= 0 && j >= 0 && i < nx && j < ny &&
           inside[static_cast<std::size_t>(j) * nx + static_cast<std::size_t>(i)] != 0;
  };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (!in(i, j)) continue;
      bool full = true;
      for (int dj = -1; dj <= 1 && full; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (!in(i + di, j + dj)) {
            full = false;
            break;
          }
        }
      }
      kinds[static_cast<std::size_t>(j) * nx + static_cast<std::size_t>(i)] =
          full ? NodeKind::interior : NodeKind::boundary;
    }
  }
  return kinds;
}

std::shared_ptr<const Grid> Grid::from_domain(const Domain& dom, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("Grid: spacing must be positive");
  const Box& box = dom.bounding_box();
  const Point2 origin{box.min.x - 2.0 * h, box.min.y - 2.0 * h};
  const int nx = static_cast<int>(std::floor(box.width() / h)) + 5;
  const int ny = static_cast<int>(std::floor(box.height() / h)) + 5;
  std::vector<std::uint8_t> inside(static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), 0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Point2 p{origin.x + i * h, origin.y + j * h};
      inside[static_cast<std::size_t>(j) * nx + static_cast<std::size_t>(i)] = dom.contains(p) ? 1 : 0;
    }
  }
  return std::make_shared<const Grid>(origin, h, nx, ny, classify(nx, ny, inside));
}

std::size_t Grid::count(NodeKind k) const {
  return static_cast<std::size_t>(std::count(kinds_.begin(), kinds_.end(), k));
}

bool Grid::same_layout(const Grid& other) const {
  return this == &other || (origin_ == other.origin_ && h_ == other.h_ && nx_ == other.nx_ &&
                            ny_ == other.ny_ && kinds_ == other.kinds_);
}

ScalarField::ScalarField(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw ParameterError("ScalarField: null grid");
  if (values_.size() != grid_->size()) throw ParameterError("ScalarField: value count mismatch");
  for (std::size_t idx = 0; idx < values_.size(); ++idx) {
    if (grid_->kind(idx) == NodeKind::interior && !std::isfinite(values_[idx])) {
      throw ParameterError("ScalarField: non-finite value on an interior node");
    }
  }
}

ScalarField ScalarField::shifted(double c) const {
  std::vector<double> v = values_;
  for (double& x : v) x += c;
  return ScalarField(grid_, std::move(v));
}

std::optional<double> interpolate(const ScalarField& f, const Point2& p) {
  const Grid& g = f.grid();
  return interpolate_cell(g, f.values(),
                          [&](std::size_t idx) {
                            return g.kind(idx) != NodeKind::exterior && std::isfinite(f[idx]);
                          },
                          p);
}

std::optional<Vec2> interpolate(const FluxForm& w, const Point2& p) {
  return interpolate_cell(*w.grid, w.values, [&](std::size_t idx) { return w.is_valid(idx); }, p);
}

std::optional<Vec3> interpolate(const NormalMap& n, const Point2& p) {
  return interpolate_cell(*n.grid, n.values, [&](std::size_t idx) { return n.is_valid(idx); }, p);
}

}  // namespace cmclab
