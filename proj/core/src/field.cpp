#include "cmclab/field.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "cmc_operator.hpp"
#include "cmclab/errors.hpp"

namespace cmclab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool usable(const ScalarField& f, int i, int j) {
  return f.grid().active(i, j) && std::isfinite(f.at(i, j));
}

// Derivative along (di, dj) at (i, j); empty when no stencil is available.
std::optional<double> directional(const ScalarField& f, int i, int j, int di, int dj) {
  const double h = f.grid().h();
  const bool fwd1 = usable(f, i + di, j + dj);
  const bool bwd1 = usable(f, i - di, j - dj);
  if (fwd1 && bwd1) return (f.at(i + di, j + dj) - f.at(i - di, j - dj)) / (2.0 * h);
  if (fwd1 && usable(f, i + 2 * di, j + 2 * dj)) {
    return (-3.0 * f.at(i, j) + 4.0 * f.at(i + di, j + dj) - f.at(i + 2 * di, j + 2 * dj)) / (2.0 * h);
  }
  if (bwd1 && usable(f, i - 2 * di, j - 2 * dj)) {
    return (3.0 * f.at(i, j) - 4.0 * f.at(i - di, j - dj) + f.at(i - 2 * di, j - 2 * dj)) / (2.0 * h);
  }
  return std::nullopt;
}

template <class Out>
Out map_gradient(const VectorField& grad, auto&& fn) {
  Out out;
  out.grid = grad.grid;
  using T = typename decltype(out.values)::value_type;
  out.values.assign(grad.values.size(), T{});
  out.valid = grad.valid;
  out.flagged = grad.flagged;
  for (std::size_t idx = 0; idx < grad.values.size(); ++idx) {
    if (grad.valid[idx]) out.values[idx] = fn(grad.values[idx]);
  }
  return out;
}

std::string fmt(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

VectorField gradient(const ScalarField& f) {
  const Grid& g = f.grid();
  VectorField out;
  out.grid = f.grid_ptr();
  out.values.assign(g.size(), Vec2{kNaN, kNaN});
  out.valid.assign(g.size(), 0);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      if (!usable(f, i, j)) continue;
      const std::size_t idx = g.index(i, j);
      const auto dx = directional(f, i, j, 1, 0);
      const auto dy = directional(f, i, j, 0, 1);
      if (dx && dy) {
        out.values[idx] = {*dx, *dy};
        out.valid[idx] = 1;
      } else {
        out.flagged.push_back(idx);
      }
    }
  }
  return out;
}

RealField slope_w(const VectorField& grad) {
  return map_gradient<RealField>(grad, [](const Vec2& d) { return std::sqrt(1.0 + dot(d, d)); });
}
RealField slope_w(const ScalarField& f) { return slope_w(gradient(f)); }

NormalMap normal_map(const VectorField& grad) {
  return map_gradient<NormalMap>(grad, [](const Vec2& d) {
    const double w = std::sqrt(1.0 + dot(d, d));
    return Vec3{-d.x / w, -d.y / w, 1.0 / w};
  });
}
NormalMap normal_map(const ScalarField& f) { return normal_map(gradient(f)); }

FluxForm flux_form(const VectorField& grad) {
  return map_gradient<FluxForm>(grad, [](const Vec2& d) { return d / std::sqrt(1.0 + dot(d, d)); });
}
FluxForm flux_form(const ScalarField& f) { return flux_form(gradient(f)); }

double line_integral(const FluxForm& w, const Curve& c) {
  const auto& pts = c.samples();
  std::vector<Vec2> vals(pts.size());
  std::vector<std::size_t> offending;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto v = interpolate(w, pts[k]);
    if (v) {
      vals[k] = *v;
    } else {
      offending.push_back(k);
    }
  }
  if (!offending.empty()) {
    throw PartialCoverageError("line_integral: " + std::to_string(offending.size()) +
                                   " curve samples outside the valid region",
                               std::move(offending));
  }
  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const Vec2 d = pts[k + 1] - pts[k];
    const Vec2 m = (vals[k] + vals[k + 1]) * 0.5;
    sum += m.x * d.y - m.y * d.x;
  }
  return sum;
}

double stokes_defect(const FluxForm& w, const Domain& dom_sub, double H) {
  double total = 0.0;
  for (const Curve& loop : boundary_curves(dom_sub, 0.5 * w.grid->h())) total += line_integral(w, loop);
  return std::abs(total - 2.0 * H * region_area(dom_sub));
}

RealField residual_cmc(const ScalarField& f, double H) {
  const Grid& g = f.grid();
  RealField out;
  out.grid = f.grid_ptr();
  out.values.assign(g.size(), kNaN);
  out.valid.assign(g.size(), 0);
  const double* u = f.values().data();
  for (int j = 1; j + 1 < g.ny(); ++j) {
    for (int i = 1; i + 1 < g.nx(); ++i) {
      const std::size_t idx = g.index(i, j);
      if (g.kind(idx) != NodeKind::interior) continue;
      bool finite = true;
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) finite = finite && std::isfinite(f.at(i + di, j + dj));
      }
      if (!finite) {
        out.flagged.push_back(idx);
        continue;
      }
      out.values[idx] = detail::node_residual(g, u, i, j, H, nullptr);
      out.valid[idx] = 1;
    }
  }
  return out;
}

void write_field_csv(std::ostream& os, const ScalarField& f) {
  const Grid& g = f.grid();
  const VectorField grad = gradient(f);
  os << "# grid origin_x=" << fmt(g.origin().x) << " origin_y=" << fmt(g.origin().y)
     << " h=" << fmt(g.h()) << " nx=" << g.nx() << " ny=" << g.ny() << '\n';
  os << "i,j,x,y,u,p,q,W,N1,N2,N3\n";
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (g.kind(idx) == NodeKind::exterior) continue;
    const Point2 x = g.position(idx);
    os << g.i_of(idx) << ',' << g.j_of(idx) << ',' << fmt(x.x) << ',' << fmt(x.y) << ','
       << fmt(f[idx]);
    if (grad.is_valid(idx)) {
      const Vec2 d = grad.values[idx];
      const double w = std::sqrt(1.0 + dot(d, d));
      os << ',' << fmt(d.x) << ',' << fmt(d.y) << ',' << fmt(w) << ',' << fmt(-d.x / w) << ','
         << fmt(-d.y / w) << ',' << fmt(1.0 / w);
    } else {
      os << ",nan,nan,nan,nan,nan,nan";
    }
    os << '\n';
  }
}

FieldCsv read_field_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# grid", 0) != 0) {
    throw ConfigError("field csv: missing '# grid' header line");
  }
  double ox = kNaN, oy = kNaN, h = kNaN;
  int nx = -1, ny = -1;
  {
    std::istringstream hs(line.substr(6));
    std::string tok;
    while (hs >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq);
      const std::string val = tok.substr(eq + 1);
      if (key == "origin_x") ox = std::stod(val);
      else if (key == "origin_y") oy = std::stod(val);
      else if (key == "h") h = std::stod(val);
      else if (key == "nx") nx = std::stoi(val);
      else if (key == "ny") ny = std::stoi(val);
    }
  }
  if (!std::isfinite(ox) || !std::isfinite(oy) || !(h > 0.0) || nx < 3 || ny < 3) {
    throw ConfigError("field csv: incomplete grid header");
  }
  if (!std::getline(is, line) || line.rfind("i,j,", 0) != 0) {
    throw ConfigError("field csv: missing column header");
  }
  const std::size_t n = static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny);
  std::vector<std::uint8_t> inside(n, 0);
  std::vector<double> u(n, kNaN);
  std::vector<double> w(n, kNaN);
  std::size_t row = 2;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cols.push_back(cell);
    if (cols.size() != 11) throw ConfigError("field csv: row " + std::to_string(row) + " has wrong column count");
    const int i = std::stoi(cols[0]);
    const int j = std::stoi(cols[1]);
    if (i < 0 || j < 0 || i >= nx || j >= ny) {
      throw ConfigError("field csv: row " + std::to_string(row) + " index out of range");
    }
    const std::size_t idx = static_cast<std::size_t>(j) * nx + static_cast<std::size_t>(i);
    inside[idx] = 1;
    u[idx] = std::stod(cols[4]);
    w[idx] = cols[7] == "nan" ? kNaN : std::stod(cols[7]);
  }
  auto grid = std::make_shared<const Grid>(Point2{ox, oy}, h, nx, ny, Grid::classify(nx, ny, inside));
  return FieldCsv{ScalarField(std::move(grid), std::move(u)), std::move(w)};
}

}  // namespace cmclab
