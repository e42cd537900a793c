#include "cmclab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cmclab/errors.hpp"
#include "cmclab/field.hpp"

namespace cmclab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

CircleArc sub_arc(const CircleArc& arc, double s0, double s1) {
  return CircleArc(arc.center(), arc.radius(), arc.angle_at(s0), arc.angle_at(s1), arc.orientation());
}

}  // namespace

std::size_t ConvergenceDomainEstimate::divergent_count() const {
  std::size_t n = 0;
  for (std::size_t idx = 0; idx < bounded_mask.size(); ++idx) n += divergent(idx) ? 1 : 0;
  return n;
}

ConvergenceDomainEstimate convergence_domain(std::span<const CMCSolution> seq, double tau) {
  if (seq.empty()) throw ParameterError("convergence_domain: empty sequence");
  if (!(tau > 1.0)) throw ParameterError("convergence_domain: tau must exceed 1");
  const GridPtr& grid = seq.front().field.grid_ptr();
  for (const CMCSolution& s : seq) {
    if (!s.field.grid().same_layout(*grid)) throw ConfigError("convergence_domain: solutions on different grids");
  }
  const Grid& g = *grid;
  ConvergenceDomainEstimate est{grid, tau, std::vector<double>(g.size(), kNaN),
                                std::vector<std::uint8_t>(g.size(), 0)};
  for (const CMCSolution& s : seq) {
    const RealField w = slope_w(s.field);
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
      if (g.kind(idx) != NodeKind::interior) continue;
      const double v = w.is_valid(idx) ? w.values[idx] : std::numeric_limits<double>::infinity();
      est.sup_W[idx] = std::isnan(est.sup_W[idx]) ? v : std::max(est.sup_W[idx], v);
    }
  }
  std::vector<std::uint8_t> div(g.size(), 0);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    div[idx] = g.kind(idx) == NodeKind::interior && !(est.sup_W[idx] <= tau);
  }
  auto neighbours = [&](const std::vector<std::uint8_t>& set, std::size_t idx, bool all) {
    const int i = g.i_of(idx);
    const int j = g.j_of(idx);
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        if (di == 0 && dj == 0) continue;
        const bool in = g.in_range(i + di, j + dj) && set[g.index(i + di, j + dj)] != 0;
        if (all && !in) return false;
        if (!all && in) return true;
      }
    }
    return all;
  };
  std::vector<std::uint8_t> pruned = div;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (div[idx] && !neighbours(div, idx, false)) pruned[idx] = 0;
  }
  std::vector<std::uint8_t> filled = pruned;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (g.kind(idx) == NodeKind::interior && !pruned[idx] && neighbours(pruned, idx, true)) filled[idx] = 1;
  }
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    est.bounded_mask[idx] = g.kind(idx) == NodeKind::interior && !filled[idx];
  }
  return est;
}

double gradient_bound_radius(double H, double M, double r0, double C_tilde) {
  if (!(H > 0.0)) throw ParameterError("gradient_bound_radius: H must be positive");
  if (!(M >= 1.0)) throw ParameterError("gradient_bound_radius: M must be >= 1");
  if (!(r0 > 0.0)) throw ParameterError("gradient_bound_radius: r0 must be positive");
  if (!(C_tilde > 0.0)) throw ParameterError("gradient_bound_radius: C_tilde must be positive");
  return std::min(0.5 * r0, 3.0 / (8.0 * M * M * C_tilde));
}

std::string to_string(EndpointClass::Kind k) {
  switch (k) {
    case EndpointClass::Kind::interior:
      return "interior";
    case EndpointClass::Kind::on_boundary_piece:
      return "on_boundary_piece";
    case EndpointClass::Kind::corner:
      return "corner";
  }
  return "interior";
}

Curve DivergenceLine::validation_curve() const {
  if (!(h > 0.0)) throw ParameterError("DivergenceLine: grid spacing not set");
  return Curve::from_arc(sub_arc(arc, validation_begin, validation_end), h);
}

std::size_t DetectionResult::accepted_count() const {
  return static_cast<std::size_t>(
      std::count_if(lines.begin(), lines.end(), [](const DivergenceLine& l) { return l.accepted; }));
}

std::vector<double> flux_ratio(const DivergenceLine&, std::span<const CMCSolution> seq, const Curve& sub_arc) {
  const double len = sub_arc.length();
  if (!(len > 0.0)) throw ParameterError("flux_ratio: sub-arc has zero length");
  std::vector<double> out;
  out.reserve(seq.size());
  for (const CMCSolution& s : seq) out.push_back(line_integral(flux_form(s.field), sub_arc) / -len);
  return out;
}

AlignmentSeries normal_alignment(const DivergenceLine& line, std::span<const CMCSolution> seq) {
  const double len = line.validation_end - line.validation_begin;
  if (!(len > 0.0) || !(line.h > 0.0)) throw ParameterError("normal_alignment: empty validation range");
  const auto n = static_cast<std::size_t>(std::ceil(len / line.h));
  AlignmentSeries out;
  for (const CMCSolution& s : seq) {
    const NormalMap nm = normal_map(s.field);
    double sum = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> offending;
    for (std::size_t k = 0; k <= n; ++k) {
      const double sk = line.validation_begin + len * static_cast<double>(k) / static_cast<double>(n);
      const auto N = interpolate(nm, line.arc.point_at(sk));
      if (!N) {
        offending.push_back(k);
        continue;
      }
      const Vec2 nu = line.arc.normal_at(std::min(sk, line.arc.length()));
      const double a = N->x * nu.x + N->y * nu.y;
      sum += a;
      lo = std::min(lo, a);
    }
    if (!offending.empty()) {
      throw PartialCoverageError("normal_alignment: arc samples outside the mask", std::move(offending));
    }
    out.mean.push_back(sum / static_cast<double>(n + 1));
    out.min.push_back(lo);
  }
  return out;
}

std::optional<std::pair<EndpointClass, EndpointClass>> classify_endpoints(const DivergenceLine& line,
                                                                           const Domain& dom) {
  if (line.arc.is_full_circle()) return std::nullopt;
  const double reach = 3.0 * line.h;
  auto classify = [&](const Point2& p) {
    EndpointClass c;
    c.point = p;
    const BoundaryPoint b = dom.nearest_boundary(p);
    c.distance_to_boundary = b.distance;
    double best = std::numeric_limits<double>::infinity();
    for (const Vertex& v : dom.vertices()) {
      if (v.kind == CornerKind::smooth) continue;
      const double d = distance(v.point, p);
      if (d <= reach && d < best) {
        best = d;
        c.kind = EndpointClass::Kind::corner;
        c.piece = v.outgoing;
      }
    }
    if (c.kind != EndpointClass::Kind::corner && b.distance <= reach) {
      c.kind = EndpointClass::Kind::on_boundary_piece;
      c.piece = b.piece;
    }
    return c;
  };
  return std::make_pair(classify(line.arc.start_point()), classify(line.arc.end_point()));
}

std::vector<BlowupRow> boundary_blowup_profile(const CMCSolution& sol, const CircleArc& arc,
                                               const std::vector<double>& offsets) {
  const double h = sol.field.grid().h();
  std::vector<BlowupRow> rows;
  rows.reserve(offsets.size());
  for (const double delta : offsets) {
    BlowupRow row;
    row.offset = delta;
    row.mean_u = kNaN;
    row.slope = kNaN;
    const double radius = arc.radius() - delta;
    if (!(radius > 0.0)) {
      row.skipped = true;
      row.note = "offset exceeds the arc radius";
      rows.push_back(row);
      continue;
    }
    const CircleArc shifted(arc.center(), radius, arc.angle_start(), arc.angle_end(), arc.orientation());
    const Curve c = Curve::from_arc(shifted, 0.5 * h);
    double sum = 0.0;
    std::size_t hits = 0;
    for (const Point2& p : c.samples()) {
      if (const auto u = interpolate(sol.field, p)) {
        sum += *u;
        ++hits;
      }
    }
    row.coverage = static_cast<double>(hits) / static_cast<double>(c.size());
    if (row.coverage < 0.5) {
      row.skipped = true;
      row.note = "offset curve leaves the mask";
    } else {
      row.mean_u = sum / static_cast<double>(hits);
    }
    rows.push_back(row);
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].skipped) continue;
    for (std::size_t m = k + 1; m < rows.size(); ++m) {
      if (rows[m].skipped) continue;
      rows[k].slope = (rows[m].mean_u - rows[k].mean_u) / (rows[m].offset - rows[k].offset);
      break;
    }
  }
  return rows;
}

}  // namespace cmclab
