#include "cmclab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cmclab/errors.hpp"

namespace cmclab {

namespace {

/// Wraps an angle into [0, 2 pi).
double wrap_positive(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Signed crossings of the ray p + tau * dir (tau > 0) with a piece, counting
// every piece on the half-open range [0, length).
int ray_crossings(const PieceGeometry& g, const Point2& p, const Vec2& dir) {
  return std::visit(
      overloaded{
          [&](const Segment& seg) {
            const Vec2 e = seg.end - seg.start;
            const double denom = cross(dir, e);
            if (denom == 0.0) return 0;
            const Vec2 w = seg.start - p;
            const double tau = cross(w, e) / denom;
            const double lambda = cross(w, dir) / denom;
            if (tau <= 0.0 || lambda < 0.0 || lambda >= 1.0) return 0;
            return denom > 0.0 ? 1 : -1;
          },
          [&](const CircleArc& arc) {
            const Vec2 f = p - arc.center();
            const double b = dot(dir, f);
            const double c = dot(f, f) - arc.radius() * arc.radius();
            const double disc = b * b - c;
            if (disc <= 0.0) return 0;
            const double sq = std::sqrt(disc);
            int total = 0;
            for (const double tau : {-b - sq, -b + sq}) {
              if (tau <= 0.0) continue;
              const Point2 q = p + tau * dir;
              const double theta = angle_of(q - arc.center());
              const double u = wrap_positive(arc.sigma() * (theta - arc.angle_start()));
              if (!arc.is_full_circle() && u >= arc.sweep()) continue;
              const Vec2 tangent = arc.sigma() * perp(q - arc.center());
              const double side = cross(dir, tangent);
              if (side > 0.0) ++total;
              if (side < 0.0) --total;
            }
            return total;
          },
      },
      g);
}

double chord_area_term(const PieceGeometry& g) {
  const Point2 a = start_point(g);
  const Point2 b = end_point(g);
  double area = 0.5 * cross(a, b);
  if (const auto* arc = std::get_if<CircleArc>(&g)) {
    const double r = arc->radius();
    const double sweep = arc->sweep();
    area += arc->sigma() * 0.5 * r * r * (sweep - std::sin(sweep));
  }
  return area;
}

void extend(Box& box, const Point2& p) {
  box.min.x = std::min(box.min.x, p.x);
  box.min.y = std::min(box.min.y, p.y);
  box.max.x = std::max(box.max.x, p.x);
  box.max.y = std::max(box.max.y, p.y);
}

bool on_piece(const PieceGeometry& g, const Point2& p, double tol) {
  return project(g, p).distance <= tol;
}

std::vector<Point2> intersect_pieces(const PieceGeometry& a, const PieceGeometry& b, double tol) {
  std::vector<Point2> out;
  if (const auto* arc = std::get_if<CircleArc>(&a)) {
    for (const Point2& q : intersect_circle(arc->center(), arc->radius(), b, tol)) {
      if (on_piece(a, q, tol)) out.push_back(q);
    }
    return out;
  }
  if (const auto* arc = std::get_if<CircleArc>(&b)) {
    for (const Point2& q : intersect_circle(arc->center(), arc->radius(), a, tol)) {
      if (on_piece(b, q, tol)) out.push_back(q);
    }
    return out;
  }
  const auto& s1 = std::get<Segment>(a);
  const auto& s2 = std::get<Segment>(b);
  const Vec2 d1 = s1.end - s1.start;
  const Vec2 d2 = s2.end - s2.start;
  const double denom = cross(d1, d2);
  if (std::abs(denom) <= 1e-300) {
    // Parallel: report overlapping endpoints only.
    for (const Point2& q : {s1.start, s1.end}) {
      if (on_piece(b, q, tol)) out.push_back(q);
    }
    for (const Point2& q : {s2.start, s2.end}) {
      if (on_piece(a, q, tol)) out.push_back(q);
    }
    return out;
  }
  const Vec2 w = s2.start - s1.start;
  const double l1 = cross(w, d2) / denom;
  const Point2 q = s1.start + l1 * d1;
  if (on_piece(a, q, tol) && on_piece(b, q, tol)) out.push_back(q);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// CircleArc

CircleArc::CircleArc(Point2 center, double radius, double angle_start, double angle_end,
                     Orientation orientation)
    : center_(center),
      radius_(radius),
      angle_start_(angle_start),
      angle_end_(angle_end),
      orientation_(orientation) {
  if (!is_finite(center) || !std::isfinite(radius) || !(radius > 0.0)) {
    throw ParameterError("CircleArc: radius must be positive and finite");
  }
  if (!std::isfinite(angle_start) || !std::isfinite(angle_end)) {
    throw ParameterError("CircleArc: angles must be finite");
  }
  const double delta = (angle_end - angle_start) * sigma();
  if (delta < 0.0) {
    throw ParameterError("CircleArc: angle_end must follow angle_start in the arc orientation");
  }
  if (delta > kTwoPi * (1.0 + 1e-12)) {
    throw ParameterError("CircleArc: sweep exceeds 2 pi");
  }
}

CircleArc CircleArc::circle(Point2 center, double radius, Orientation orientation,
                            double angle_start) {
  const double end = angle_start + (orientation == Orientation::ccw ? kTwoPi : -kTwoPi);
  return CircleArc(center, radius, angle_start, end, orientation);
}

bool CircleArc::is_full_circle() const noexcept {
  return sweep() >= kTwoPi * (1.0 - 1e-12);
}

Point2 CircleArc::point_at(double s) const noexcept {
  return center_ + radius_ * unit_from_angle(angle_at(s));
}

Vec2 CircleArc::tangent_at(double s) const noexcept {
  return sigma() * perp(unit_from_angle(angle_at(s)));
}

Vec2 CircleArc::normal_at(double s) const {
  const double len = length();
  const double slack = 1e-12 * std::max(1.0, len);
  if (!(s >= -slack && s <= len + slack)) {
    std::ostringstream os;
    os << "CircleArc::normal_at: s=" << s << " outside [0, " << len << "]";
    throw std::out_of_range(os.str());
  }
  return -unit_from_angle(angle_at(s));
}

double CircleArc::param_of_angle(double theta, double tol) const noexcept {
  const double u = wrap_positive(sigma() * (theta - angle_start_));
  if (is_full_circle()) return u * radius_;
  if (u <= sweep()) return u * radius_;
  if (u <= sweep() + tol) return length();
  if (u >= kTwoPi - tol) return 0.0;
  return -1.0;
}

CircleArc CircleArc::reversed() const {
  const Orientation o = orientation_ == Orientation::ccw ? Orientation::cw : Orientation::ccw;
  return CircleArc(center_, radius_, angle_end_, angle_start_, o);
}

CircleArc CircleArc::translated(const Vec2& v) const {
  return CircleArc(center_ + v, radius_, angle_start_, angle_end_, orientation_);
}

// ---------------------------------------------------------------------------
// Piece helpers

double length(const PieceGeometry& g) {
  return std::visit(overloaded{[](const Segment& s) { return distance(s.start, s.end); },
                               [](const CircleArc& a) { return a.length(); }},
                    g);
}

Point2 point_at(const PieceGeometry& g, double s) {
  return std::visit(overloaded{[&](const Segment& seg) {
                                 const double len = distance(seg.start, seg.end);
                                 if (len == 0.0) return seg.start;
                                 return seg.start + (s / len) * (seg.end - seg.start);
                               },
                               [&](const CircleArc& a) { return a.point_at(s); }},
                    g);
}

Vec2 tangent_at(const PieceGeometry& g, double s) {
  return std::visit(
      overloaded{[](const Segment& seg) { return normalized(seg.end - seg.start); },
                 [&](const CircleArc& a) { return a.tangent_at(s); }},
      g);
}

Point2 start_point(const PieceGeometry& g) { return point_at(g, 0.0); }
Point2 end_point(const PieceGeometry& g) {
  if (const auto* seg = std::get_if<Segment>(&g)) return seg->end;
  return point_at(g, length(g));
}

PieceProjection project(const PieceGeometry& g, const Point2& p) {
  return std::visit(
      overloaded{
          [&](const Segment& seg) {
            const Vec2 d = seg.end - seg.start;
            const double len2 = dot(d, d);
            double lambda = len2 > 0.0 ? dot(p - seg.start, d) / len2 : 0.0;
            lambda = std::clamp(lambda, 0.0, 1.0);
            const Point2 foot = seg.start + lambda * d;
            return PieceProjection{lambda * std::sqrt(len2), distance(p, foot), foot};
          },
          [&](const CircleArc& a) {
            const Vec2 rel = p - a.center();
            const double r = norm(rel);
            if (r > 0.0) {
              const double s = a.param_of_angle(angle_of(rel));
              if (s >= 0.0) {
                return PieceProjection{s, std::abs(r - a.radius()), a.point_at(s)};
              }
            }
            const Point2 ps = a.start_point();
            const Point2 pe = a.end_point();
            const double ds = distance(p, ps);
            const double de = distance(p, pe);
            if (ds <= de) return PieceProjection{0.0, ds, ps};
            return PieceProjection{a.length(), de, pe};
          },
      },
      g);
}

std::vector<Point2> intersect_circle(const Point2& center, double radius, const PieceGeometry& g,
                                     double tol) {
  std::vector<Point2> out;
  if (const auto* seg = std::get_if<Segment>(&g)) {
    const Vec2 d = seg->end - seg->start;
    const Vec2 f = seg->start - center;
    const double a = dot(d, d);
    if (a == 0.0) return out;
    const double b = dot(f, d);
    const double c = dot(f, f) - radius * radius;
    double disc = b * b - a * c;
    const double slack = 2.0 * tol * radius * a;
    if (disc < -slack) return out;
    disc = std::max(disc, 0.0);
    const double sq = std::sqrt(disc);
    const double len = std::sqrt(a);
    for (const double lambda : {(-b - sq) / a, (-b + sq) / a}) {
      if (lambda >= -tol / len && lambda <= 1.0 + tol / len) {
        out.push_back(seg->start + lambda * d);
      }
    }
    return out;
  }
  const auto& arc = std::get<CircleArc>(g);
  const Vec2 dc = arc.center() - center;
  const double d = norm(dc);
  const double r1 = radius;
  const double r2 = arc.radius();
  if (d <= tol) return out;  // concentric: no isolated intersections
  if (d > r1 + r2 + tol || d < std::abs(r1 - r2) - tol) return out;
  const double a = (d * d + r1 * r1 - r2 * r2) / (2.0 * d);
  const double h = std::sqrt(std::max(r1 * r1 - a * a, 0.0));
  const Vec2 ex = dc / d;
  const Point2 base = center + a * ex;
  for (const double sgn : {-1.0, 1.0}) {
    const Point2 q = base + (sgn * h) * perp(ex);
    const double s = arc.param_of_angle(angle_of(q - arc.center()), tol / r2);
    if (s >= 0.0) out.push_back(q);
  }
  return out;
}

// ---------------------------------------------------------------------------
// BoundaryArc

BoundaryArc BoundaryArc::segment(Point2 a, Point2 b, std::string tag) {
  return BoundaryArc{Segment{a, b}, 0.0, std::move(tag)};
}

BoundaryArc BoundaryArc::arc(const CircleArc& arc, std::string tag) {
  return BoundaryArc{arc, arc.sigma() / arc.radius(), std::move(tag)};
}

// ---------------------------------------------------------------------------
// Domain

Domain::Domain(std::vector<BoundaryArc> boundary)
    : Domain(std::vector<std::vector<BoundaryArc>>{std::move(boundary)}) {}

Domain::Domain(std::vector<std::vector<BoundaryArc>> loops) {
  if (loops.empty()) throw ParameterError("Domain: at least one boundary loop required");
  loop_offsets_.push_back(0);
  for (auto& loop : loops) {
    if (loop.empty()) throw ParameterError("Domain: empty boundary loop");
    for (auto& piece : loop) pieces_.push_back(std::move(piece));
    loop_offsets_.push_back(pieces_.size());
  }

  const double inf = std::numeric_limits<double>::infinity();
  box_ = Box{{inf, inf}, {-inf, -inf}};
  for (const auto& piece : pieces_) {
    extend(box_, start_point(piece.geometry));
    extend(box_, end_point(piece.geometry));
    if (const auto* arc = std::get_if<CircleArc>(&piece.geometry)) {
      for (int k = 0; k < 4; ++k) {
        const double theta = 0.5 * kPi * k;
        if (arc->param_of_angle(theta) >= 0.0) {
          extend(box_, arc->center() + arc->radius() * unit_from_angle(theta));
        }
      }
    }
  }
  validate();
  build_vertices();
}

std::span<const BoundaryArc> Domain::loop(std::size_t k) const {
  if (k >= loop_count()) throw std::out_of_range("Domain::loop: index out of range");
  return std::span<const BoundaryArc>(pieces_).subspan(loop_offsets_[k],
                                                       loop_offsets_[k + 1] - loop_offsets_[k]);
}

std::size_t Domain::loop_of(std::size_t piece) const {
  if (piece >= pieces_.size()) throw std::out_of_range("Domain: piece id out of range");
  const auto it = std::upper_bound(loop_offsets_.begin(), loop_offsets_.end(), piece);
  return static_cast<std::size_t>(it - loop_offsets_.begin()) - 1;
}

std::size_t Domain::next_piece(std::size_t piece) const {
  const std::size_t k = loop_of(piece);
  return piece + 1 < loop_offsets_[k + 1] ? piece + 1 : loop_offsets_[k];
}

std::size_t Domain::previous_piece(std::size_t piece) const {
  const std::size_t k = loop_of(piece);
  return piece > loop_offsets_[k] ? piece - 1 : loop_offsets_[k + 1] - 1;
}

void Domain::validate() const {
  const double tol = tolerance();
  if (!(tol > 0.0) || !std::isfinite(tol)) throw ParameterError("Domain: degenerate boundary");

  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& piece = pieces_[i];
    if (!(length(piece.geometry) > tol)) {
      throw ParameterError("Domain: piece " + std::to_string(i) + " has zero length");
    }
    double expected = 0.0;
    if (const auto* arc = std::get_if<CircleArc>(&piece.geometry)) {
      expected = arc->sigma() / arc->radius();
    }
    if (std::abs(piece.exterior_curvature - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw ParameterError("Domain: exterior curvature of piece " + std::to_string(i) +
                           " inconsistent with its geometry and orientation");
    }
    const Point2 end = end_point(piece.geometry);
    const Point2 next = start_point(pieces_[next_piece(i)].geometry);
    if (distance(end, next) > tol) {
      throw ParameterError("Domain: boundary chain not closed after piece " + std::to_string(i));
    }
  }

  for (std::size_t k = 0; k < loop_count(); ++k) {
    double area = 0.0;
    for (const auto& piece : loop(k)) area += chord_area_term(piece.geometry);
    if (k == 0 && !(area > 0.0)) throw ParameterError("Domain: outer loop must be counter-clockwise");
    if (k > 0 && !(area < 0.0)) throw ParameterError("Domain: holes must be clockwise");
  }

  // Non-adjacent pieces may not meet; adjacent pieces only at their shared vertex.
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    for (std::size_t j = i + 1; j < pieces_.size(); ++j) {
      const auto hits = intersect_pieces(pieces_[i].geometry, pieces_[j].geometry, tol);
      for (const Point2& q : hits) {
        bool allowed = false;
        if (next_piece(i) == j) {
          allowed = allowed || distance(q, end_point(pieces_[i].geometry)) <= 1e3 * tol;
        }
        if (next_piece(j) == i) {
          allowed = allowed || distance(q, end_point(pieces_[j].geometry)) <= 1e3 * tol;
        }
        if (!allowed) {
          throw ParameterError("Domain: pieces " + std::to_string(i) + " and " +
                               std::to_string(j) + " intersect");
        }
      }
    }
  }
}

void Domain::build_vertices() {
  vertices_.clear();
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const std::size_t j = next_piece(i);
    Vertex v;
    v.incoming = i;
    v.outgoing = j;
    v.point = end_point(pieces_[i].geometry);
    const Vec2 tin = tangent_at(pieces_[i].geometry, length(pieces_[i].geometry));
    const Vec2 tout = tangent_at(pieces_[j].geometry, 0.0);
    const double turn = cross(tin, tout);
    if (std::abs(turn) <= 1e-9 && dot(tin, tout) > 0.0) {
      v.kind = CornerKind::smooth;
    } else if (turn < 0.0) {
      v.kind = CornerKind::reflex;
    } else {
      v.kind = CornerKind::convex;
    }
    vertices_.push_back(v);
  }
}

double Domain::winding_number(const Point2& p) const {
  // Oblique direction keeps the ray away from axis-aligned features.
  const Vec2 dir = unit_from_angle(0.3711138823);
  int total = 0;
  for (const auto& piece : pieces_) total += ray_crossings(piece.geometry, p, dir);
  return static_cast<double>(total);
}

bool Domain::contains(const Point2& p) const {
  if (!is_finite(p)) return false;
  if (p.x < box_.min.x || p.x > box_.max.x || p.y < box_.min.y || p.y > box_.max.y) return false;
  if (nearest_boundary(p).distance <= tolerance()) return false;
  return winding_number(p) != 0.0;
}

BoundaryPoint Domain::nearest_boundary(const Point2& p) const {
  BoundaryPoint best;
  best.distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const PieceProjection proj = project(pieces_[i].geometry, p);
    if (proj.distance < best.distance) {
      best = BoundaryPoint{i, proj.s, proj.distance, proj.point};
    }
  }
  return best;
}

Domain Domain::translated(const Vec2& v) const {
  std::vector<std::vector<BoundaryArc>> loops;
  for (std::size_t k = 0; k < loop_count(); ++k) {
    std::vector<BoundaryArc> out;
    for (const auto& piece : loop(k)) {
      BoundaryArc moved = piece;
      std::visit(overloaded{[&](Segment& s) {
                              s.start += v;
                              s.end += v;
                            },
                            [&](CircleArc& a) { a = a.translated(v); }},
                 moved.geometry);
      out.push_back(std::move(moved));
    }
    loops.push_back(std::move(out));
  }
  return Domain(std::move(loops));
}

// ---------------------------------------------------------------------------
// Free functions

double exterior_curvature_at(const Domain& dom, const Point2& b) {
  const BoundaryPoint near = dom.nearest_boundary(b);
  const double tol = dom.tolerance();
  if (near.distance > tol) {
    throw DomainError("exterior_curvature_at: point is not on the boundary");
  }
  for (const Vertex& v : dom.vertices()) {
    if (distance(v.point, b) > tol) continue;
    switch (v.kind) {
      case CornerKind::convex:
        return std::numeric_limits<double>::infinity();
      case CornerKind::reflex:
        return -std::numeric_limits<double>::infinity();
      case CornerKind::smooth:
        return std::min(dom.pieces()[v.incoming].exterior_curvature,
                        dom.pieces()[v.outgoing].exterior_curvature);
    }
  }
  return dom.pieces()[near.piece].exterior_curvature;
}

double region_area(const Domain& dom) {
  double area = 0.0;
  for (const auto& piece : dom.pieces()) area += chord_area_term(piece.geometry);
  return area;
}

CircleArc arc_from_point_normal(const Point2& p, const Vec2& n, double H, const Domain& dom) {
  if (!(H > 0.0) || !std::isfinite(H)) throw ParameterError("arc_from_point_normal: H must be > 0");
  if (std::abs(norm(n) - 1.0) > 1e-9) {
    throw ParameterError("arc_from_point_normal: normal must have unit length");
  }
  if (!dom.contains(p)) throw DomainError("arc_from_point_normal: point not interior to domain");

  const double radius = 0.5 / H;
  const Point2 center = p + radius * n;
  const double theta_p = angle_of(p - center);

  double ahead = kTwoPi;   // ccw angular distance to the first boundary hit
  double behind = kTwoPi;  // cw angular distance
  bool hit = false;
  for (const auto& piece : dom.pieces()) {
    for (const Point2& q : intersect_circle(center, radius, piece.geometry, dom.tolerance())) {
      const double phi = angle_of(q - center);
      const double fwd = wrap_positive(phi - theta_p);
      const double back = wrap_positive(theta_p - phi);
      if (fwd > 0.0) ahead = std::min(ahead, fwd);
      if (back > 0.0) behind = std::min(behind, back);
      hit = true;
    }
  }
  if (!hit) return CircleArc::circle(center, radius, Orientation::cw, theta_p);
  return CircleArc(center, radius, theta_p + ahead, theta_p - behind, Orientation::cw);
}

// ---------------------------------------------------------------------------
// Curve

Curve::Curve(std::vector<Point2> samples, double max_spacing) : samples_(std::move(samples)) {
  if (samples_.empty()) throw ParameterError("Curve: at least one sample required");
  arclength_.reserve(samples_.size());
  arclength_.push_back(0.0);
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    if (!is_finite(samples_[k])) throw ParameterError("Curve: non-finite sample");
    if (k == 0) continue;
    const double ds = distance(samples_[k - 1], samples_[k]);
    if (ds > max_spacing * (1.0 + 1e-12)) {
      throw ParameterError("Curve: sample spacing exceeds the configured maximum");
    }
    arclength_.push_back(arclength_.back() + ds);
  }
}

Curve Curve::from_piece(const PieceGeometry& g, double max_spacing) {
  if (!(max_spacing > 0.0)) throw ParameterError("Curve: max spacing must be positive");
  const double len = cmclab::length(g);
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(len / max_spacing)));
  std::vector<Point2> pts;
  pts.reserve(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    pts.push_back(point_at(g, len * static_cast<double>(k) / static_cast<double>(n)));
  }
  return Curve(std::move(pts), max_spacing);
}

Curve Curve::reversed() const {
  std::vector<Point2> pts(samples_.rbegin(), samples_.rend());
  return Curve(std::move(pts));
}

Curve Curve::concatenated(const Curve& tail) const {
  const Point2 a = samples_.back();
  const Point2 b = tail.samples_.front();
  if (distance(a, b) > 1e-9 * (1.0 + norm(a))) {
    throw ParameterError("Curve::concatenated: curves do not share an endpoint");
  }
  std::vector<Point2> pts = samples_;
  pts.insert(pts.end(), tail.samples_.begin() + 1, tail.samples_.end());
  return Curve(std::move(pts));
}

double curve_length(const Curve& c) { return c.length(); }

std::vector<Curve> boundary_curves(const Domain& dom, double max_spacing) {
  std::vector<Curve> out;
  for (std::size_t k = 0; k < dom.loop_count(); ++k) {
    std::vector<Point2> pts;
    for (const auto& piece : dom.loop(k)) {
      const Curve part = Curve::from_piece(piece.geometry, max_spacing);
      const auto& s = part.samples();
      pts.insert(pts.end(), pts.empty() ? s.begin() : s.begin() + 1, s.end());
    }
    // Snap the closing sample onto the first one.
    pts.back() = pts.front();
    out.emplace_back(std::move(pts));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Factories

Domain make_disk(Point2 center, double radius, const std::string& tag) {
  return Domain({BoundaryArc::arc(CircleArc::circle(center, radius, Orientation::ccw), tag)});
}

Domain make_annulus(Point2 center, double inner, double outer, const std::string& inner_tag,
                    const std::string& outer_tag) {
  if (!(inner > 0.0) || !(outer > inner)) throw ParameterError("make_annulus: need 0 < inner < outer");
  std::vector<std::vector<BoundaryArc>> loops;
  loops.push_back({BoundaryArc::arc(CircleArc::circle(center, outer, Orientation::ccw), outer_tag)});
  loops.push_back({BoundaryArc::arc(CircleArc::circle(center, inner, Orientation::cw), inner_tag)});
  return Domain(std::move(loops));
}

Domain make_polygon(const std::vector<Point2>& vertices, const std::vector<std::string>& tags) {
  if (vertices.size() < 3 || tags.size() != vertices.size()) {
    throw ParameterError("make_polygon: need >= 3 vertices and one tag per edge");
  }
  std::vector<BoundaryArc> pieces;
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    pieces.push_back(BoundaryArc::segment(vertices[k], vertices[(k + 1) % vertices.size()], tags[k]));
  }
  return Domain(std::move(pieces));
}

Domain make_lens(Point2 left, Point2 right, double r_top, double r_bottom,
                 const std::string& top_tag, const std::string& bottom_tag) {
  const double half = 0.5 * distance(left, right);
  if (!(half > 0.0) || !(r_top >= half) || !(r_bottom >= half)) {
    throw ParameterError("make_lens: radii must be at least half the chord");
  }
  const Point2 mid = 0.5 * (left + right);
  const Vec2 e = normalized(right - left);
  const Vec2 up = perp(e);

  auto minor_arc = [&](double r, const Point2& center, const Point2& from, const Point2& to) {
    const double a0 = angle_of(from - center);
    double a1 = angle_of(to - center);
    while (a1 <= a0) a1 += kTwoPi;
    return CircleArc(center, r, a0, a1, Orientation::ccw);
  };

  const Point2 c_top = mid - std::sqrt(r_top * r_top - half * half) * up;
  const Point2 c_bottom = mid + std::sqrt(r_bottom * r_bottom - half * half) * up;
  std::vector<BoundaryArc> pieces;
  pieces.push_back(BoundaryArc::arc(minor_arc(r_top, c_top, right, left), top_tag));
  pieces.push_back(BoundaryArc::arc(minor_arc(r_bottom, c_bottom, left, right), bottom_tag));
  return Domain(std::move(pieces));
}

}  // namespace cmclab
