#pragma once

// Planar domains bounded by chains of circle arcs and segments.

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "cmclab/vec.hpp"

namespace cmclab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

enum class Orientation { ccw, cw };

/// Arc of a circle, parametrized by arclength s in [0, length()]:
///   point(s) = center + radius * (cos a(s), sin a(s)),
///   a(s) = angle_start + sigma * s / radius, sigma = +1 (ccw) or -1 (cw).
/// A full circle has |angle_end - angle_start| == 2 pi.
class CircleArc {
 public:
  CircleArc(Point2 center, double radius, double angle_start, double angle_end,
            Orientation orientation);

  static CircleArc circle(Point2 center, double radius,
                          Orientation orientation = Orientation::ccw,
                          double angle_start = 0.0);

  const Point2& center() const noexcept { return center_; }
  double radius() const noexcept { return radius_; }
  double angle_start() const noexcept { return angle_start_; }
  double angle_end() const noexcept { return angle_end_; }
  Orientation orientation() const noexcept { return orientation_; }

  double sweep() const noexcept { return std::abs(angle_end_ - angle_start_); }
  double length() const noexcept { return radius_ * sweep(); }
  double curvature() const noexcept { return 1.0 / radius_; }
  bool is_full_circle() const noexcept;
  double sigma() const noexcept { return orientation_ == Orientation::ccw ? 1.0 : -1.0; }

  double angle_at(double s) const noexcept { return angle_start_ + sigma() * s / radius_; }
  Point2 point_at(double s) const noexcept;
  Point2 start_point() const noexcept { return point_at(0.0); }
  Point2 end_point() const noexcept { return point_at(length()); }
  /// Unit tangent in the direction of increasing s.
  Vec2 tangent_at(double s) const noexcept;
  /// Unit normal pointing from the arc toward the center (curvature direction).
  /// Throws std::out_of_range when s is outside [0, length()].
  Vec2 normal_at(double s) const;

  /// Arclength parameter of the polar angle `theta`, if it lies on the arc
  /// (with angular slack `tol`); negative when it does not.
  double param_of_angle(double theta, double tol = 0.0) const noexcept;

  CircleArc reversed() const;
  CircleArc translated(const Vec2& v) const;

 private:
  Point2 center_;
  double radius_;
  double angle_start_;
  double angle_end_;
  Orientation orientation_;
};

struct Segment {
  Point2 start;
  Point2 end;
};

using PieceGeometry = std::variant<Segment, CircleArc>;

double length(const PieceGeometry& g);
Point2 point_at(const PieceGeometry& g, double s);
Vec2 tangent_at(const PieceGeometry& g, double s);
Point2 start_point(const PieceGeometry& g);
Point2 end_point(const PieceGeometry& g);

struct PieceProjection {
  double s = 0.0;         ///< arclength of the foot point
  double distance = 0.0;  ///< Euclidean distance to the piece
  Point2 point;           ///< foot point
};

PieceProjection project(const PieceGeometry& g, const Point2& p);

/// Intersection points of the full circle (center, radius) with a piece.
std::vector<Point2> intersect_circle(const Point2& center, double radius,
                                     const PieceGeometry& g, double tol);

/// One piece of a domain boundary. The exterior curvature is signed with
/// respect to the inward normal: a convex circle arc of radius R has +1/R,
/// an arc bulging into the domain has -1/R, segments have 0.
struct BoundaryArc {
  PieceGeometry geometry;
  double exterior_curvature = 0.0;
  std::string data_tag;

  static BoundaryArc segment(Point2 a, Point2 b, std::string tag);
  /// Curvature sign follows from the orientation: the interior lies on the
  /// left, so ccw arcs are convex and cw arcs are concave.
  static BoundaryArc arc(const CircleArc& arc, std::string tag);
};

struct Box {
  Point2 min;
  Point2 max;
  double width() const noexcept { return max.x - min.x; }
  double height() const noexcept { return max.y - min.y; }
  double diagonal() const noexcept { return std::hypot(width(), height()); }
};

enum class CornerKind { smooth, convex, reflex };

/// Junction between two consecutive boundary pieces.
struct Vertex {
  std::size_t incoming = 0;  ///< piece ending here
  std::size_t outgoing = 0;  ///< piece starting here
  Point2 point;
  CornerKind kind = CornerKind::smooth;
};

struct BoundaryPoint {
  std::size_t piece = 0;
  double s = 0.0;
  double distance = 0.0;
  Point2 point;
};

/// Region bounded by one outer loop (positively oriented) and optional holes
/// (negatively oriented). Every loop is a closed, non-self-intersecting chain;
/// the interior is always on the left of the boundary.
class Domain {
 public:
  explicit Domain(std::vector<BoundaryArc> boundary);
  explicit Domain(std::vector<std::vector<BoundaryArc>> loops);

  /// All pieces, loop after loop. Piece ids index into this span.
  std::span<const BoundaryArc> pieces() const noexcept { return pieces_; }
  std::size_t loop_count() const noexcept { return loop_offsets_.size() - 1; }
  std::span<const BoundaryArc> loop(std::size_t k) const;
  std::size_t loop_of(std::size_t piece) const;
  std::size_t next_piece(std::size_t piece) const;
  std::size_t previous_piece(std::size_t piece) const;

  const std::vector<Vertex>& vertices() const noexcept { return vertices_; }
  const Box& bounding_box() const noexcept { return box_; }
  double diameter() const noexcept { return box_.diagonal(); }
  /// Boundary matching tolerance: 1e-9 times the bounding-box diagonal.
  double tolerance() const noexcept { return 1e-9 * box_.diagonal(); }

  /// Winding number of the boundary around p (p off the boundary).
  double winding_number(const Point2& p) const;
  /// True for points strictly inside, farther than tolerance() from the boundary.
  bool contains(const Point2& p) const;
  BoundaryPoint nearest_boundary(const Point2& p) const;

  Domain translated(const Vec2& v) const;

 private:
  void validate() const;
  void build_vertices();

  std::vector<BoundaryArc> pieces_;
  std::vector<std::size_t> loop_offsets_;
  std::vector<Vertex> vertices_;
  Box box_;
};

/// Exterior curvature of the boundary at b: the stored piece curvature on the
/// interior of a piece, +inf at convex corners, -inf at reflex corners.
/// Throws DomainError when b is not on the boundary.
double exterior_curvature_at(const Domain& dom, const Point2& b);

/// Exact enclosed area (chord shoelace plus circular-segment terms).
double region_area(const Domain& dom);

/// Maximal arc of the circle through p with curvature vector 2H n at p that
/// stays inside `dom`. Oriented so that (normal, tangent) is a direct frame.
CircleArc arc_from_point_normal(const Point2& p, const Vec2& n, double H, const Domain& dom);

/// Sampled planar curve with its cumulative arclength table.
class Curve {
 public:
  explicit Curve(std::vector<Point2> samples,
                 double max_spacing = std::numeric_limits<double>::infinity());

  static Curve from_piece(const PieceGeometry& g, double max_spacing);
  static Curve from_arc(const CircleArc& arc, double max_spacing) {
    return from_piece(PieceGeometry{arc}, max_spacing);
  }

  const std::vector<Point2>& samples() const noexcept { return samples_; }
  const std::vector<double>& arclength_table() const noexcept { return arclength_; }
  double length() const noexcept { return arclength_.back(); }
  std::size_t size() const noexcept { return samples_.size(); }

  Curve reversed() const;
  /// Joins two curves; the first sample of `tail` must coincide with our last.
  Curve concatenated(const Curve& tail) const;

 private:
  std::vector<Point2> samples_;
  std::vector<double> arclength_;
};

double curve_length(const Curve& c);

/// One closed curve per boundary loop, consistently oriented.
std::vector<Curve> boundary_curves(const Domain& dom, double max_spacing);

// Common domains.
Domain make_disk(Point2 center, double radius, const std::string& tag = "boundary");
Domain make_annulus(Point2 center, double inner, double outer,
                    const std::string& inner_tag = "inner",
                    const std::string& outer_tag = "outer");
/// Counter-clockwise polygon; one tag per edge (edge k joins vertex k and k+1).
Domain make_polygon(const std::vector<Point2>& vertices, const std::vector<std::string>& tags);
/// Convex lens over the chord left -> right: a top arc of radius r_top and a
/// bottom arc of radius r_bottom, both bulging away from the chord.
Domain make_lens(Point2 left, Point2 right, double r_top, double r_bottom,
                 const std::string& top_tag = "top", const std::string& bottom_tag = "bottom");

}  // namespace cmclab
