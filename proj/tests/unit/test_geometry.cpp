#include <doctest.h>

#include <cmath>

#include "cmclab/errors.hpp"
#include "cmclab/geometry.hpp"

using namespace cmclab;

TEST_CASE("circle arc parametrization") {
  const CircleArc a({1.0, 2.0}, 2.0, 0.0, kPi / 2, Orientation::ccw);
  CHECK(a.length() == doctest::Approx(kPi));
  CHECK(a.start_point().x == doctest::Approx(3.0));
  CHECK(a.end_point().y == doctest::Approx(4.0));
  // Normal points to the center, (normal, tangent) is direct for cw arcs.
  const Vec2 n = a.normal_at(0.3);
  const Point2 p = a.point_at(0.3);
  CHECK(dot(n, normalized(a.center() - p)) == doctest::Approx(1.0));
  const CircleArc b = a.reversed();
  CHECK(b.start_point().x == doctest::Approx(a.end_point().x));
  CHECK(b.orientation() == Orientation::cw);
  CHECK_THROWS_AS(a.normal_at(a.length() + 1.0), std::out_of_range);
  CHECK_THROWS_AS(CircleArc({}, -1.0, 0.0, 1.0, Orientation::ccw), ParameterError);
  CHECK_THROWS_AS(CircleArc({}, 1.0, 0.0, 7.0, Orientation::ccw), ParameterError);
}

TEST_CASE("cw arc frame (nu, T) is direct") {
  const CircleArc a({0.0, -1.0}, 1.0, 2.0, 1.0, Orientation::cw);
  for (double s : {0.0, 0.4, a.length()}) {
    CHECK(cross(a.normal_at(s), a.tangent_at(s)) == doctest::Approx(1.0));
  }
}

TEST_CASE("areas of standard domains") {
  CHECK(region_area(make_disk({0.3, -0.2}, 0.7)) == doctest::Approx(kPi * 0.49));
  CHECK(region_area(make_annulus({}, 0.5, 1.5)) == doctest::Approx(kPi * (2.25 - 0.25)));
  CHECK(region_area(make_polygon({{0, 0}, {2, 0}, {2, 1}, {0, 1}}, {"a", "b", "c", "d"})) == doctest::Approx(2.0));

  // Lens: two circular segments over a chord of half-length c.
  const double c = 0.4, r1 = 0.5, r2 = 1.0;
  auto segment = [c](double r) {
    const double theta = 2.0 * std::asin(c / r);
    return 0.5 * r * r * (theta - std::sin(theta));
  };
  CHECK(region_area(make_lens({-c, 0}, {c, 0}, r1, r2)) == doctest::Approx(segment(r1) + segment(r2)));
}

TEST_CASE("containment and nearest boundary") {
  const Domain d = make_annulus({}, 0.5, 1.0);
  CHECK(d.contains({0.75, 0.0}));
  CHECK_FALSE(d.contains({0.2, 0.0}));
  CHECK_FALSE(d.contains({1.2, 0.0}));
  CHECK_FALSE(d.contains({1.0, 0.0}));
  const BoundaryPoint bp = d.nearest_boundary({0.0, 0.6});
  CHECK(bp.distance == doctest::Approx(0.1));
  CHECK(d.pieces()[bp.piece].data_tag == "inner");
  CHECK(d.loop_count() == 2);
}

TEST_CASE("exterior curvature signs") {
  const Domain disk = make_disk({}, 0.5);
  CHECK(disk.pieces()[0].exterior_curvature == doctest::Approx(2.0));
  const Domain ann = make_annulus({}, 0.5, 1.0);
  CHECK(ann.pieces()[0].exterior_curvature * ann.pieces()[1].exterior_curvature < 0.0);
  const Domain lens = make_lens({-0.4, 0}, {0.4, 0}, 0.5, 0.5);
  CHECK(lens.vertices().size() == 2);
  for (const auto& v : lens.vertices()) CHECK(v.kind == CornerKind::convex);
  CHECK(std::isinf(exterior_curvature_at(lens, {0.4, 0.0})));
  CHECK_THROWS_AS(exterior_curvature_at(lens, {0.0, 0.0}), DomainError);
}

TEST_CASE("domain validation") {
  // Clockwise outer loop.
  CHECK_THROWS_AS(make_polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}}, {"a", "b", "c", "d"}), ParameterError);
  CHECK_THROWS_AS(make_lens({-1, 0}, {1, 0}, 0.5, 2.0), ParameterError);
  CHECK_THROWS_AS(Domain(std::vector<BoundaryArc>{}), ParameterError);
  // Open chain.
  CHECK_THROWS_AS(Domain(std::vector<BoundaryArc>{BoundaryArc::segment({0, 0}, {1, 0}, "a"),
                                                  BoundaryArc::segment({1, 0}, {0, 1}, "b")}),
                  ParameterError);
}

TEST_CASE("translation moves everything") {
  const Domain d = make_lens({-0.4, 0}, {0.4, 0}, 0.5, 0.7);
  const Domain t = d.translated({1.0, -2.0});
  CHECK(region_area(t) == doctest::Approx(region_area(d)));
  CHECK(t.bounding_box().min.x == doctest::Approx(d.bounding_box().min.x + 1.0));
  CHECK(t.contains({1.0, -2.0}));
}

TEST_CASE("arc through a point with prescribed normal") {
  const Domain d = make_disk({}, 2.0);
  const double H = 0.5;
  const CircleArc a = arc_from_point_normal({0.0, 0.0}, {0.0, 1.0}, H, d);
  CHECK(a.radius() == doctest::Approx(1.0));
  CHECK(a.center().y == doctest::Approx(1.0));
  CHECK(a.is_full_circle());
  // Maximal arc stops on the boundary.
  const Domain small = make_disk({}, 0.8);
  const CircleArc b = arc_from_point_normal({0.0, 0.0}, {0.0, 1.0}, H, small);
  CHECK(norm(b.start_point()) == doctest::Approx(0.8).epsilon(1e-6));
  CHECK(norm(b.end_point()) == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("curve sampling and boundary curves") {
  const Curve c = Curve::from_arc(CircleArc::circle({}, 1.0), 0.01);
  CHECK(c.length() == doctest::Approx(kTwoPi).epsilon(1e-4));
  for (std::size_t k = 1; k < c.size(); ++k) CHECK(distance(c.samples()[k], c.samples()[k - 1]) <= 0.01 + 1e-12);
  const auto loops = boundary_curves(make_annulus({}, 0.5, 1.0), 0.01);
  REQUIRE(loops.size() == 2);
  CHECK(curve_length(loops[0]) + curve_length(loops[1]) == doctest::Approx(kTwoPi * 1.5).epsilon(1e-4));
  CHECK_THROWS_AS(c.concatenated(Curve({{5.0, 5.0}, {6.0, 5.0}})), ParameterError);
}

TEST_CASE("projection onto pieces") {
  const PieceGeometry seg = Segment{{0, 0}, {2, 0}};
  const PieceProjection p = project(seg, {0.5, 1.0});
  CHECK(p.s == doctest::Approx(0.5));
  CHECK(p.distance == doctest::Approx(1.0));
  const PieceGeometry arc = CircleArc({}, 1.0, 0.0, kPi, Orientation::ccw);
  const PieceProjection q = project(arc, {0.0, 3.0});
  CHECK(q.s == doctest::Approx(kPi / 2));
  CHECK(q.distance == doctest::Approx(2.0));
  // Foot beyond the arc snaps to an endpoint.
  const PieceProjection r = project(arc, {0.5, -2.0});
  CHECK(r.s == doctest::Approx(0.0));
}
