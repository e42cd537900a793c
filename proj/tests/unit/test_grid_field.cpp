#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cmclab/barrier.hpp"
#include "cmclab/errors.hpp"
#include "cmclab/field.hpp"
#include "cmclab/grid.hpp"

using namespace cmclab;

TEST_CASE("grid classification") {
  const Domain d = make_disk({}, 0.5);
  const GridPtr g = Grid::from_domain(d, 1.0 / 32);
  std::size_t inside = 0;
  for (std::size_t idx = 0; idx < g->size(); ++idx) {
    const bool in = d.contains(g->position(idx));
    CHECK((g->kind(idx) != NodeKind::exterior) == in);
    if (!in) continue;
    ++inside;
    // Interior nodes have all eight neighbours inside.
    bool all = true;
    const int i = g->i_of(idx), j = g->j_of(idx);
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) all = all && g->active(i + di, j + dj);
    CHECK((g->kind(idx) == NodeKind::interior) == all);
  }
  CHECK(g->count(NodeKind::interior) + g->count(NodeKind::boundary) == inside);
  // Node count tracks the area.
  CHECK(inside * g->h() * g->h() == doctest::Approx(kPi * 0.25).epsilon(0.05));
  CHECK_THROWS_AS(Grid::from_domain(d, 0.0), ParameterError);
}

TEST_CASE("scalar field rejects non-finite interior values") {
  const GridPtr g = Grid::from_domain(make_disk({}, 0.5), 1.0 / 16);
  std::vector<double> v(g->size(), 0.0);
  CHECK_NOTHROW(ScalarField(g, v));
  for (std::size_t idx = 0; idx < g->size(); ++idx) {
    if (g->kind(idx) == NodeKind::interior) {
      v[idx] = std::nan("");
      break;
    }
  }
  CHECK_THROWS_AS(ScalarField(g, v), ParameterError);
  CHECK_THROWS_AS(ScalarField(g, std::vector<double>(3, 0.0)), ParameterError);
}

TEST_CASE("bilinear interpolation is exact for bilinear functions") {
  const GridPtr g = Grid::from_domain(make_disk({}, 0.5), 1.0 / 32);
  auto f = [](const Point2& p) { return 1.0 + 2.0 * p.x - 3.0 * p.y + 0.5 * p.x * p.y; };
  const ScalarField s = ScalarField::sample(g, f);
  for (Point2 p : {Point2{0.1, 0.2}, Point2{-0.23, 0.011}, Point2{0.0, 0.0}}) {
    const auto v = interpolate(s, p);
    REQUIRE(v);
    CHECK(*v == doctest::Approx(f(p)));
  }
  CHECK_FALSE(interpolate(s, {0.7, 0.0}));
  CHECK_FALSE(interpolate(s, {10.0, 0.0}));
}

TEST_CASE("gradient is exact for quadratics") {
  const GridPtr g = Grid::from_domain(make_disk({}, 0.5), 1.0 / 32);
  auto f = [](const Point2& p) { return p.x * p.x - 2.0 * p.x * p.y + 0.3 * p.y; };
  const VectorField grad = gradient(ScalarField::sample(g, f));
  std::size_t checked = 0;
  for (std::size_t idx = 0; idx < g->size(); ++idx) {
    if (!grad.is_valid(idx)) continue;
    const Point2 p = g->position(idx);
    CHECK(grad.values[idx].x == doctest::Approx(2 * p.x - 2 * p.y).scale(1.0));
    CHECK(grad.values[idx].y == doctest::Approx(-2 * p.x + 0.3).scale(1.0));
    ++checked;
  }
  CHECK(checked == g->count(NodeKind::interior) + g->count(NodeKind::boundary) - grad.flagged.size());
}

TEST_CASE("normals and flux of a tilted plane") {
  const GridPtr g = Grid::from_domain(make_disk({}, 0.5), 1.0 / 16);
  const ScalarField s = ScalarField::sample(g, [](const Point2& p) { return 3.0 * p.x + 4.0 * p.y; });
  const NormalMap n = normal_map(s);
  const FluxForm w = flux_form(s);
  const RealField W = slope_w(s);
  for (std::size_t idx = 0; idx < g->size(); ++idx) {
    if (!n.is_valid(idx)) continue;
    CHECK(W.values[idx] == doctest::Approx(std::sqrt(26.0)));
    const Vec3 v = n.values[idx];
    CHECK(v.x * v.x + v.y * v.y + v.z * v.z == doctest::Approx(1.0));
    CHECK(v.z > 0.0);
    CHECK(w.values[idx].x == doctest::Approx(3.0 / std::sqrt(26.0)));
  }
  // Flux of the constant form through a segment: (p/W) dy - (q/W) dx.
  const Curve c = Curve::from_piece(Segment{{-0.2, -0.1}, {0.2, 0.1}}, 0.01);
  CHECK(line_integral(w, c) == doctest::Approx((3.0 * 0.2 - 4.0 * 0.4) / std::sqrt(26.0)));
}

TEST_CASE("line integral leaving the mask reports the offending samples") {
  const GridPtr g = Grid::from_domain(make_disk({}, 0.5), 1.0 / 16);
  const FluxForm w = flux_form(ScalarField::sample(g, [](const Point2&) { return 0.0; }));
  const Curve c = Curve::from_piece(Segment{{0.0, 0.0}, {0.9, 0.0}}, 0.05);
  try {
    line_integral(w, c);
    FAIL("expected PartialCoverageError");
  } catch (const PartialCoverageError& e) {
    CHECK_FALSE(e.offending().empty());
    CHECK(e.offending().front() > 0);
  }
}

TEST_CASE("Stokes defect of the hemisphere decreases under refinement") {
  const HemisphereSolution hs(1.0);
  const Domain sub = make_disk({0.05, 0.0}, 0.3);
  double prev = 1.0;
  for (double h : {1.0 / 32, 1.0 / 64, 1.0 / 128}) {
    const GridPtr g = Grid::from_domain(make_disk({}, 0.5), h);
    const FluxForm w = flux_form(ScalarField::sample(g, [&](const Point2& p) { return hemisphere_eval(hs, p); }));
    const double d = stokes_defect(w, sub, hs.H());
    CHECK(d < prev);
    prev = d;
  }
  CHECK(prev < 1e-4);
}

TEST_CASE("flux norm is below one") {
  const UnduloidBarrier b(0.5, 0.2);
  const GridPtr g = Grid::from_domain(make_annulus({}, b.r1() + 0.01, b.r2() - 0.01), 1.0 / 64);
  const FluxForm w = flux_form(ScalarField::sample(g, [&](const Point2& p) { return eval(b, norm(p)); }));
  for (std::size_t idx = 0; idx < g->size(); ++idx) {
    if (w.is_valid(idx)) CHECK(norm(w.values[idx]) <= 1.0);
  }
}

TEST_CASE("residual of sampled exact solutions is second order") {
  const HemisphereSolution hs(1.0);
  double prev = 0.0;
  for (double h : {1.0 / 32, 1.0 / 64}) {
    const GridPtr g = Grid::from_domain(make_disk({}, 0.5), h);
    const RealField r = residual_cmc(ScalarField::sample(g, [&](const Point2& p) { return hemisphere_eval(hs, p); }), 1.0);
    double m = 0.0;
    for (std::size_t idx = 0; idx < g->size(); ++idx) {
      if (r.is_valid(idx)) m = std::max(m, std::abs(r.values[idx]));
    }
    if (prev > 0.0) CHECK(prev / m > 3.0);
    prev = m;
  }
}

TEST_CASE("field CSV round trip") {
  const GridPtr g = Grid::from_domain(make_lens({-0.4, 0}, {0.4, 0}, 0.5, 0.6), 1.0 / 32);
  const ScalarField s = ScalarField::sample(g, [](const Point2& p) { return std::sin(3 * p.x) + p.y / 3.0; });
  std::stringstream ss;
  write_field_csv(ss, s);
  const std::string text = ss.str();
  CHECK(text.rfind("# grid origin_x=", 0) == 0);
  CHECK(text.find("i,j,x,y,u,p,q,W,N1,N2,N3\n") != std::string::npos);
  const FieldCsv back = read_field_csv(ss);
  CHECK(back.field.grid().same_layout(*g));
  for (std::size_t idx = 0; idx < g->size(); ++idx) {
    if (g->kind(idx) != NodeKind::exterior) CHECK(back.field[idx] == s[idx]);
  }
  std::stringstream again;
  write_field_csv(again, back.field);
  CHECK(again.str() == text);

  std::stringstream bad("i,j\n1,2\n");
  CHECK_THROWS_AS(read_field_csv(bad), ConfigError);
}
