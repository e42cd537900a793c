#include <doctest.h>

#include <cmath>
#include <vector>

#include "cmclab/analysis.hpp"
#include "cmclab/barrier.hpp"
#include "cmclab/errors.hpp"
#include "cmclab/field.hpp"

using namespace cmclab;

namespace {

constexpr double kH = 0.5;

struct UnduloidFamily {
  Domain dom;
  std::vector<CMCSolution> seq;
  std::vector<double> t;
};

// Sampled unduloids centered at c on the annulus common to all members.
UnduloidFamily unduloids(double h, Point2 c = {}, std::vector<double> fractions = {0.8, 0.9, 0.95, 0.99}) {
  double lo = 0.0, hi = 1e9;
  for (double f : fractions) {
    const auto [r1, r2] = radii(f * 0.25 / kH, kH);
    lo = std::max(lo, r1);
    hi = std::min(hi, r2);
  }
  UnduloidFamily fam{make_annulus(c, lo + 4 * h, hi - 4 * h), {}, {}};
  const GridPtr g = Grid::from_domain(fam.dom, h);
  for (double f : fractions) {
    const UnduloidBarrier b(kH, f * 0.25 / kH);
    fam.seq.push_back(CMCSolution{ScalarField::sample(g, [&](const Point2& p) { return eval(b, distance(p, c)); }),
                                  kH, {}, 0.0, 0, true, {}});
    fam.t.push_back(f * 0.25 / kH);
  }
  return fam;
}

}  // namespace

TEST_CASE("gradient bound radius") {
  CHECK(gradient_bound_radius(0.5, 2.0, 1.0, 0.1) == doctest::Approx(0.5));
  CHECK(gradient_bound_radius(0.5, 4.0, 1.0, 1.0) == doctest::Approx(3.0 / 128.0));
  CHECK_THROWS_AS(gradient_bound_radius(0.5, 0.5, 1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(gradient_bound_radius(-1.0, 2.0, 1.0, 1.0), ParameterError);
}

TEST_CASE("convergence domain preconditions") {
  const auto fam = unduloids(1.0 / 64);
  CHECK_THROWS_AS(convergence_domain({}, 10.0), ParameterError);
  CHECK_THROWS_AS(convergence_domain(fam.seq, 1.0), ParameterError);
  std::vector<CMCSolution> mixed = fam.seq;
  const auto other = unduloids(1.0 / 64, {0.01, 0.0});
  mixed.push_back(other.seq.front());
  CHECK_THROWS_AS(convergence_domain(mixed, 10.0), ConfigError);
}

TEST_CASE("bounded set grows with tau and shrinks with the sequence") {
  const auto fam = unduloids(1.0 / 64);
  const std::span<const CMCSolution> all(fam.seq);
  std::size_t prev = 0;
  for (double tau : {2.0, 4.0, 8.0, 16.0, 64.0}) {
    const auto est = convergence_domain(all, tau);
    std::size_t bounded = 0;
    for (std::size_t idx = 0; idx < est.bounded_mask.size(); ++idx) bounded += est.bounded(idx);
    CHECK(bounded >= prev);
    prev = bounded;
    // Nested in the sequence prefix as well.
    const auto shorter = convergence_domain(all.first(2), tau);
    for (std::size_t idx = 0; idx < est.bounded_mask.size(); ++idx) {
      if (est.bounded(idx)) CHECK(shorter.bounded(idx));
    }
  }
}

TEST_CASE("sup W is the maximum over the sequence") {
  const auto fam = unduloids(1.0 / 64);
  const auto est = convergence_domain(fam.seq, 4.0);
  std::vector<RealField> ws;
  for (const auto& s : fam.seq) ws.push_back(slope_w(s.field));
  const Grid& g = *est.grid;
  for (std::size_t idx = 0; idx < g.size(); idx += 7) {
    if (g.kind(idx) != NodeKind::interior) continue;
    double m = 0.0;
    for (const auto& w : ws) m = std::max(m, w.values[idx]);
    CHECK(est.sup_W[idx] == doctest::Approx(m));
  }
}

TEST_CASE("unduloid necks are detected as the central circle") {
  const double h = 1.0 / 128;
  for (Point2 c : {Point2{0.0, 0.0}, Point2{0.3, -0.2}}) {
    const auto fam = unduloids(h, c);
    DetectorParams p;
    p.tau = 4.0;
    const DetectionResult r = detect_divergence_lines(fam.seq, fam.dom, kH, p);
    REQUIRE(r.lines.size() == 1);
    const DivergenceLine& l = r.lines.front();
    CHECK(l.accepted);
    CHECK(l.arc.is_full_circle());
    CHECK(l.arc.radius() == doctest::Approx(1.0 / (2 * kH)));
    CHECK(distance(l.arc.center(), c) < 2 * h);
    CHECK(l.refit_curvature == doctest::Approx(2 * kH).epsilon(0.05));
    CHECK_FALSE(l.endpoints);
    REQUIRE(l.flux_ratios.size() == fam.t.size());
    for (std::size_t k = 0; k < fam.t.size(); ++k) {
      CHECK(l.flux_ratios[k] == doctest::Approx(0.5 + 2 * kH * fam.t[k]).epsilon(1e-2));
      if (k > 0) CHECK(l.alignment[k] > l.alignment[k - 1]);
    }
    CHECK(r.accepted_count() == 1);
  }
}

TEST_CASE("flux ratio and alignment on a hand-built line") {
  const auto fam = unduloids(1.0 / 64);
  DivergenceLine line;
  line.arc = CircleArc::circle({}, 1.0, Orientation::cw);
  line.h = 1.0 / 64;
  line.validation_begin = 0.0;
  line.validation_end = line.arc.length();
  const auto fr = flux_ratio(line, fam.seq, line.validation_curve());
  for (std::size_t k = 0; k < fr.size(); ++k) {
    CHECK(fr[k] == doctest::Approx(0.5 + 2 * kH * fam.t[k]).epsilon(1e-3));
  }
  const AlignmentSeries a = normal_alignment(line, fam.seq);
  for (std::size_t k = 0; k < a.mean.size(); ++k) {
    CHECK(a.min[k] <= a.mean[k] + 1e-15);
    CHECK(a.mean[k] == doctest::Approx(0.5 + 2 * kH * fam.t[k]).epsilon(1e-3));
  }

  // A circle that leaves the annulus is not covered.
  DivergenceLine off = line;
  off.arc = CircleArc::circle({0.5, 0.0}, 1.0, Orientation::cw);
  off.validation_end = off.arc.length();
  CHECK_THROWS_AS(flux_ratio(off, fam.seq, off.validation_curve()), PartialCoverageError);
}

TEST_CASE("detector needs at least three solutions") {
  const auto fam = unduloids(1.0 / 64);
  const std::vector<CMCSolution> two(fam.seq.begin(), fam.seq.begin() + 2);
  CHECK_THROWS_AS(detect_divergence_lines(two, fam.dom, kH, DetectorParams{}), ParameterError);
}

TEST_CASE("bounded sequence has no divergence") {
  const auto fam = unduloids(1.0 / 64, {}, {0.3, 0.35, 0.4});
  DetectorParams p;
  p.tau = 1000.0;
  const DetectionResult r = detect_divergence_lines(fam.seq, fam.dom, kH, p);
  CHECK(r.lines.empty());
  CHECK(r.estimate.divergent_count() == 0);
}

TEST_CASE("endpoint classes") {
  const Domain lens = make_lens({-0.4, 0}, {0.4, 0}, 0.5, 0.5);
  DivergenceLine line;
  line.h = 1.0 / 128;
  // Corner to corner along the radius 1 circle below the chord.
  const double a0 = std::atan2(0.9165, -0.4), a1 = std::atan2(0.9165, 0.4);
  line.arc = CircleArc({0.0, -0.9165}, 1.0, a0, a1, Orientation::cw);
  auto e = classify_endpoints(line, lens);
  REQUIRE(e);
  CHECK(e->first.kind == EndpointClass::Kind::corner);
  CHECK(e->second.kind == EndpointClass::Kind::corner);

  // Ends well inside the domain.
  line.arc = CircleArc({0.0, -0.95}, 1.0, std::atan2(0.95, -0.1), std::atan2(0.95, 0.1), Orientation::cw);
  e = classify_endpoints(line, lens);
  REQUIRE(e);
  CHECK(e->first.kind == EndpointClass::Kind::interior);
  CHECK(e->first.distance_to_boundary > 3 * line.h);

  // One end on the top arc, away from the corners.
  const Point2 top{0.1, std::sqrt(0.25 - 0.01) - 0.3};
  line.arc = CircleArc({top.x, top.y - 1.0}, 1.0, kPi / 2, kPi / 2 - 0.3, Orientation::cw);
  e = classify_endpoints(line, lens);
  REQUIRE(e);
  CHECK(e->first.kind == EndpointClass::Kind::on_boundary_piece);
  CHECK(lens.pieces()[e->first.piece].data_tag == "top");

  line.arc = CircleArc::circle({}, 0.1, Orientation::cw);
  CHECK_FALSE(classify_endpoints(line, lens));
  CHECK(to_string(EndpointClass::Kind::on_boundary_piece) == "on_boundary_piece");
}

TEST_CASE("blow-up profile of a radial field") {
  // u = 2 (R - r) on a disk: the mean over the circle of radius R - d is 2 d.
  const double R = 0.5, h = 1.0 / 128;
  const Domain dom = make_disk({}, R);
  const GridPtr g = Grid::from_domain(dom, h);
  CMCSolution sol{ScalarField::sample(g, [&](const Point2& p) { return 2.0 * (R - norm(p)); }), kH, {}, 0.0, 0, true, {}};
  const CircleArc rim = std::get<CircleArc>(dom.pieces()[0].geometry);
  const auto rows = boundary_blowup_profile(sol, rim, {2 * h, 4 * h, 8 * h, 0.7});
  REQUIRE(rows.size() == 4);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK_FALSE(rows[k].skipped);
    CHECK(rows[k].coverage == doctest::Approx(1.0));
    CHECK(rows[k].mean_u == doctest::Approx(2.0 * rows[k].offset).epsilon(1e-2));
  }
  CHECK(rows[0].slope == doctest::Approx(2.0).epsilon(1e-2));
  CHECK(rows[3].skipped);
  CHECK(rows[3].note == "offset exceeds the arc radius");
  CHECK(std::isnan(rows[2].slope));

  // Concentric arcs outside the mask are skipped.
  const auto far = boundary_blowup_profile(sol, CircleArc::circle({2.0, 0.0}, 0.3), {0.01});
  CHECK(far[0].skipped);
  CHECK(far[0].coverage < 0.5);
}
