#include "cmclab/barrier.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "cmclab/errors.hpp"

namespace cmclab {

namespace {

constexpr double kQuadratureTol = 1e-10;

void check_annulus(const UnduloidBarrier& b, double r, const char* who) {
  if (!std::isfinite(r) || !b.in_annulus(r)) {
    throw DomainError(std::string(who) + ": r=" + std::to_string(r) + " outside [r1, r2]");
  }
}

// d f / d s for r = r2 - s^2 (outer branch) or r = r1 + s^2 (inner branch).
// With 1 - g = H (r - r1)(r2 - r) / r the s factor cancels analytically.
double substituted_integrand(const UnduloidBarrier& b, double s, bool outer) {
  const double s2 = s * s;
  const double r = outer ? b.r2() - s2 : b.r1() + s2;
  const double g = b.H() * r + b.t() / r;
  const double other = outer ? (r - b.r1()) : (b.r2() - r);
  return 2.0 * g / std::sqrt(b.H() * other * (1.0 + g) / r);
}

double integrate(const UnduloidBarrier& b, double s_lo, double s_hi, bool outer) {
  if (s_lo == s_hi) return 0.0;
  // Integrate over [0, 1] so the relative tolerance is not tied to the
  // interval width.
  const double width = s_hi - s_lo;
  double error = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      [&](double x) { return substituted_integrand(b, s_lo + width * x, outer); }, 0.0, 1.0, 20,
      kQuadratureTol, &error);
  if (!(error <= kQuadratureTol * std::max(1.0, std::abs(value))) || !std::isfinite(value)) {
    throw NumericError("unduloid eval: quadrature did not converge");
  }
  return width * value;
}

}  // namespace

std::pair<double, double> radii(double t, double H) {
  if (!(H > 0.0) || !std::isfinite(H)) throw ParameterError("radii: H must be positive");
  if (!(t > 0.0) || !(t < 0.25 / H)) throw ParameterError("radii: t must lie in (0, 1/(4H))");
  const double root = std::sqrt(1.0 - 4.0 * t * H);
  // r1 via the product r1 r2 = t / H avoids cancellation for small t.
  const double r2 = (1.0 + root) / (2.0 * H);
  const double r1 = t / (H * r2);
  return {r1, r2};
}

UnduloidBarrier::UnduloidBarrier(double H, double t, double offset) : H_(H), t_(t), offset_(offset) {
  std::tie(r1_, r2_) = radii(t, H);
  if (!std::isfinite(offset)) throw ParameterError("UnduloidBarrier: offset must be finite");
}

double UnduloidBarrier::one_minus_slope_ratio(double r) const {
  return H_ * (r - r1_) * (r2_ - r) / r;
}

double slope_ratio(double r, const UnduloidBarrier& b) {
  check_annulus(b, r, "slope_ratio");
  if (r == b.r1() || r == b.r2()) return 1.0;
  return b.H() * r + b.t() / r;
}

double radial_slope(double r, const UnduloidBarrier& b) {
  const double g = slope_ratio(r, b);
  const double gap = b.one_minus_slope_ratio(r);
  if (!(gap > 0.0)) return std::numeric_limits<double>::infinity();
  return g / std::sqrt(gap * (1.0 + g));
}

double eval(const UnduloidBarrier& b, double r) {
  check_annulus(b, r, "eval");
  const double mid = b.central_radius();
  if (r >= mid) {
    // r = r2 - s^2, s from sqrt(r2 - r) (at r) up to sqrt(r2 - mid) (at mid).
    return b.offset() + integrate(b, std::sqrt(b.r2() - r), std::sqrt(b.r2() - mid), true);
  }
  // r = r1 + s^2; f(r) = -int_r^mid f'.
  return b.offset() - integrate(b, std::sqrt(r - b.r1()), std::sqrt(mid - b.r1()), false);
}

BarrierGradient gradient(const UnduloidBarrier& b, const Point2& p) {
  const double r = norm(p);
  check_annulus(b, r, "gradient");
  BarrierGradient out;
  out.direction = p / r;
  const double slope = radial_slope(r, b);
  if (std::isinf(slope)) {
    out.infinite_slope = true;
    out.value = out.direction * slope;
    return out;
  }
  out.value = slope * out.direction;
  return out;
}

double flux_on_centered_circle(const UnduloidBarrier& b, double rho, double arc_angle) {
  check_annulus(b, rho, "flux_on_centered_circle");
  if (!(arc_angle >= 0.0) || arc_angle > 2.0 * 3.14159265358979323846 * (1.0 + 1e-15)) {
    throw ParameterError("flux_on_centered_circle: arc angle must lie in (0, 2 pi]");
  }
  return slope_ratio(rho, b) * rho * arc_angle;
}

HemisphereSolution::HemisphereSolution(double H, Point2 center, double offset)
    : H_(H), center_(center), offset_(offset) {
  if (!(H > 0.0) || !std::isfinite(H)) throw ParameterError("HemisphereSolution: H must be positive");
}

namespace {
double hemisphere_depth(const HemisphereSolution& h, const Point2& p) {
  const double r = distance(p, h.center());
  const double R = h.radius();
  if (!(r < R)) throw DomainError("hemisphere: point outside the open disk of radius 1/H");
  return std::sqrt((R - r) * (R + r));
}
}  // namespace

double HemisphereSolution::slope_w(const Point2& p) const {
  return 1.0 / (H_ * hemisphere_depth(*this, p));
}

double hemisphere_eval(const HemisphereSolution& h, const Point2& p) {
  return h.offset() - hemisphere_depth(h, p);
}

Vec2 hemisphere_gradient(const HemisphereSolution& h, const Point2& p) {
  const double depth = hemisphere_depth(h, p);
  return (p - h.center()) / depth;
}

}  // namespace cmclab
