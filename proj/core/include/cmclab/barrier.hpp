#pragma once

// Exact radial solutions of the CMC graph equation.
//
// The unduloid family h_t(x, y) = f(|(x, y)|) solves
//     f' / sqrt(1 + f'^2) = g(r) = H r + t / r,      0 < t < 1/(4H),
// on the closed annulus r1(t) <= r <= r2(t) where g <= 1, normalized by
// f(1/(2H)) = offset. The slope blows up at both rims.

#include <utility>

#include "cmclab/vec.hpp"

namespace cmclab {

/// Closed-form annulus radii (r1, r2) of the unduloid barrier: the roots of
/// H r^2 - r + t = 0. Throws ParameterError unless 0 < t < 1/(4H).
std::pair<double, double> radii(double t, double H);

class UnduloidBarrier {
 public:
  UnduloidBarrier(double H, double t, double offset = 0.0);

  double H() const noexcept { return H_; }
  double t() const noexcept { return t_; }
  double offset() const noexcept { return offset_; }
  double r1() const noexcept { return r1_; }
  double r2() const noexcept { return r2_; }
  /// Radius 1/(2H) of the central circle where h_t == offset.
  double central_radius() const noexcept { return 0.5 / H_; }

  bool in_annulus(double r) const noexcept { return r >= r1_ && r <= r2_; }

  /// 1 - g(r) in factored form H (r - r1)(r2 - r) / r, exact near the rims.
  double one_minus_slope_ratio(double r) const;

 private:
  double H_;
  double t_;
  double offset_;
  double r1_;
  double r2_;
};

/// g(r) = H r + t / r, in (0, 1] on the annulus. Throws DomainError outside it.
double slope_ratio(double r, const UnduloidBarrier& b);

/// f'(r) = g / sqrt(1 - g^2); +infinity at the rims.
double radial_slope(double r, const UnduloidBarrier& b);

/// h_t(r) by adaptive Gauss-Kronrod quadrature of f' with r = r_rim -/+ s^2
/// substitutions, absolute tolerance 1e-10. Throws DomainError outside the
/// annulus and NumericError if the quadrature cannot meet its tolerance.
double eval(const UnduloidBarrier& b, double r);

/// Gradient at a planar point. At the rims the slope is infinite: the result
/// then reports `infinite_slope` with the (outward radial) direction.
struct BarrierGradient {
  Vec2 value;         ///< f'(r) * P / |P| when finite
  Vec2 direction;     ///< unit radial direction
  bool infinite_slope = false;
};

BarrierGradient gradient(const UnduloidBarrier& b, const Point2& p);

/// Flux of the 1-form of h_t through the centered circle arc of radius rho
/// and opening angle `arc_angle`, oriented counter-clockwise: g(rho) rho theta.
double flux_on_centered_circle(const UnduloidBarrier& b, double rho, double arc_angle);

/// Lower hemisphere of radius 1/H: u = offset - sqrt(1/H^2 - r^2).
class HemisphereSolution {
 public:
  HemisphereSolution(double H, Point2 center = {}, double offset = 0.0);

  double H() const noexcept { return H_; }
  const Point2& center() const noexcept { return center_; }
  double offset() const noexcept { return offset_; }
  double radius() const noexcept { return 1.0 / H_; }

  /// Closed-form slope function W = 1 / (H sqrt(1/H^2 - r^2)).
  double slope_w(const Point2& p) const;

 private:
  double H_;
  Point2 center_;
  double offset_;
};

double hemisphere_eval(const HemisphereSolution& h, const Point2& p);
Vec2 hemisphere_gradient(const HemisphereSolution& h, const Point2& p);

}  // namespace cmclab
