#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "cmclab/barrier.hpp"
#include "cmclab/errors.hpp"
#include "cmclab/solver.hpp"

namespace cmclab {

namespace {

constexpr double kRichardsonTol = 1e-11;
constexpr int kMaxSteps = 1 << 20;

struct Branch {
  double H;
  double t;
  double r1;
  double r2;
  bool outer;

  double radius(double s) const { return outer ? r2 - s * s : r1 + s * s; }

  // df/ds. Along the branch 1 - g = H s^2 (far rim distance) / r, so the
  // s in dr/ds = +/-2s cancels the zero of sqrt(1 - g^2).
  double rate(double s) const {
    const double r = radius(s);
    const double g = H * r + t / r;
    const double far = outer ? r - r1 : r2 - r;
    const double root = std::sqrt(H * far * (1.0 + g) / r);
    return (outer ? -2.0 : 2.0) * g / root;
  }
};

// Classical RK4 for df/ds = rate(s) from s0 (f = 0) to 0 in n equal steps.
std::vector<double> rk4(const Branch& b, double s0, int n) {
  std::vector<double> f(static_cast<std::size_t>(n) + 1, 0.0);
  const double ds = -s0 / n;
  for (int k = 0; k < n; ++k) {
    const double s = s0 + k * ds;
    const double k1 = b.rate(s);
    const double k2 = b.rate(s + 0.5 * ds);
    const double k3 = k2;
    const double k4 = b.rate(k + 1 == n ? 0.0 : s + ds);
    f[k + 1] = f[k] + ds / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return f;
}

// Richardson-extrapolated values on the n-step grid from the 2n and 4n runs;
// the step count grows until two successive extrapolations agree.
std::vector<RadialProfile::Node> integrate_branch(const Branch& b, double s0, int n) {
  auto extrapolate = [&](int m) {
    const std::vector<double> fine = rk4(b, s0, 2 * m);
    const std::vector<double> coarse = rk4(b, s0, m);
    std::vector<double> e(static_cast<std::size_t>(m) + 1);
    for (int k = 0; k <= m; ++k) {
      e[k] = fine[2 * static_cast<std::size_t>(k)] +
             (fine[2 * static_cast<std::size_t>(k)] - coarse[k]) / 15.0;
    }
    return e;
  };
  std::vector<double> prev = extrapolate(n);
  while (true) {
    if (2 * n > kMaxSteps) throw NumericError("solve_radial: step refinement did not converge");
    const std::vector<double> next = extrapolate(2 * n);
    double diff = 0.0;
    for (int k = 0; k <= n; ++k) diff = std::max(diff, std::abs(next[2 * static_cast<std::size_t>(k)] - prev[k]));
    if (diff <= kRichardsonTol) {
      std::vector<RadialProfile::Node> nodes;
      nodes.reserve(static_cast<std::size_t>(n) + 1);
      for (int k = 0; k <= n; ++k) {
        const double s = k == n ? 0.0 : s0 * (1.0 - static_cast<double>(k) / n);
        nodes.push_back({s, b.radius(s), next[2 * static_cast<std::size_t>(k)], b.rate(s)});
      }
      return nodes;
    }
    prev = next;
    n *= 2;
  }
}

double hermite(const std::vector<RadialProfile::Node>& nodes, double s) {
  // Nodes are equally spaced with s decreasing from nodes.front().s to 0.
  const double s0 = nodes.front().s;
  const auto n = static_cast<double>(nodes.size() - 1);
  if (s0 == 0.0) return nodes.front().f;
  double pos = (s0 - s) / s0 * n;
  auto k = static_cast<std::size_t>(std::floor(pos));
  if (k >= nodes.size() - 1) k = nodes.size() - 2;
  const RadialProfile::Node& a = nodes[k];
  const RadialProfile::Node& c = nodes[k + 1];
  const double ds = c.s - a.s;
  const double x = (s - a.s) / ds;
  const double x2 = x * x;
  const double x3 = x2 * x;
  return (2 * x3 - 3 * x2 + 1) * a.f + (x3 - 2 * x2 + x) * ds * a.dfds + (-2 * x3 + 3 * x2) * c.f +
         (x3 - x2) * ds * c.dfds;
}

}  // namespace

RadialProfile::RadialProfile(double H, double t, std::vector<Node> inner, std::vector<Node> outer)
    : H_(H), t_(t), inner_(std::move(inner)), outer_(std::move(outer)) {
  std::tie(r1_, r2_) = radii(t, H);
  if (inner_.size() < 2 || outer_.size() < 2) throw ParameterError("RadialProfile: need two nodes per branch");
}

double RadialProfile::value_at(double r) const {
  if (!std::isfinite(r) || r < r1_ || r > r2_) {
    throw DomainError("RadialProfile: r=" + std::to_string(r) + " outside [r1, r2]");
  }
  const double rc = 0.5 / H_;
  if (r <= rc) return hermite(inner_, std::sqrt(r - r1_));
  return hermite(outer_, std::sqrt(r2_ - r));
}

RadialProfile solve_radial(double t, double H, int n_steps) {
  const auto [r1, r2] = radii(t, H);
  if (n_steps < 4) throw ParameterError("solve_radial: n_steps must be >= 4");
  const double rc = 0.5 / H;
  const Branch inner{H, t, r1, r2, false};
  const Branch outer{H, t, r1, r2, true};
  return RadialProfile(H, t, integrate_branch(inner, std::sqrt(rc - r1), n_steps),
                       integrate_branch(outer, std::sqrt(r2 - rc), n_steps));
}

}  // namespace cmclab
