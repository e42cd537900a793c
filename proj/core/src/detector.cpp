#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <string>

#include "cmclab/analysis.hpp"
#include "cmclab/errors.hpp"
#include "cmclab/field.hpp"

namespace cmclab {

namespace {

constexpr std::size_t kMinFitPoints = 5;

struct Circle {
  Point2 center;
  double radius = 0.0;
};

std::string fixed(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

// 8-connected components of the divergent set, in index order.
std::vector<std::vector<std::size_t>> components(const ConvergenceDomainEstimate& est) {
  const Grid& g = *est.grid;
  std::vector<std::uint8_t> seen(g.size(), 0);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t start = 0; start < g.size(); ++start) {
    if (seen[start] || !est.divergent(start)) continue;
    std::vector<std::size_t> comp;
    std::deque<std::size_t> queue{start};
    seen[start] = 1;
    while (!queue.empty()) {
      const std::size_t idx = queue.front();
      queue.pop_front();
      comp.push_back(idx);
      const int i = g.i_of(idx);
      const int j = g.j_of(idx);
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          if (!g.in_range(i + di, j + dj)) continue;
          const std::size_t nb = g.index(i + di, j + dj);
          if (!seen[nb] && est.divergent(nb)) {
            seen[nb] = 1;
            queue.push_back(nb);
          }
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

// Zhang-Suen thinning of one component; returns the skeleton nodes.
std::vector<std::size_t> skeleton(const Grid& g, const std::vector<std::size_t>& comp) {
  int i0 = g.nx(), j0 = g.ny(), i1 = -1, j1 = -1;
  for (const std::size_t idx : comp) {
    i0 = std::min(i0, g.i_of(idx));
    i1 = std::max(i1, g.i_of(idx));
    j0 = std::min(j0, g.j_of(idx));
    j1 = std::max(j1, g.j_of(idx));
  }
  const int w = i1 - i0 + 3;
  const int hgt = j1 - j0 + 3;
  std::vector<std::uint8_t> img(static_cast<std::size_t>(w) * hgt, 0);
  auto at = [&](int x, int y) -> std::uint8_t& { return img[static_cast<std::size_t>(y) * w + x]; };
  for (const std::size_t idx : comp) at(g.i_of(idx) - i0 + 1, g.j_of(idx) - j0 + 1) = 1;

  std::vector<std::pair<int, int>> remove;
  bool changed = true;
  while (changed) {
    changed = false;
    for (int pass = 0; pass < 2; ++pass) {
      remove.clear();
      for (int y = 1; y < hgt - 1; ++y) {
        for (int x = 1; x < w - 1; ++x) {
          if (!at(x, y)) continue;
          // P2..P9 clockwise from north.
          const int p[8] = {at(x, y + 1), at(x + 1, y + 1), at(x + 1, y), at(x + 1, y - 1),
                            at(x, y - 1), at(x - 1, y - 1), at(x - 1, y), at(x - 1, y + 1)};
          int b = 0;
          int a = 0;
          for (int k = 0; k < 8; ++k) {
            b += p[k];
            a += (p[k] == 0 && p[(k + 1) % 8] == 1) ? 1 : 0;
          }
          if (b < 2 || b > 6 || a != 1) continue;
          const bool cond = pass == 0 ? (p[0] * p[2] * p[4] == 0 && p[2] * p[4] * p[6] == 0)
                                      : (p[0] * p[2] * p[6] == 0 && p[0] * p[4] * p[6] == 0);
          if (cond) remove.emplace_back(x, y);
        }
      }
      for (const auto& [x, y] : remove) at(x, y) = 0;
      changed = changed || !remove.empty();
    }
  }
  std::vector<std::size_t> out;
  for (int y = 1; y < hgt - 1; ++y) {
    for (int x = 1; x < w - 1; ++x) {
      if (at(x, y)) out.push_back(g.index(x - 1 + i0, y - 1 + j0));
    }
  }
  return out;
}

double rms_fixed(const std::vector<Point2>& pts, const Point2& c, double R) {
  double s = 0.0;
  for (const Point2& p : pts) {
    const double d = distance(p, c) - R;
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(pts.size()));
}

// Gauss-Newton with Levenberg damping on the center, radius held fixed.
Point2 fit_center(const std::vector<Point2>& pts, double R, Point2 c) {
  double lambda = 1e-6;
  double cost = rms_fixed(pts, c, R);
  for (int it = 0; it < 100; ++it) {
    Eigen::Matrix2d jtj = Eigen::Matrix2d::Zero();
    Eigen::Vector2d jtr = Eigen::Vector2d::Zero();
    for (const Point2& p : pts) {
      const Vec2 d = p - c;
      const double n = norm(d);
      if (n == 0.0) continue;
      const Eigen::Vector2d jr(-d.x / n, -d.y / n);
      jtj += jr * jr.transpose();
      jtr += jr * (n - R);
    }
    bool improved = false;
    for (int tries = 0; tries < 20; ++tries) {
      Eigen::Matrix2d a = jtj;
      a.diagonal() *= 1.0 + lambda;
      const Eigen::Vector2d step = a.ldlt().solve(-jtr);
      const Point2 trial{c.x + step.x(), c.y + step.y()};
      const double tc = rms_fixed(pts, trial, R);
      if (tc < cost) {
        const double moved = step.norm();
        c = trial;
        cost = tc;
        lambda = std::max(lambda * 0.1, 1e-12);
        improved = true;
        if (moved < 1e-13 * (1.0 + R)) return c;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) break;
  }
  return c;
}

// Algebraic circle fit x^2 + y^2 + D x + E y + F = 0 about the centroid.
std::optional<Circle> kasa(const std::vector<Point2>& pts) {
  if (pts.size() < 3) return std::nullopt;
  Point2 m{};
  for (const Point2& p : pts) m += p;
  m = m / static_cast<double>(pts.size());
  Eigen::MatrixXd a(static_cast<Eigen::Index>(pts.size()), 3);
  Eigen::VectorXd b(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Vec2 d = pts[k] - m;
    const auto row = static_cast<Eigen::Index>(k);
    a(row, 0) = d.x;
    a(row, 1) = d.y;
    a(row, 2) = 1.0;
    b[row] = -(d.x * d.x + d.y * d.y);
  }
  const Eigen::Vector3d x = a.colPivHouseholderQr().solve(b);
  const Point2 c{m.x - 0.5 * x[0], m.y - 0.5 * x[1]};
  const double r2 = 0.25 * (x[0] * x[0] + x[1] * x[1]) - x[2];
  if (!(r2 > 0.0) || !is_finite(c)) return std::nullopt;
  return Circle{c, std::sqrt(r2)};
}

// Levenberg-Marquardt on center and radius.
Circle fit_free(const std::vector<Point2>& pts, Circle c) {
  auto cost = [&](const Circle& k) { return rms_fixed(pts, k.center, k.radius); };
  double lambda = 1e-6;
  double cur = cost(c);
  for (int it = 0; it < 200; ++it) {
    Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
    Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
    for (const Point2& p : pts) {
      const Vec2 d = p - c.center;
      const double n = norm(d);
      if (n == 0.0) continue;
      const Eigen::Vector3d jr(-d.x / n, -d.y / n, -1.0);
      jtj += jr * jr.transpose();
      jtr += jr * (n - c.radius);
    }
    bool improved = false;
    for (int tries = 0; tries < 20; ++tries) {
      Eigen::Matrix3d a = jtj;
      a.diagonal() *= 1.0 + lambda;
      const Eigen::Vector3d step = a.ldlt().solve(-jtr);
      const Circle trial{{c.center.x + step.x(), c.center.y + step.y()}, c.radius + step.z()};
      if (trial.radius <= 0.0) {
        lambda *= 10.0;
        continue;
      }
      const double tc = cost(trial);
      if (tc < cur) {
        c = trial;
        cur = tc;
        lambda = std::max(lambda * 0.1, 1e-12);
        improved = true;
        if (step.norm() < 1e-13 * (1.0 + c.radius)) return c;
        break;
      }
      lambda *= 10.0;
    }
    if (!improved) break;
  }
  return c;
}

// Principal direction of a point cloud.
std::pair<Point2, Vec2> principal_axis(const std::vector<Point2>& pts) {
  Point2 m{};
  for (const Point2& p : pts) m += p;
  m = m / static_cast<double>(pts.size());
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const Point2& p : pts) {
    const Vec2 d = p - m;
    sxx += d.x * d.x;
    sxy += d.x * d.y;
    syy += d.y * d.y;
  }
  const double theta = 0.5 * std::atan2(2.0 * sxy, sxx - syy);
  return {m, unit_from_angle(theta)};
}

Point2 reflect(const Point2& p, const Point2& m, const Vec2& dir) {
  const Vec2 d = p - m;
  const Vec2 along = dir * dot(d, dir);
  return m + along * 2.0 - d;
}

// Longest run of true entries, cyclic when `cyclic`. Returns (start, length).
std::pair<std::size_t, std::size_t> longest_run(const std::vector<std::uint8_t>& ok, bool cyclic) {
  const std::size_t n = ok.size();
  if (n == 0) return {0, 0};
  if (std::all_of(ok.begin(), ok.end(), [](std::uint8_t v) { return v != 0; })) return {0, n};
  std::size_t best_start = 0, best_len = 0;
  const std::size_t span = cyclic ? 2 * n : n;
  std::size_t run_start = 0, run_len = 0;
  for (std::size_t k = 0; k < span; ++k) {
    if (ok[k % n]) {
      if (run_len == 0) run_start = k;
      ++run_len;
      if (run_len > best_len) {
        best_len = std::min(run_len, n);
        best_start = run_start % n;
      }
    } else {
      run_len = 0;
    }
  }
  return {best_start, best_len};
}

}  // namespace

DetectionResult detect_divergence_lines(std::span<const CMCSolution> seq, const Domain& dom, double H,
                                        const DetectorParams& params) {
  if (!(H > 0.0)) throw ParameterError("detect_divergence_lines: H must be positive");
  if (seq.size() < 3) throw ParameterError("detect_divergence_lines: need at least three solutions");
  DetectionResult result;
  result.estimate = convergence_domain(seq, params.tau);
  const Grid& g = *result.estimate.grid;
  const double h = g.h();
  const double R = 0.5 / H;
  const double fit_tol = params.fit_tol > 0.0 ? params.fit_tol : 2.0 * h;
  const double trim = params.boundary_trim * h;

  std::vector<FluxForm> fluxes;
  std::vector<NormalMap> normals;
  for (const CMCSolution& s : seq) {
    const VectorField grad = gradient(s.field);
    fluxes.push_back(flux_form(grad));
    normals.push_back(normal_map(grad));
  }
  const NormalMap& last = normals.back();

  for (const std::vector<std::size_t>& comp : components(result.estimate)) {
    if (comp.size() < params.min_component_nodes) continue;
    std::vector<Point2> comp_pts;
    comp_pts.reserve(comp.size());
    for (const std::size_t idx : comp) comp_pts.push_back(g.position(idx));
    Point2 centroid{};
    for (const Point2& p : comp_pts) centroid += p;
    centroid = centroid / static_cast<double>(comp_pts.size());

    // Chain points next to the boundary follow boundary layers, not the line.
    std::vector<std::size_t> chain = skeleton(g, comp);
    if (chain.size() < 3) chain = comp;
    std::vector<Point2> pts;
    pts.reserve(chain.size());
    for (const std::size_t idx : chain) {
      const Point2 p = g.position(idx);
      if (dom.nearest_boundary(p).distance >= trim) pts.push_back(p);
    }
    if (pts.size() < kMinFitPoints) {
      result.unclassified.push_back({comp.size(), std::numeric_limits<double>::quiet_NaN(), centroid,
                                     "chain lies within the boundary trim"});
      continue;
    }

    // Candidate centers: the normal map, the algebraic fit, and the principal
    // axis, each on both sides of the chain.
    std::vector<Point2> starts;
    {
      Point2 acc{};
      std::size_t count = 0;
      for (const std::size_t idx : chain) {
        if (!last.is_valid(idx)) continue;
        const Vec3& N = last.values[idx];
        const Vec2 horiz{N.x, N.y};
        if (norm(horiz) < 1e-12) continue;
        acc += g.position(idx) + normalized(horiz) * R;
        ++count;
      }
      if (count > 0) starts.push_back(acc / static_cast<double>(count));
    }
    const auto [axis_m, axis_dir] = principal_axis(pts);
    if (const auto k = kasa(pts)) {
      starts.push_back(k->center);
      starts.push_back(reflect(k->center, axis_m, axis_dir));
    }
    starts.push_back(axis_m + perp(axis_dir) * R);
    starts.push_back(axis_m - perp(axis_dir) * R);

    Point2 center{};
    double rms = std::numeric_limits<double>::infinity();
    for (const Point2& s : starts) {
      const Point2 c = fit_center(pts, R, s);
      const double r = rms_fixed(pts, c, R);
      if (r < rms) {
        rms = r;
        center = c;
      }
    }
    if (!(rms <= fit_tol)) {
      result.unclassified.push_back({comp.size(), rms, centroid,
                                     "not a 1/(2H) arc: best rms " + fixed(rms) + " > " + fixed(fit_tol)});
      continue;
    }

    DivergenceLine line;
    line.arc = CircleArc::circle(center, R, Orientation::cw);
    line.h = h;
    line.fit_rms = rms;
    line.component_nodes = comp.size();
    {
      const auto k = kasa(pts);
      const Circle refit = fit_free(pts, k ? *k : Circle{center, R});
      line.refit_curvature = 1.0 / refit.radius;
    }

    // Angular extent of the chain and of component nodes close to the circle.
    std::vector<double> angles;
    const double band = std::max(fit_tol, 2.0 * h);
    for (const Point2& p : pts) angles.push_back(angle_of(p - center));
    for (const Point2& p : comp_pts) {
      if (std::abs(distance(p, center) - R) <= band) angles.push_back(angle_of(p - center));
    }
    std::sort(angles.begin(), angles.end());
    double gap = angles.front() + kTwoPi - angles.back();
    double gap_end = angles.front();  // first angle after the largest gap
    for (std::size_t k = 1; k < angles.size(); ++k) {
      const double d = angles[k] - angles[k - 1];
      if (d > gap) {
        gap = d;
        gap_end = angles[k];
      }
    }
    const bool closed = gap <= 4.0 * h / R;
    if (!closed) {
      const double span = kTwoPi - gap;
      line.arc = CircleArc(center, R, gap_end + span, gap_end, Orientation::cw);
    }

    // Validation range: longest run of arc samples inside every mask.
    const double len = line.arc.length();
    const auto nsamp = static_cast<std::size_t>(std::ceil(len / h));
    const std::size_t count = closed ? nsamp : nsamp + 1;
    std::vector<std::uint8_t> ok(count, 1);
    for (std::size_t k = 0; k < count; ++k) {
      const Point2 p = line.arc.point_at(len * static_cast<double>(k) / static_cast<double>(nsamp));
      for (std::size_t n = 0; n < seq.size() && ok[k]; ++n) {
        ok[k] = interpolate(fluxes[n], p).has_value() && interpolate(normals[n], p).has_value();
      }
    }
    const auto [run_start, run_len] = longest_run(ok, closed);
    const double ds = len / static_cast<double>(nsamp);
    if (closed && run_len < count) {
      line.arc = CircleArc::circle(center, R, Orientation::cw, line.arc.angle_at(ds * static_cast<double>(run_start)));
      line.validation_begin = 0.0;
      line.validation_end = ds * static_cast<double>(run_len - 1);
    } else if (closed) {
      line.validation_begin = 0.0;
      line.validation_end = len;
    } else {
      line.validation_begin = ds * static_cast<double>(run_start);
      line.validation_end = run_len > 0 ? ds * static_cast<double>(run_start + run_len - 1) : line.validation_begin;
    }
    line.endpoints = classify_endpoints(line, dom);

    const double coverage = (line.validation_end - line.validation_begin) / len;
    std::vector<std::string> failures;
    if (coverage < params.min_coverage) {
      failures.push_back("validation arc covers " + fixed(100.0 * coverage, 3) + "% of the line");
    } else {
      const Curve sub = line.validation_curve();
      line.flux_ratios.reserve(seq.size());
      for (const FluxForm& w : fluxes) line.flux_ratios.push_back(line_integral(w, sub) / -sub.length());
      const AlignmentSeries al = normal_alignment(line, seq);
      line.alignment = al.mean;
      line.alignment_min = al.min;
      if (!(line.flux_ratios.back() >= params.min_flux_ratio)) {
        failures.push_back("final flux ratio " + fixed(line.flux_ratios.back()) + " < " +
                           fixed(params.min_flux_ratio));
      }
      if (!(line.alignment.back() >= params.min_alignment)) {
        failures.push_back("final alignment " + fixed(line.alignment.back()) + " < " +
                           fixed(params.min_alignment));
      }
    }
    const double curvature_error = std::abs(line.refit_curvature - 2.0 * H) / (2.0 * H);
    if (!(curvature_error <= params.curvature_tol)) {
      failures.push_back("free refit curvature off by " + fixed(100.0 * curvature_error, 3) + "%");
    }
    line.accepted = failures.empty();
    if (line.accepted) {
      line.reason = "accepted";
    } else {
      line.reason = failures.front();
      for (std::size_t k = 1; k < failures.size(); ++k) line.reason += "; " + failures[k];
    }
    result.lines.push_back(std::move(line));
  }
  return result;
}

}  // namespace cmclab
