#include "cmclab/solver.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>

#include "cmc_operator.hpp"
#include "cmclab/errors.hpp"
#include "cmclab/field.hpp"

namespace cmclab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Grid, unknown numbering and the Poisson operator for one domain.
struct GridProblem {
  GridPtr grid;
  std::vector<std::size_t> interior;     // grid index of unknown k
  std::vector<std::ptrdiff_t> unknown;   // unknown number of a grid node, -1 if fixed
  SpMat laplacian;                       // 4 u_k - sum of interior neighbours
  Eigen::SimplicialLDLT<SpMat> poisson;

  explicit GridProblem(GridPtr grid_ptr);
};

GridProblem::GridProblem(GridPtr grid_ptr) : grid(std::move(grid_ptr)) {
  GridProblem& pb = *this;
  const Grid& g = *pb.grid;
  pb.unknown.assign(g.size(), -1);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (g.kind(idx) == NodeKind::interior) {
      pb.unknown[idx] = static_cast<std::ptrdiff_t>(pb.interior.size());
      pb.interior.push_back(idx);
    }
  }
  if (pb.interior.empty()) throw ParameterError("solver: grid has no interior nodes");
  const auto n = static_cast<Eigen::Index>(pb.interior.size());
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(pb.interior.size() * 5);
  for (std::size_t k = 0; k < pb.interior.size(); ++k) {
    const int i = g.i_of(pb.interior[k]);
    const int j = g.j_of(pb.interior[k]);
    const auto row = static_cast<Eigen::Index>(k);
    trip.emplace_back(row, row, 4.0);
    const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
    for (const auto& q : nb) {
      const std::ptrdiff_t c = pb.unknown[g.index(q[0], q[1])];
      if (c >= 0) trip.emplace_back(row, static_cast<Eigen::Index>(c), -1.0);
    }
  }
  pb.laplacian.resize(n, n);
  pb.laplacian.setFromTriplets(trip.begin(), trip.end());
  pb.poisson.compute(pb.laplacian);
  if (pb.poisson.info() != Eigen::Success) throw NumericError("solver: Poisson factorization failed");
}

std::vector<double> ring_values(const GridProblem& pb, const Domain& dom, const BoundaryData& data) {
  const Grid& g = *pb.grid;
  std::vector<double> u(g.size(), kNaN);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (g.kind(idx) == NodeKind::boundary) u[idx] = data.value_at(dom, g.position(idx));
  }
  return u;
}

// Solves 4 u_k - sum u_nb = rhs_scale * h^2 with the ring values of `u` as
// Dirichlet data, writing the interior entries of `u`.
void poisson_fill(const GridProblem& pb, std::vector<double>& u, double source) {
  const Grid& g = *pb.grid;
  Vec rhs(static_cast<Eigen::Index>(pb.interior.size()));
  const double h2 = g.h() * g.h();
  for (std::size_t k = 0; k < pb.interior.size(); ++k) {
    const int i = g.i_of(pb.interior[k]);
    const int j = g.j_of(pb.interior[k]);
    double b = -source * h2;
    const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
    for (const auto& q : nb) {
      const std::size_t idx = g.index(q[0], q[1]);
      if (pb.unknown[idx] < 0) b += u[idx];
    }
    rhs[static_cast<Eigen::Index>(k)] = b;
  }
  const Vec x = pb.poisson.solve(rhs);
  for (std::size_t k = 0; k < pb.interior.size(); ++k) u[pb.interior[k]] = x[static_cast<Eigen::Index>(k)];
}

double residual(const GridProblem& pb, const std::vector<double>& u, double H, Vec& r) {
  const Grid& g = *pb.grid;
  r.resize(static_cast<Eigen::Index>(pb.interior.size()));
  double worst = 0.0;
  for (std::size_t k = 0; k < pb.interior.size(); ++k) {
    const double v =
        detail::node_residual(g, u.data(), g.i_of(pb.interior[k]), g.j_of(pb.interior[k]), H, nullptr);
    r[static_cast<Eigen::Index>(k)] = v;
    worst = std::isfinite(v) ? std::max(worst, std::abs(v)) : std::numeric_limits<double>::infinity();
  }
  return worst;
}

void jacobian(const GridProblem& pb, const std::vector<double>& u, double H, SpMat& jac,
              std::vector<Eigen::Triplet<double>>& trip) {
  const Grid& g = *pb.grid;
  trip.clear();
  for (std::size_t k = 0; k < pb.interior.size(); ++k) {
    const auto row = static_cast<Eigen::Index>(k);
    detail::node_residual(g, u.data(), g.i_of(pb.interior[k]), g.j_of(pb.interior[k]), H,
                          [&](std::size_t idx, double d) {
                            const std::ptrdiff_t c = pb.unknown[idx];
                            if (c >= 0) trip.emplace_back(row, static_cast<Eigen::Index>(c), d);
                          });
  }
  const auto n = static_cast<Eigen::Index>(pb.interior.size());
  jac.resize(n, n);
  jac.setFromTriplets(trip.begin(), trip.end());
}

double interior_max_w(const ScalarField& f) {
  const RealField w = slope_w(f);
  double m = 1.0;
  for (std::size_t idx = 0; idx < w.values.size(); ++idx) {
    if (f.grid().kind(idx) == NodeKind::interior && w.is_valid(idx)) m = std::max(m, w.values[idx]);
  }
  return m;
}

CMCSolution newton(const GridProblem& pb, const Domain& dom, const BoundaryData& data, double H,
                   const SolverConfig& cfg, std::vector<double> u) {
  CMCSolution sol{ScalarField(pb.grid, std::vector<double>(pb.grid->size(), 0.0)), H, data, 0.0, 0, false, {}};
  sol.diagnostics.serrin_violations = serrin_check(dom, H);

  Vec r;
  double rmax = residual(pb, u, H, r);
  double rnorm = r.norm();
  SpMat jac;
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu;
  bool analyzed = false;
  std::vector<double> trial(u.size());
  Vec rt;
  int it = 0;
  std::string reason;

  while (true) {
    if (rmax <= cfg.residual_tol) {
      sol.converged = true;
      reason = "residual below tolerance";
      break;
    }
    if (!std::isfinite(rmax)) {
      reason = "non-finite residual";
      break;
    }
    if (it >= cfg.max_newton_iters) {
      reason = "iteration limit";
      break;
    }
    jacobian(pb, u, H, jac, trip);
    if (!analyzed) {
      lu.analyzePattern(jac);
      analyzed = true;
    }
    lu.factorize(jac);
    if (lu.info() != Eigen::Success) {
      reason = "singular Jacobian";
      break;
    }
    Vec step = lu.solve(-r);
    // One round of iterative refinement when the direct solve is loose.
    const Vec lin = jac * step + r;
    if (lin.norm() > cfg.linear_tol * rnorm) step -= lu.solve(lin);

    double alpha = 1.0;
    bool accepted = false;
    while (alpha >= cfg.min_step) {
      trial = u;
      for (std::size_t k = 0; k < pb.interior.size(); ++k) {
        trial[pb.interior[k]] += alpha * step[static_cast<Eigen::Index>(k)];
      }
      const double tmax = residual(pb, trial, H, rt);
      const double tnorm = rt.norm();
      if (std::isfinite(tmax) && tnorm <= (1.0 - cfg.armijo * alpha) * rnorm) {
        u.swap(trial);
        r.swap(rt);
        rmax = tmax;
        rnorm = tnorm;
        accepted = true;
        break;
      }
      alpha *= cfg.backtrack;
    }
    ++it;
    if (!accepted) {
      reason = "line search stagnated";
      break;
    }
    sol.diagnostics.min_step_taken = std::min(sol.diagnostics.min_step_taken, alpha);
  }

  sol.field = ScalarField(pb.grid, std::move(u));
  sol.residual_norm = rmax;
  sol.iterations = it;
  sol.diagnostics.stop_reason = reason;
  sol.diagnostics.max_W = interior_max_w(sol.field);
  return sol;
}

}  // namespace

BoundaryData& BoundaryData::set(const std::string& tag, PieceData data) {
  std::visit(overloaded{[&](const FiniteData& d) {
                          if (!d.value) throw ConfigError("boundary data '" + tag + "': empty function");
                        },
                        [&](const RampData& d) {
                          if (!d.base) throw ConfigError("boundary data '" + tag + "': empty function");
                          if (!std::isfinite(d.scale)) throw ConfigError("boundary data '" + tag + "': scale");
                        },
                        [&](const CappedData& d) {
                          if (!std::isfinite(d.level)) {
                            throw ConfigError("boundary data '" + tag + "': cap level must be finite");
                          }
                        }},
             data);
  by_tag_[tag] = std::move(data);
  return *this;
}

const PieceData& BoundaryData::at(const std::string& tag) const {
  const auto it = by_tag_.find(tag);
  if (it == by_tag_.end()) throw ConfigError("no boundary data for tag '" + tag + "'");
  return it->second;
}

double BoundaryData::value_at(const Domain& dom, const Point2& x) const {
  const BoundaryPoint b = dom.nearest_boundary(x);
  const PieceData& d = at(dom.pieces()[b.piece].data_tag);
  const double v = std::visit(overloaded{[&](const FiniteData& f) { return f.value(x, b.s); },
                                         [&](const RampData& f) { return f.scale * f.base(x, b.s); },
                                         [&](const CappedData& f) { return f.level; }},
                              d);
  if (!std::isfinite(v)) throw ConfigError("boundary data is not finite at a ring node");
  return v;
}

void BoundaryData::check_tags(const Domain& dom) const {
  for (const BoundaryArc& piece : dom.pieces()) (void)at(piece.data_tag);
}

void SolverConfig::validate() const {
  if (!(h > 0.0) || !std::isfinite(h)) throw ParameterError("solver: h must be positive");
  if (!(residual_tol > 0.0)) throw ParameterError("solver: residual_tol must be positive");
  if (!(linear_tol > 0.0)) throw ParameterError("solver: linear_tol must be positive");
  if (max_newton_iters < 1) throw ParameterError("solver: max_newton_iters must be >= 1");
  if (!(backtrack > 0.0 && backtrack < 1.0)) throw ParameterError("solver: backtrack must lie in (0, 1)");
  if (!(min_step > 0.0 && min_step <= 1.0)) throw ParameterError("solver: min_step must lie in (0, 1]");
  if (!(armijo > 0.0 && armijo < 1.0)) throw ParameterError("solver: armijo must lie in (0, 1)");
}

CMCSolution solve_dirichlet(const Domain& dom, const BoundaryData& data, double H,
                            const SolverConfig& cfg, const ScalarField* warm_start) {
  if (!(H > 0.0) || !std::isfinite(H)) throw ParameterError("solve_dirichlet: H must be positive");
  cfg.validate();
  data.check_tags(dom);
  GridPtr grid = warm_start ? warm_start->grid_ptr() : Grid::from_domain(dom, cfg.h);
  if (warm_start && !grid->same_layout(*Grid::from_domain(dom, cfg.h))) {
    throw ConfigError("solve_dirichlet: warm start lives on a different grid");
  }
  const GridProblem pb(grid);
  std::vector<double> u = ring_values(pb, dom, data);
  if (warm_start) {
    for (const std::size_t idx : pb.interior) u[idx] = (*warm_start)[idx];
  } else {
    poisson_fill(pb, u, 2.0 * H);
  }
  return newton(pb, dom, data, H, cfg, std::move(u));
}

std::vector<CMCSolution> solve_sequence(const Domain& dom, const DataFamily& family, double H,
                                        const SolverConfig& cfg, const std::vector<double>& n_list) {
  if (!(H > 0.0) || !std::isfinite(H)) throw ParameterError("solve_sequence: H must be positive");
  cfg.validate();
  const GridProblem pb(Grid::from_domain(dom, cfg.h));
  std::vector<CMCSolution> out;
  out.reserve(n_list.size());
  std::vector<double> prev_ring;
  for (const double n : n_list) {
    const BoundaryData data = family(n);
    data.check_tags(dom);
    std::vector<double> ring = ring_values(pb, dom, data);
    std::vector<double> u = ring;
    if (out.empty()) {
      poisson_fill(pb, u, 2.0 * H);
    } else {
      std::vector<double> delta(ring.size(), kNaN);
      for (std::size_t idx = 0; idx < ring.size(); ++idx) {
        if (pb.grid->kind(idx) == NodeKind::boundary) delta[idx] = ring[idx] - prev_ring[idx];
      }
      poisson_fill(pb, delta, 0.0);
      const ScalarField& prev = out.back().field;
      for (const std::size_t idx : pb.interior) u[idx] = prev[idx] + delta[idx];
    }
    out.push_back(newton(pb, dom, data, H, cfg, std::move(u)));
    prev_ring = std::move(ring);
  }
  return out;
}

std::vector<std::size_t> serrin_check(const Domain& dom, double H) {
  std::vector<std::size_t> bad;
  const double bound = 2.0 * H * (1.0 - 1e-12);
  const auto pieces = dom.pieces();
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    if (pieces[k].exterior_curvature < bound) bad.push_back(k);
  }
  return bad;
}

}  // namespace cmclab
