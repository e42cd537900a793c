#include <benchmark/benchmark.h>

#include "cmclab/barrier.hpp"
#include "cmclab/field.hpp"
#include "cmclab/solver.hpp"

using namespace cmclab;

namespace {

ScalarField hemisphere_field(double h) {
  const HemisphereSolution hs(1.0);
  return ScalarField::sample(Grid::from_domain(make_disk({}, 0.5), h),
                             [&](const Point2& p) { return hemisphere_eval(hs, p); });
}

void BM_Residual(benchmark::State& state) {
  const ScalarField f = hemisphere_field(1.0 / static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(residual_cmc(f, 1.0));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(f.grid().count(NodeKind::interior)));
}
BENCHMARK(BM_Residual)->Arg(64)->Arg(128)->Arg(256);

void BM_NewtonSolve(benchmark::State& state) {
  const Domain dom = make_disk({}, 0.5);
  const HemisphereSolution hs(1.0);
  BoundaryData data;
  data.set("boundary", FiniteData{[hs](const Point2& x, double) { return hemisphere_eval(hs, x); }});
  SolverConfig cfg;
  cfg.h = 1.0 / static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_dirichlet(dom, data, 1.0, cfg));
}
BENCHMARK(BM_NewtonSolve)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_LineIntegral(benchmark::State& state) {
  const ScalarField f = hemisphere_field(1.0 / 256.0);
  const FluxForm w = flux_form(f);
  const Curve c = Curve::from_arc(CircleArc::circle({}, 0.3), 1.0 / 512.0);
  for (auto _ : state) benchmark::DoNotOptimize(line_integral(w, c));
}
BENCHMARK(BM_LineIntegral);

void BM_BarrierEval(benchmark::State& state) {
  const UnduloidBarrier b(0.5, 0.45);
  double r = b.r1();
  const double dr = (b.r2() - b.r1()) / 1000.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval(b, r));
    r += dr;
    if (r > b.r2()) r = b.r1();
  }
}
BENCHMARK(BM_BarrierEval);

}  // namespace

BENCHMARK_MAIN();
