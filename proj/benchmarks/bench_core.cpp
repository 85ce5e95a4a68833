// Hot-path benchmarks: simplification, differentiation, curvature
// construction, compiled evaluation, and geodesic integration.

#include <benchmark/benchmark.h>

#include <gtd/calculus.hpp>
#include <gtd/compiled.hpp>
#include <gtd/geodesic.hpp>
#include <gtd/geometry.hpp>
#include <gtd/parse.hpp>
#include <gtd/simplify.hpp>
#include <gtd/vdw.hpp>

namespace {

const gtd::VdwParams kParams{1.0, 0.05, 1.0};

void BM_Simplify(benchmark::State& state) {
  const gtd::Expression e = gtd::parse(
      "((U*V + 1)^2 * (V - 1) - (U*V + 1) * (U*V*(V - 1)))"
      " / ((U*V + 1)^2 * (V - 1)^2) + 3/2 * 1/(U + 1/V)");
  for (auto _ : state) benchmark::DoNotOptimize(gtd::simplify(e));
}
BENCHMARK(BM_Simplify);

void BM_Differentiate(benchmark::State& state) {
  const gtd::Expression phi = gtd::vdw_system(kParams).potential;
  for (auto _ : state) {
    const gtd::Expression d =
        gtd::differentiate(gtd::differentiate(phi, "U"), "V");
    benchmark::DoNotOptimize(gtd::simplify(d));
  }
}
BENCHMARK(BM_Differentiate);

void BM_RiemannVdw(benchmark::State& state) {
  const gtd::MetricField g = gtd::vdw_metric_closed(kParams);
  for (auto _ : state) benchmark::DoNotOptimize(gtd::riemann(g));
}
BENCHMARK(BM_RiemannVdw)->Unit(benchmark::kMillisecond);

void BM_ScalarEvalTree(benchmark::State& state) {
  const gtd::CurvatureField curv =
      gtd::riemann(gtd::vdw_metric_closed(kParams));
  const gtd::Bindings at = gtd::bind(curv.chart(), {2.0, 3.0});
  for (auto _ : state)
    benchmark::DoNotOptimize(gtd::evaluate(curv.scalar(), at));
}
BENCHMARK(BM_ScalarEvalTree);

void BM_ScalarEvalCompiled(benchmark::State& state) {
  const gtd::CurvatureField curv =
      gtd::riemann(gtd::vdw_metric_closed(kParams));
  const gtd::CompiledExpr f(curv.scalar(), {"U", "V"});
  const double args[2] = {2.0, 3.0};
  for (auto _ : state) benchmark::DoNotOptimize(f(args));
}
BENCHMARK(BM_ScalarEvalCompiled);

void BM_GeodesicShot(benchmark::State& state) {
  gtd::GeodesicProblem prob;
  prob.metric = gtd::vdw_metric_closed(kParams);
  prob.initial = {50.0, 0.1, 0.0, 1.0};
  prob.domain = [](double U, double V) {
    return V > kParams.b && U + kParams.a / V > 0.0;
  };
  prob.guard = [](double U, double V) {
    return gtd::curvature_denominator(U, V, kParams);
  };
  const gtd::GeodesicRhs rhs(prob.metric);
  for (auto _ : state)
    benchmark::DoNotOptimize(gtd::integrate(rhs, prob));
}
BENCHMARK(BM_GeodesicShot)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
