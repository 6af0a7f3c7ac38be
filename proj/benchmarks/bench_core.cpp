// Timings for the hot paths of a verification run: chart curvature, the
// Hodge Laplacian and the Weitzenboeck operator, quadrature, and one full scenario.

#include <benchmark/benchmark.h>

#include "bochner/curvature.hpp"
#include "bochner/random_fields.hpp"
#include "bochner/verification.hpp"

using namespace bochner;

namespace {

struct Setup {
  Manifold m;
  PStructure ps;
  Geometry geo;
  Setup(const char* fixture, const char* p, const char* k, Backend b = Backend::analytic)
      : m(ManifoldRegistry::builtin().get(fixture)),
        ps(make_structure(m, parse_named_spec(p), parse_named_spec(k), Diff{b})),
        geo(m, ps, Diff{b}) {}
};

void BM_Riemann(benchmark::State& st) {
  const Manifold m = ManifoldRegistry::builtin().get("S2-round");
  const Diff diff{st.range(0) ? Backend::fd : Backend::analytic};
  const auto p = make_point({0.9, 1.3});
  for (auto _ : st) benchmark::DoNotOptimize(riemann(m, diff, p));
}
BENCHMARK(BM_Riemann)->Arg(0)->Arg(1);

void BM_HodgeLaplacian(benchmark::State& st) {
  Setup s("T2-flat", "P-id", "K-cubic(1,0)", st.range(0) ? Backend::fd : Backend::analytic);
  Rng rng(3);
  const RandomForm w = RandomForm::draw(s.m, 1, rng);
  const auto p = make_point({0.4, 2.2});
  for (auto _ : st) benchmark::DoNotOptimize(laplacian(s.geo, w, p));
}
BENCHMARK(BM_HodgeLaplacian)->Arg(0)->Arg(1);

void BM_WeitzenbockMatrix(benchmark::State& st) {
  Setup s("T3-flat", "P-id", "K-cubic(1,0.5)");
  const auto p = make_point({0.3, 1.1, 4.0});
  const int k = static_cast<int>(st.range(0));
  for (auto _ : st) benchmark::DoNotOptimize(weitzenbock_matrix(s.geo, p, k));
}
BENCHMARK(BM_WeitzenbockMatrix)->Arg(1)->Arg(2);

void BM_Integrate(benchmark::State& st) {
  Setup s("S2-round", "P-id", "K-0");
  Rng rng(5);
  const RandomVector X = RandomVector::draw(s.m, rng);
  const int G = static_cast<int>(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(integrate(s.m, [&](const Point<double>& p) { return div_P(s.geo, X, p); }, G));
}
BENCHMARK(BM_Integrate)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Scenario(benchmark::State& st) {
  Scenario sc = parse_scenario("T2-flat:P-id:K-cubic(1,0)");
  sc.grid = static_cast<int>(st.range(0));
  sc.seed = 1;
  const Tolerances tol;
  for (auto _ : st) benchmark::DoNotOptimize(run_scenario(sc, tol, ManifoldRegistry::builtin()));
}
BENCHMARK(BM_Scenario)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond)->Iterations(2);

}  // namespace

BENCHMARK_MAIN();
