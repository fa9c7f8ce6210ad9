#include <benchmark/benchmark.h>
#include <omp.h>

#include <random>

#include "darboux/catalog.hpp"
#include "darboux/flow.hpp"
#include "darboux/quadric_dynamics.hpp"
#include "darboux/ridges.hpp"

using namespace darboux;

namespace {

std::shared_ptr<const QuadricSurface> ellipsoid() {
  QuadricSpec s;
  s.kind = QuadricKind::Ellipsoid;
  s.a = 3;
  s.b = 2;
  s.c = 1;
  s.chart = QuadricChart::Global;
  return make_quadric(s);
}

std::vector<DarbouxState> starts(const Surface& s, int n) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.05, 0.95);
  const Domain d = s.scan_domain();
  std::vector<DarbouxState> out;
  for (int i = 0; i < n; ++i) out.push_back({d.u_min + U(rng) * d.u_span(), d.v_min + U(rng) * d.v_span(), 3 * U(rng)});
  return out;
}

int threads() { return std::max(1, omp_get_max_threads()); }

void BM_integrate_serial(benchmark::State& st) {
  const auto q = ellipsoid();
  const auto x0 = starts(*q, 16);
  IntegratorParams p;
  p.max_arc_length = 5;
  for (auto _ : st) benchmark::DoNotOptimize(integrate_batch_serial(*q, x0, p));
}

void BM_integrate_parallel(benchmark::State& st) {
  const auto q = ellipsoid();
  const auto x0 = starts(*q, 16);
  IntegratorParams p;
  p.max_arc_length = 5;
  for (auto _ : st) benchmark::DoNotOptimize(integrate_batch(*q, x0, p, threads()));
}

void BM_ridges_serial(benchmark::State& st) {
  const auto q = ellipsoid();
  RidgeScanParams p;
  p.lines = 32;
  p.samples = 128;
  for (auto _ : st) benchmark::DoNotOptimize(ridge_locus_serial(*q, Foliation::P1, p));
}

void BM_ridges_parallel(benchmark::State& st) {
  const auto q = ellipsoid();
  RidgeScanParams p;
  p.lines = 32;
  p.samples = 128;
  p.jobs = threads();
  for (auto _ : st) benchmark::DoNotOptimize(ridge_locus(*q, Foliation::P1, p));
}

std::vector<PoincareParams> poincare_levels() {
  std::vector<PoincareParams> ps;
  for (double l : {2.1, 2.3, 2.5, 2.7}) {
    PoincareParams p;
    p.lambda = l;
    p.iterates = 100;
    ps.push_back(p);
  }
  return ps;
}

void BM_poincare_serial(benchmark::State& st) {
  const auto q = ellipsoid();
  const auto ps = poincare_levels();
  for (auto _ : st) benchmark::DoNotOptimize(poincare_batch(*q, ps, 1));
}

void BM_poincare_parallel(benchmark::State& st) {
  const auto q = ellipsoid();
  const auto ps = poincare_levels();
  for (auto _ : st) benchmark::DoNotOptimize(poincare_batch(*q, ps, threads()));
}

}  // namespace

BENCHMARK(BM_integrate_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_integrate_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_ridges_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ridges_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_poincare_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_poincare_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
