// Parallel kernels against their serial reference paths.
// Arg 0 = serial, 1 = OpenMP.
#include "ipl/lpp_exp.hpp"
#include "ipl/lpp_geom.hpp"
#include "ipl/prelimit.hpp"
#include "ipl/simulate.hpp"
#include "ipl/whittaker.hpp"

#include <benchmark/benchmark.h>

using namespace ipl;

static void BM_F1Nystrom(benchmark::State& st) {
  NystromConfig c;
  c.nodes = 48;
  c.parallel = st.range(0);
  for (auto _ : st) benchmark::DoNotOptimize(f1_value(-1.0, c).value);
}
BENCHMARK(BM_F1Nystrom)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_Airy21Nystrom(benchmark::State& st) {
  NystromConfig c;
  c.parallel = st.range(0);
  for (auto _ : st) benchmark::DoNotOptimize(f21_value(0.0, c).value);
}
BENCHMARK(BM_Airy21Nystrom)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_PrelimitIid(benchmark::State& st) {
  auto s = iid_exp_spec(Geometry::HalfFlat, 32, 0.5);
  NystromConfig c;
  c.parallel = st.range(0);
  for (auto _ : st) benchmark::DoNotOptimize(prelimit_cdf(s, 128.0, KernelMethod::ContourQuadrature, c).value);
}
BENCHMARK(BM_PrelimitIid)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_MonteCarloExp(benchmark::State& st) {
  SimConfig c;
  c.samples = 200000;
  c.env = iid_exp_spec(Geometry::Flat, 4, 0.5);
  c.points = {8.0, 12.0};
  c.parallel = st.range(0);
  for (auto _ : st) benchmark::DoNotOptimize(estimate(c).front().value);
}
BENCHMARK(BM_MonteCarloExp)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_GeomCurve(benchmark::State& st) {
  GeomEnvSpec s;
  s.geometry = Geometry::Flat;
  s.N = 3;
  s.q = {ratio(1, 2), ratio(1, 3), ratio(2, 5)};
  s.p = {ratio(1, 4), ratio(2, 3), ratio(1, 5)};
  for (auto _ : st) benchmark::DoNotOptimize(cdf_geom_curve(s, 10, st.range(0)).size());
}
BENCHMARK(BM_GeomCurve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_ExpCurve(benchmark::State& st) {
  auto s = iid_exp_spec(Geometry::Flat, 24, 0.5);
  std::vector<double> us;
  for (int k = 0; k < 16; ++k) us.push_back(80 + 2 * k);
  for (auto _ : st) benchmark::DoNotOptimize(cdf_exp_curve(s, us, ExpMethod::Automatic, st.range(0)).size());
}
BENCHMARK(BM_ExpCurve)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

static void BM_Whittaker(benchmark::State& st) {
  WhittakerQuad q;
  q.parallel = st.range(0);
  for (auto _ : st) benchmark::DoNotOptimize(gl_whittaker({0.3, -0.1, -0.2}, {1.2, 0.8, 1.5}, q));
}
BENCHMARK(BM_Whittaker)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
