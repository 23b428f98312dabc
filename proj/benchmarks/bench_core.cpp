#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include "biortho/counting/counting.hpp"
#include "biortho/gram/gram.hpp"
#include "biortho/guichal/guichal.hpp"
#include "biortho/sai/sai.hpp"
#include "biortho/spectra/gaps.hpp"

using namespace biortho;

namespace {

sai::CalibrationConstants fixed_constants() {
  sai::CalibrationConstants c;
  c.theta0 = 16.0;
  c.theta1 = 3.5898755704777172;
  c.theta2 = 1.5162560428865945;
  c.C_u_growth = 4.4086617047946799;
  c.theta3 = 128.0 * c.theta0 * c.C_u_growth * c.C_u_growth / (c.theta1 * c.theta1);
  c.theorem_C = 234.85042016646099;
  return c;
}

}  // namespace

static void BM_GramDistance(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const spectra::Spectrum s = spectra::gen_quadratic(1, 0, 0, N);
  PrecisionContext ctx;
  ctx.working_digits = 100;
  for (auto _ : state) benchmark::DoNotOptimize(gram::distance(s, 0.1, 1, ctx));
  state.SetComplexityN(N);
}
BENCHMARK(BM_GramDistance)->RangeMultiplier(2)->Range(10, 160)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_BestLowerBound(benchmark::State& state) {
  const spectra::Spectrum s = spectra::gen_quadratic(1, 0, 0, 40);
  for (auto _ : state) benchmark::DoNotOptimize(guichal::best_lower_bound(s, 0.25, 3, 3, 39));
}
BENCHMARK(BM_BestLowerBound)->Unit(benchmark::kMillisecond);

static void BM_CosineProductImag(benchmark::State& state) {
  const sai::CalibrationConstants cal = fixed_constants();
  const sai::MollifierParams p = sai::choose_params(1.0, 1.0, cal);
  const sai::CosineProduct P(p.C_const, p.N_prime);
  double y = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(P.log_P_imag(y));
    y = y < 1e7 ? y * 1.37 : 1.0;
  }
}
BENCHMARK(BM_CosineProductImag);

static void BM_Mollifier(benchmark::State& state) {
  const sai::MollifierParams p = sai::choose_params(1.0, 1.0, fixed_constants());
  double x = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sai::log_mollifier(p, {x, 0.3 * x}));
    x = x < 1e6 ? x * 1.21 : 1.0;
  }
}
BENCHMARK(BM_Mollifier);

static void BM_Weierstrass(benchmark::State& state) {
  const spectra::Spectrum s = spectra::gen_quadratic(1, 0, 0, static_cast<int>(state.range(0)));
  const spectra::GapProfile p = spectra::analyze_gaps(s, 1);
  double x = 1.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sai::log_weierstrass(s, p, 2, {x, 0.0}));
    x = x < 1e5 ? x * 1.5 : 1.0;
  }
}
BENCHMARK(BM_Weierstrass)->Arg(100)->Arg(400)->Arg(1600);

static void BM_SaiNorm(benchmark::State& state) {
  const spectra::Spectrum s = spectra::gen_quadratic(1, 0, 0, 400);
  const spectra::GapProfile p = spectra::analyze_gaps(s, 1);
  const double T = state.range(0) / 100.0;
  const sai::MollifierParams params = sai::choose_params(T, p.gamma_min_star, fixed_constants());
  for (auto _ : state) benchmark::DoNotOptimize(sai::sai_norm(s, p, 1, T, params));
}
BENCHMARK(BM_SaiNorm)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_CountingCheck(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const spectra::Spectrum s = spectra::gen_quadratic(1, 0.6, 0.09, N);
  const spectra::GapProfile p = spectra::analyze_gaps(s, 3);
  std::vector<double> grid;
  for (int i = 0; i < 50; ++i) grid.push_back(0.1 * std::pow(1e4, i / 49.0));
  for (auto _ : state) benchmark::DoNotOptimize(counting::check_counting_lemmas(s, p, grid));
  state.SetComplexityN(N);
}
BENCHMARK(BM_CountingCheck)->RangeMultiplier(2)->Range(32, 256)->Complexity();

BENCHMARK_MAIN();
