#include <benchmark/benchmark.h>

#include <relcomp/comparison.hpp>
#include <relcomp/covariance.hpp>
#include <relcomp/discrepancy.hpp>
#include <relcomp/kernels.hpp>
#include <relcomp/models.hpp>
#include <relcomp/problems.hpp>
#include <relcomp/selective_inference.hpp>

using namespace relcomp;

namespace {

Sample normal(long n, long d, std::uint64_t seed, double shift = 0.0) {
  return gaussian_sample(GaussianSpec::isotropic(Vector::Constant(d, shift)), static_cast<std::size_t>(n), seed);
}

void BM_Gram(benchmark::State& state) {
  const Sample x = normal(state.range(0), 10, 1);
  const auto k = KernelSpec::gaussian(3.0);
  for (auto _ : state) benchmark::DoNotOptimize(gram(k, x, x));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Gram)->RangeMultiplier(2)->Range(250, 2000)->Complexity(benchmark::oNSquared);

void BM_MmdComplete(benchmark::State& state) {
  const Sample x = normal(state.range(0), 10, 1, 0.5), y = normal(state.range(0), 10, 2);
  const auto k = KernelSpec::gaussian(3.0);
  for (auto _ : state) benchmark::DoNotOptimize(mmd2_u_complete(k, x, y));
}
BENCHMARK(BM_MmdComplete)->RangeMultiplier(2)->Range(250, 2000);

void BM_MmdLinear(benchmark::State& state) {
  const Sample x = normal(state.range(0), 10, 1, 0.5), y = normal(state.range(0), 10, 2);
  const auto k = KernelSpec::gaussian(3.0);
  for (auto _ : state) benchmark::DoNotOptimize(mmd2_u_linear(k, x, y));
}
BENCHMARK(BM_MmdLinear)->RangeMultiplier(4)->Range(1000, 64000);

void BM_KsdComplete(benchmark::State& state) {
  const Sample x = normal(state.range(0), 10, 1);
  const auto score = make_gaussian_score(GaussianSpec::isotropic(Vector::Constant(10, 0.5)));
  const auto k = KernelSpec::gaussian(3.0);
  for (auto _ : state) benchmark::DoNotOptimize(ksd2_u_complete(k, score, x));
}
BENCHMARK(BM_KsdComplete)->RangeMultiplier(2)->Range(250, 2000);

void BM_KsdImq(benchmark::State& state) {
  const Sample x = normal(state.range(0), 10, 1);
  const auto score = make_gaussian_score(GaussianSpec::isotropic(Vector::Zero(10)));
  const auto k = KernelSpec::imq(1.0, -0.5);
  for (auto _ : state) benchmark::DoNotOptimize(ksd2_u_complete(k, score, x));
}
BENCHMARK(BM_KsdImq)->Arg(1000);

void BM_MmdDiscrepancyVector(benchmark::State& state) {
  const long n = state.range(0);
  const Sample y = normal(n, 10, 1);
  const std::vector<Sample> models{normal(n, 10, 2, 0.5), normal(n, 10, 3, -0.5)};
  const auto k = KernelSpec::gaussian(3.0);
  for (auto _ : state) benchmark::DoNotOptimize(mmd_discrepancy_vector(k, DiscrepancyKind::MmdComplete, models, y));
}
BENCHMARK(BM_MmdDiscrepancyVector)->Arg(500)->Arg(1000);

void BM_RelPsiTenModels(benchmark::State& state) {
  const auto p = make_problem("mean_shift_l10");
  const auto data = draw_trial(p, DiscrepancyKind::KsdComplete, static_cast<std::size_t>(state.range(0)), 1);
  const auto k = KernelSpec::gaussian(3.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(rel_psi(data.models, data.reference, k, DiscrepancyKind::KsdComplete, 0.05));
}
BENCHMARK(BM_RelPsiTenModels)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_TruncnormQuantile(benchmark::State& state) {
  const TruncatedNormal tn{0.0, 1.0, 6.0, std::numeric_limits<double>::infinity()};
  double q = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(truncnorm_quantile(tn, q));
    q = q < 0.98 ? q + 0.01 : 0.01;
  }
}
BENCHMARK(BM_TruncnormQuantile);

void BM_RbmSample(benchmark::State& state) {
  const auto spec = random_rbm(20, 5, 1);
  for (auto _ : state) benchmark::DoNotOptimize(rbm_sample(spec, 1000, 2, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_RbmSample)->Arg(200)->Arg(2000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
