// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "hyperred/interp_hr.hpp"
#include "hyperred/numerics.hpp"

using namespace hyperred;

namespace {

ForceBasis random_basis(Index n, Index r_f, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> dist;
  Matrix g(n, r_f);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < r_f; ++j) g(i, j) = dist(gen);
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  return ForceBasis{Matrix(qr.householderQ()).leftCols(r_f), Vector::Ones(r_f)};
}

void run_sampler_bench(benchmark::State& state, SamplerKind kind) {
  const Index n = state.range(0);
  const Index r_f = 8;
  const Index n_f = 2 * r_f;
  const ForceBasis xi = random_basis(n, r_f, 42);
  for (auto _ : state) {
    auto z = run_sampler(kind, xi, n_f);
    benchmark::DoNotOptimize(z.indices.data());
  }
  state.SetComplexityN(n);
}

}  // namespace

static void DeimOversampled(benchmark::State& state) {
  run_sampler_bench(state, SamplerKind::deim);
}
BENCHMARK(DeimOversampled)->RangeMultiplier(2)->Range(64, 512)->Complexity();

static void GappyPodE(benchmark::State& state) {
  run_sampler_bench(state, SamplerKind::qdeim_e);
}
BENCHMARK(GappyPodE)->RangeMultiplier(2)->Range(64, 512)->Complexity();

static void SOpt(benchmark::State& state) {
  run_sampler_bench(state, SamplerKind::sopt);
}
BENCHMARK(SOpt)->RangeMultiplier(2)->Range(64, 512)->Complexity();
