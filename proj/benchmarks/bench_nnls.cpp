// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <random>

#include "hyperred/nnls.hpp"

using namespace hyperred;

static void NnlsLawsonHanson(benchmark::State& state) {
  const Index rows = state.range(0);
  const Index cols = 2 * rows;
  std::mt19937 gen(7);
  std::normal_distribution<double> dist;
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) a(i, j) = dist(gen);
  }
  Vector rho = Vector::Ones(cols);
  Vector b = a * rho;
  for (auto _ : state) {
    auto res = nnls_lawson_hanson(a, b, 1e-6);
    benchmark::DoNotOptimize(res.x.data());
  }
  state.SetComplexityN(rows);
}
BENCHMARK(NnlsLawsonHanson)->RangeMultiplier(2)->Range(16, 128)->Complexity();
