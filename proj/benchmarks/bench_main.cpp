// Copyright 2026 The SGCL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <random>

#include "sgcl/contrastive.hpp"
#include "sgcl/encoder.hpp"
#include "sgcl/kernels.hpp"
#include "sgcl/neuron.hpp"
#include "sgcl/synthetic.hpp"

namespace {

sgcl::DenseMatrix uniform(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  sgcl::DenseMatrix m(r, c);
  for (float& v : m.storage()) v = u(rng);
  return m;
}

sgcl::BitMatrix bits(std::size_t r, std::size_t c, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution b(p);
  sgcl::BitMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m.set(i, j, b(rng));
  return m;
}

void BM_Spmm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto g = sgcl::random_bounded_degree_graph(n, 16, n * 4, 1);
  const auto coeffs = sgcl::sym_norm_coeffs(g);
  const auto x = uniform(n, 32, 2);
  for (auto _ : state) benchmark::DoNotOptimize(sgcl::spmm(coeffs, g, x));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.num_directed_edges() * 32));
}
BENCHMARK(BM_Spmm)->Arg(1000)->Arg(10000);

void BM_NeuronStep(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  sgcl::NeuronConfig cfg;
  cfg.kind = sgcl::NeuronKind::kLIF;
  cfg.tau_m = 2.0f;
  const auto s = sgcl::make_state(n, 64, cfg);
  const auto in = uniform(n, 64, 3);
  for (auto _ : state) benchmark::DoNotOptimize(sgcl::neuron_step(s, in));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * 64));
}
BENCHMARK(BM_NeuronStep)->Arg(1000)->Arg(10000);

void BM_MaskedSummation(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto z = bits(2000, k, 0.1, 4);
  const auto p = sgcl::init_predictor(k, 5);
  for (auto _ : state) benchmark::DoNotOptimize(sgcl::predictor_score(z, p));
}
BENCHMARK(BM_MaskedSummation)->Arg(64)->Arg(256)->Arg(1024);

void BM_DenseScore(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto z = sgcl::unpack(bits(2000, k, 0.1, 4));
  const auto p = sgcl::init_predictor(k, 5);
  for (auto _ : state) benchmark::DoNotOptimize(sgcl::matmul(z, p.w.value));
}
BENCHMARK(BM_DenseScore)->Arg(64)->Arg(256)->Arg(1024);

void BM_PackEmbeddings(benchmark::State& state) {
  const auto z = bits(static_cast<std::size_t>(state.range(0)), 256, 0.2, 6);
  for (auto _ : state) benchmark::DoNotOptimize(sgcl::serialize_embeddings(z, 32, 8));
  state.SetBytesProcessed(state.iterations() * state.range(0) * 32);
}
BENCHMARK(BM_PackEmbeddings)->Arg(1000)->Arg(10000);

}  // namespace

BENCHMARK_MAIN();
