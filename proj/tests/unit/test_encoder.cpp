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

#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "scratch.hpp"
#include "sgcl/encoder.hpp"
#include "sgcl/error.hpp"
#include "sgcl/synthetic.hpp"

using namespace sgcl;

namespace {

BitMatrix random_bits(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BitMatrix b(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) b.set(i, j, rng() & 1u);
  return b;
}

std::vector<std::pair<int, int>> edge_list(const CsrGraph& g) {
  std::vector<std::pair<int, int>> e;
  for (std::size_t u = 0; u < g.num_nodes; ++u)
    for (auto v : g.neighbors(static_cast<NodeId>(u))) e.emplace_back(int(u), int(v));
  return e;
}

NeuronConfig if_neuron(float vth) {
  NeuronConfig n;
  n.kind = NeuronKind::kIF;
  n.v_threshold = vth;
  return n;
}

}  // namespace

TEST_SUITE("encoder") {

TEST_CASE("feature partition") {
  using V = std::vector<std::size_t>;
  CHECK(group_widths(6, 3) == V{2, 2, 2});
  CHECK(group_widths(7, 3) == V{2, 2, 3});
  CHECK(group_widths(5, 1) == V{5});
  CHECK(group_widths(4, 4) == V{1, 1, 1, 1});
  try {
    group_widths(3, 4);
    FAIL("expected argument error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kArgument);
  }
  CHECK_THROWS_AS(group_widths(3, 0), Error);

  const auto x = oracle::random_matrix(5, 7, 1);
  const auto fg = partition_features(x, 3);
  CHECK(fg.steps() == 3);
  CHECK(fg.groups[1](2, 0) == x(2, 2));
  CHECK(fg.groups[2](4, 2) == x(4, 6));
  CHECK(merge_groups(fg) == x);
  CHECK(partition_features(x, 1).groups[0] == x);
}

TEST_CASE("zero features never fire") {
  auto g = erdos_renyi(12, 0.3, 2);
  g.features = DenseMatrix(12, 6);
  const auto p = init_encoder(group_widths(6, 3), 4, 2, NeuronConfig{}, 3);
  const auto train = encode(g, sym_norm_coeffs(g), partition_features(g.features, 3), p);
  for (auto c : train.spike_counts()) CHECK(c == 0);
}

TEST_CASE("single-layer step on one edge") {
  const std::vector<std::pair<NodeId, NodeId>> e{{0, 1}};
  const auto g = build_graph(2, e, DenseMatrix(2, 1, {1.0f, 0.0f}));
  auto p = init_encoder(std::vector<std::size_t>{1}, 1, 1, if_neuron(0.4f), 0);
  p.first_weights[0].value(0, 0) = 1.0f;
  const auto step = encode_step(g, sym_norm_coeffs(g), g.features, p, 0,
                                make_state(2, 1, p.neuron));
  CHECK(step.hidden(0, 0) == doctest::Approx(0.5));
  CHECK(step.hidden(1, 0) == doctest::Approx(0.5));
  CHECK(step.spikes.get(0, 0));
  CHECK(step.spikes.get(1, 0));
  CHECK(step.state.potential(0, 0) == doctest::Approx(0.1));
}

TEST_CASE("step forward matches a dense recomputation") {
  for (std::size_t depth : {1u, 2u, 3u}) {
    const auto g0 = erdos_renyi(10, 0.3, depth);
    const auto a = oracle::normalized_adjacency(10, edge_list(g0));
    const auto x = oracle::random_matrix(10, 6, 4);
    auto gg = g0;
    gg.features = x;
    auto p = init_encoder(group_widths(6, 2), 5, depth, if_neuron(0.1f), 9);
    p.first_bias[1].value = oracle::random_matrix(1, 5, 10);
    const auto fg = partition_features(x, 2);
    const auto step = encode_step(gg, sym_norm_coeffs(gg), fg.groups[1], p, 1,
                                  make_state(10, 5, p.neuron));
    auto h = oracle::matmul(a, oracle::matmul(oracle::from(fg.groups[1]),
                                              oracle::from(p.first_weights[1].value)));
    for (auto& row : h)
      for (std::size_t j = 0; j < row.size(); ++j) row[j] += p.first_bias[1].value(0, j);
    for (std::size_t l = 1; l < depth; ++l) {
      for (auto& row : h)
        for (auto& v : row) v = std::max(v, 0.0);
      h = oracle::matmul(a, oracle::matmul(h, oracle::from(p.shared_weights[l - 1].value)));
    }
    CHECK(oracle::max_abs_diff(h, step.hidden) < 1e-5);
    for (std::size_t i = 0; i < 10; ++i)
      for (std::size_t j = 0; j < 5; ++j)
        CHECK(step.spikes.get(i, j) == (h[i][j] >= 0.1));
  }
}

TEST_CASE("step backward matches finite differences") {
  for (std::size_t depth : {1u, 2u, 3u}) {
    auto g = erdos_renyi(8, 0.4, 20 + depth);
    g.features = oracle::random_matrix(8, 4, 21, 0.1f, 1.0f);
    const auto coeffs = sym_norm_coeffs(g);
    auto p = init_encoder(group_widths(4, 2), 3, depth, if_neuron(1.0f), 22);
    const auto fg = partition_features(g.features, 2);
    const auto state = make_state(8, 3, p.neuron);
    const auto c = oracle::random_matrix(8, 3, 23);
    auto loss = [&] {
      const auto s = encode_step(g, coeffs, fg.groups[0], p, 0, state);
      double acc = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i)
        acc += static_cast<double>(s.hidden.data()[i]) * c.data()[i];
      return acc;
    };
    const auto step = encode_step(g, coeffs, fg.groups[0], p, 0, state);
    for (auto& w : p.first_weights) w.zero_grad();
    for (auto& b : p.first_bias) b.zero_grad();
    for (auto& w : p.shared_weights) w.zero_grad();
    encoder_step_backward(g, coeffs, p, 0, step.cache, c);
    const float eps = 1e-3f;
    CHECK(oracle::rel_error(oracle::flat(p.first_weights[0].grad),
                            oracle::finite_diff(p.first_weights[0].value, loss, eps)) < 2e-3);
    CHECK(oracle::rel_error(oracle::flat(p.first_bias[0].grad),
                            oracle::finite_diff(p.first_bias[0].value, loss, eps)) < 2e-3);
    for (auto& w : p.shared_weights)
      CHECK(oracle::rel_error(oracle::flat(w.grad), oracle::finite_diff(w.value, loss, eps)) <
            2e-3);
    // Untouched step keeps a zero gradient.
    CHECK(frobenius_norm(p.first_weights[1].grad) == 0.0);
  }
}

TEST_CASE("encode checks its inputs") {
  auto g = erdos_renyi(4, 0.5, 1);
  g.features = oracle::random_matrix(4, 6, 1);
  const auto p = init_encoder(group_widths(6, 3), 2, 1, NeuronConfig{}, 0);
  CHECK_THROWS_AS(encode(g, sym_norm_coeffs(g), partition_features(g.features, 2), p), Error);
  const auto fg = partition_features(oracle::random_matrix(4, 9, 1), 3);
  CHECK_THROWS_AS(encode(g, sym_norm_coeffs(g), fg, p), Error);
}

TEST_CASE("concatenate pooling") {
  SpikeTrain one;
  one.steps.push_back(random_bits(5, 7, 1));
  CHECK(concat_pool(one) == one.steps[0]);

  SpikeTrain two;
  BitMatrix ones(3, 4);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 4; ++j) ones.set(i, j, true);
  two.steps = {ones, BitMatrix(3, 4)};
  const auto z = concat_pool(two);
  REQUIRE(z.cols() == 8);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 8; ++j) CHECK(z.get(i, j) == (j < 4));

  SpikeTrain many;
  for (std::uint64_t t = 0; t < 5; ++t) many.steps.push_back(random_bits(4, 30, t));
  const auto zz = concat_pool(many);
  for (std::size_t t = 0; t < 5; ++t)
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 30; ++j) CHECK(zz.get(i, t * 30 + j) == many.steps[t].get(i, j));
}

TEST_CASE("pack and unpack round trip") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto b = random_bits(7, 1 + seed * 37, seed);
    CHECK(pack(unpack(b)) == b);
    std::vector<std::uint8_t> bytes;
    BitMatrix back(7, b.cols());
    for (std::size_t r = 0; r < 7; ++r) {
      bytes.clear();
      b.write_row_bytes(r, bytes);
      CHECK(bytes.size() == (b.cols() + 7) / 8);
      back.read_row_bytes(r, bytes);
    }
    CHECK(back == b);
  }
}

TEST_CASE("firing rate") {
  SpikeTrain train;
  for (std::size_t t = 0; t < 12; ++t) {
    BitMatrix s(1, 3);
    s.set(0, 0, true);
    s.set(0, 1, t % 4 == 0);
    train.steps.push_back(s);
  }
  const auto rate = firing_rate(train);
  CHECK(rate(0, 0) == 1.0f);
  CHECK(rate(0, 1) == doctest::Approx(0.25));
  CHECK(rate(0, 2) == 0.0f);
  CHECK_THROWS_AS(firing_rate(SpikeTrain{}), Error);
}

TEST_CASE("embedding file") {
  const std::size_t t = 3, k = 5, n = 11;
  const auto z = random_bits(n, t * k, 4);
  const auto bytes = serialize_embeddings(z, t, k);
  CHECK(bytes.size() == kEmbeddingHeaderBytes + n * ((t * k + 7) / 8));
  CHECK(kEmbeddingHeaderBytes == 21);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "SGCB");

  ScratchDir dir("emb");
  write_embeddings(dir / "z.sgcb", z, t, k);
  const auto f = read_embeddings(dir / "z.sgcb");
  CHECK(f.t == t);
  CHECK(f.k == k);
  CHECK(f.z == z);

  CHECK_THROWS_AS(serialize_embeddings(z, 2, k), Error);
  auto cut = bytes;
  cut.pop_back();
  CHECK_THROWS_AS(deserialize_embeddings(cut), Error);
}

}  // TEST_SUITE
