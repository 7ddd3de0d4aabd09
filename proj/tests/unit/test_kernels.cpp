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

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "scratch.hpp"
#include "sgcl/checkpoint.hpp"
#include "sgcl/error.hpp"
#include "sgcl/kernels.hpp"
#include "sgcl/optim.hpp"
#include "sgcl/parallel.hpp"
#include "sgcl/synthetic.hpp"

using namespace sgcl;

namespace {

double weighted_sum(const DenseMatrix& out, const DenseMatrix& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i)
    s += static_cast<double>(out.data()[i]) * c.data()[i];
  return s;
}

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("spmm hand cases") {
  SUBCASE("isolated nodes pass through") {
    const auto g = build_graph(3, {}, DenseMatrix(3, 2));
    const auto x = oracle::random_matrix(3, 2, 1);
    CHECK(spmm(sym_norm_coeffs(g), g, x) == x);
  }
  SUBCASE("two nodes, one edge") {
    const std::vector<std::pair<NodeId, NodeId>> e{{0, 1}};
    const auto g = build_graph(2, e, DenseMatrix(2, 1));
    const DenseMatrix x(2, 1, {1.0f, 0.0f});
    const auto out = spmm(sym_norm_coeffs(g), g, x);
    CHECK(out(0, 0) == doctest::Approx(0.5));
    CHECK(out(1, 0) == doctest::Approx(0.5));
  }
  SUBCASE("row count mismatch") {
    const auto g = erdos_renyi(4, 0.5, 1);
    try {
      spmm(sym_norm_coeffs(g), g, DenseMatrix(3, 1));
      FAIL("expected dimension error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kDimension);
    }
  }
  SUBCASE("non-finite input") {
    const auto g = erdos_renyi(2, 1.0, 1);
    DenseMatrix x(2, 1);
    x(1, 0) = NAN;
    try {
      spmm(sym_norm_coeffs(g), g, x);
      FAIL("expected numeric error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kNumeric);
    }
  }
}

TEST_CASE("spmm equals the dense normalized product") {
  const auto g = erdos_renyi(20, 0.25, 7);
  std::vector<std::pair<int, int>> edges;
  for (std::size_t u = 0; u < g.num_nodes; ++u)
    for (auto v : g.neighbors(static_cast<NodeId>(u))) edges.emplace_back(int(u), int(v));
  const auto a = oracle::normalized_adjacency(20, edges);
  const auto x = oracle::random_matrix(20, 6, 3);
  const auto ref = oracle::matmul(a, oracle::from(x));
  CHECK(oracle::max_abs_diff(ref, spmm(sym_norm_coeffs(g), g, x)) < 1e-5);
}

TEST_CASE("spmm is a symmetric operator") {
  const auto g = erdos_renyi(30, 0.2, 4);
  const auto c = sym_norm_coeffs(g);
  const auto x = oracle::random_matrix(30, 1, 5);
  const auto y = oracle::random_matrix(30, 1, 6);
  const double lhs = weighted_sum(spmm(c, g, x), y);
  const double rhs = weighted_sum(spmm(c, g, y), x);
  CHECK(std::abs(lhs - rhs) <= 1e-4 * std::max(1.0, std::abs(lhs)));
}

TEST_CASE("spmm result does not depend on the thread count") {
  const auto g = erdos_renyi(600, 0.02, 8);
  const auto c = sym_norm_coeffs(g);
  const auto x = oracle::random_matrix(600, 16, 9);
  set_num_threads(1);
  const auto one = spmm(c, g, x);
  set_num_threads(4);
  const auto four = spmm(c, g, x);
  set_num_threads(0);
  CHECK(one == four);
}

TEST_CASE("linear forward") {
  SUBCASE("identity weight") {
    const auto x = oracle::random_matrix(4, 3, 1);
    const ParamTensor w(DenseMatrix::identity(3));
    const ParamTensor b(1, 3);
    CHECK(linear(x, w, &b) == x);
  }
  SUBCASE("hand arithmetic") {
    const DenseMatrix x(1, 2, {1.0f, 2.0f});
    const ParamTensor w(DenseMatrix(2, 1, {3.0f, 4.0f}));
    const ParamTensor b(DenseMatrix(1, 1, {1.0f}));
    CHECK(linear(x, w, &b)(0, 0) == doctest::Approx(12.0));
  }
  SUBCASE("shape mismatch") {
    const ParamTensor w(3, 2);
    CHECK_THROWS_AS(linear(DenseMatrix(2, 2), w, nullptr), Error);
  }
}

TEST_CASE("linear backward matches finite differences") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    auto x = oracle::random_matrix(5, 4, seed);
    ParamTensor w(oracle::random_matrix(4, 3, seed + 10));
    ParamTensor b(oracle::random_matrix(1, 3, seed + 20));
    const auto c = oracle::random_matrix(5, 3, seed + 30);
    auto loss = [&] { return weighted_sum(linear(x, w, &b), c); };
    w.zero_grad();
    b.zero_grad();
    const auto dx = linear_backward(x, c, w, &b);
    CHECK(oracle::rel_error(oracle::flat(w.grad), oracle::finite_diff(w.value, loss)) < 1e-3);
    CHECK(oracle::rel_error(oracle::flat(b.grad), oracle::finite_diff(b.value, loss)) < 1e-3);
    CHECK(oracle::rel_error(oracle::flat(dx), oracle::finite_diff(x, loss)) < 1e-3);
  }
}

TEST_CASE("spmm backward matches finite differences") {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto g = erdos_renyi(8, 0.4, seed);
    const auto coeffs = sym_norm_coeffs(g);
    auto x = oracle::random_matrix(8, 3, seed + 1);
    const auto c = oracle::random_matrix(8, 3, seed + 2);
    auto loss = [&] { return weighted_sum(spmm(coeffs, g, x), c); };
    const auto dx = spmm_backward(coeffs, g, c);
    CHECK(oracle::rel_error(oracle::flat(dx), oracle::finite_diff(x, loss)) < 1e-3);
  }
}

TEST_CASE("relu") {
  const DenseMatrix x(1, 3, {-1.0f, 0.0f, 2.0f});
  CHECK(relu(x) == DenseMatrix(1, 3, {0.0f, 0.0f, 2.0f}));
  CHECK(relu(oracle::random_matrix(3, 3, 1, -2.0f, -0.1f)) == DenseMatrix(3, 3));
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    // Keep every entry at least 0.1 away from the kink.
    auto x8 = oracle::random_matrix(8, 8, seed, 0.1f, 1.0f);
    std::mt19937 flip(static_cast<unsigned>(seed));
    for (float& v : x8.storage())
      if (flip() % 2) v = -v;
    const auto c = oracle::random_matrix(8, 8, seed + 5);
    auto loss = [&] { return weighted_sum(relu(x8), c); };
    const auto dx = relu_backward(x8, c);
    CHECK(oracle::rel_error(oracle::flat(dx), oracle::finite_diff(x8, loss)) < 1e-3);
  }
}

TEST_CASE("adamw") {
  OptimConfig cfg;
  SUBCASE("zero gradient, no decay") {
    ParamTensor p(DenseMatrix(1, 1, {1.0f}));
    adamw_step(p, cfg);
    CHECK(p.value(0, 0) == 1.0f);
    CHECK(p.step_count == 1);
  }
  SUBCASE("first step moves by about lr") {
    cfg.learning_rate = 0.1f;
    ParamTensor p(DenseMatrix(1, 1, {1.0f}));
    p.grad(0, 0) = 1.0f;
    adamw_step(p, cfg);
    // m̂ = 1, v̂ = 1 ⇒ Δ = lr·1/(1 + ε)
    CHECK(p.value(0, 0) == doctest::Approx(0.9).epsilon(1e-6));
    CHECK(p.grad(0, 0) == 0.0f);
  }
  SUBCASE("decoupled decay only") {
    cfg.learning_rate = 0.1f;
    cfg.weight_decay = 0.1f;
    ParamTensor p(DenseMatrix(1, 1, {1.0f}));
    adamw_step(p, cfg);
    CHECK(p.value(0, 0) == doctest::Approx(0.99).epsilon(1e-7));
  }
  SUBCASE("two-step recurrence against a double-precision oracle") {
    cfg.learning_rate = 0.05f;
    cfg.weight_decay = 0.01f;
    ParamTensor p(DenseMatrix(1, 1, {0.5f}));
    double v = 0.5, m = 0, s = 0;
    const double grads[] = {0.3, -0.7};
    for (int t = 1; t <= 2; ++t) {
      p.grad(0, 0) = static_cast<float>(grads[t - 1]);
      adamw_step(p, cfg);
      v -= 0.05 * 0.01 * v;
      m = 0.9 * m + 0.1 * grads[t - 1];
      s = 0.999 * s + 0.001 * grads[t - 1] * grads[t - 1];
      const double mh = m / (1 - std::pow(0.9, t)), sh = s / (1 - std::pow(0.999, t));
      v -= 0.05 * mh / (std::sqrt(sh) + 1e-8);
    }
    CHECK(p.value(0, 0) == doctest::Approx(v).epsilon(1e-5));
  }
  SUBCASE("identical states give identical updates") {
    ParamTensor a(oracle::random_matrix(3, 3, 1)), b(oracle::random_matrix(3, 3, 1));
    a.grad = oracle::random_matrix(3, 3, 2);
    b.grad = a.grad;
    adamw_step(a, cfg);
    adamw_step(b, cfg);
    CHECK(a.value == b.value);
    CHECK(a.adamw_m == b.adamw_m);
    CHECK(a.adamw_v == b.adamw_v);
  }
  SUBCASE("non-finite gradient") {
    ParamTensor p(1, 1);
    p.grad(0, 0) = INFINITY;
    try {
      adamw_step(p, cfg);
      FAIL("expected numeric error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kNumeric);
    }
  }
  SUBCASE("config validation") {
    cfg.beta1 = 1.0f;
    CHECK_THROWS_AS(validate(cfg), Error);
    cfg = {};
    cfg.learning_rate = 0.0f;
    CHECK_THROWS_AS(validate(cfg), Error);
  }
}

TEST_CASE("init_normal has the documented scale") {
  const auto p = init_normal(400, 50, 3);
  double sq = 0.0;
  for (float v : p.value.data()) sq += static_cast<double>(v) * v;
  const double std_est = std::sqrt(sq / static_cast<double>(p.value.size()));
  CHECK(std_est == doctest::Approx(1.0 / 20.0).epsilon(0.03));
  CHECK(init_normal(4, 4, 3).value == init_normal(4, 4, 3).value);
}

TEST_CASE("tensor archive") {
  TensorArchive a;
  a.put("w", oracle::random_matrix(3, 2, 1));
  a.put("empty", DenseMatrix(0, 4));
  SUBCASE("byte layout") {
    const auto bytes = a.serialize();
    CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "SGCL");
    CHECK(bytes[4] == 1);
    // header 9 + "w": 4+1+4+4+24 + "empty": 4+5+4+4+0
    CHECK(bytes.size() == 9 + 37 + 17);
  }
  SUBCASE("round trip") {
    ScratchDir dir("archive");
    a.write(dir / "m.sgcl");
    const auto b = TensorArchive::read(dir / "m.sgcl");
    CHECK(b.get("w") == a.get("w"));
    CHECK(b.get("empty").cols() == 4);
    CHECK_THROWS_AS(b.get("nope"), Error);
  }
  SUBCASE("corrupt input") {
    auto bytes = a.serialize();
    bytes[0] = 'X';
    CHECK_THROWS_AS(TensorArchive::deserialize(bytes), Error);
    auto cut = a.serialize();
    cut.resize(cut.size() - 3);
    CHECK_THROWS_AS(TensorArchive::deserialize(cut), Error);
  }
}

}  // TEST_SUITE
