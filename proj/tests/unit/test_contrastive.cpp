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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "sgcl/contrastive.hpp"
#include "sgcl/error.hpp"

using namespace sgcl;

namespace {

BitMatrix random_bits(std::size_t r, std::size_t c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  BitMatrix b(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) b.set(i, j, rng() % 3 == 0);
  return b;
}

}  // namespace

TEST_SUITE("contrastive") {

TEST_CASE("column permutation") {
  const DenseMatrix x(1, 3, {1.0f, 2.0f, 3.0f});
  const std::vector<std::size_t> perm{2, 0, 1};
  CHECK(permute_columns(x, perm) == DenseMatrix(1, 3, {3.0f, 1.0f, 2.0f}));
  CHECK_THROWS_AS(permute_columns(x, std::vector<std::size_t>{0, 1}), Error);
}

TEST_CASE("feature shuffle") {
  SUBCASE("single column is untouched") {
    const auto x = oracle::random_matrix(4, 1, 1);
    CHECK(shuffle_features(x, 9).x == x);
  }
  SUBCASE("rows keep their multiset and share one permutation") {
    const auto x = oracle::random_matrix(6, 10, 2);
    const auto sh = shuffle_features(x, 3);
    auto sorted_perm = sh.perm;
    std::sort(sorted_perm.begin(), sorted_perm.end());
    for (std::size_t j = 0; j < 10; ++j) CHECK(sorted_perm[j] == j);
    for (std::size_t i = 0; i < 6; ++i) {
      std::vector<float> a(x.row(i).begin(), x.row(i).end());
      std::vector<float> b(sh.x.row(i).begin(), sh.x.row(i).end());
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      CHECK(a == b);
      for (std::size_t j = 0; j < 10; ++j) CHECK(sh.x(i, j) == x(i, sh.perm[j]));
    }
  }
  SUBCASE("seeded") {
    const auto x = oracle::random_matrix(3, 20, 4);
    CHECK(shuffle_features(x, 5).perm == shuffle_features(x, 5).perm);
    CHECK(shuffle_features(x, 5).perm != shuffle_features(x, 6).perm);
  }
  SUBCASE("every position moves over many seeds") {
    // Each output slot should receive every source column at some seed.
    std::vector<std::vector<bool>> seen(5, std::vector<bool>(5, false));
    for (std::uint64_t s = 0; s < 200; ++s) {
      const auto p = shuffle_features(DenseMatrix(1, 5), s).perm;
      for (std::size_t j = 0; j < 5; ++j) seen[j][p[j]] = true;
    }
    for (const auto& row : seen) CHECK(std::all_of(row.begin(), row.end(), [](bool b) { return b; }));
  }
}

TEST_CASE("masked summation predictor") {
  PredictorParams p = init_predictor(5, 1);
  p.b.value(0, 0) = 0.25f;
  SUBCASE("silent node scores the bias") {
    const auto s = predictor_score(BitMatrix(3, 5), p);
    for (float v : s) CHECK(v == 0.25f);
  }
  SUBCASE("one bit picks one weight") {
    BitMatrix z(1, 5);
    z.set(0, 3, true);
    CHECK(predictor_score(z, p)[0] == doctest::Approx(p.w.value(3, 0) + 0.25f));
  }
  SUBCASE("wide rows against a dense product") {
    const std::size_t k = 150;
    PredictorParams q = init_predictor(k, 2);
    q.b.value(0, 0) = -0.5f;
    const auto z = random_bits(9, k, 3);
    const auto ref = oracle::matmul(oracle::from(unpack(z)), oracle::from(q.w.value));
    const auto s = predictor_score(z, q);
    for (std::size_t u = 0; u < 9; ++u) CHECK(s[u] == doctest::Approx(ref[u][0] - 0.5).epsilon(1e-5));
  }
  SUBCASE("width mismatch") {
    try {
      predictor_score(BitMatrix(2, 4), p);
      FAIL("expected dimension error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kDimension);
    }
  }
}

TEST_CASE("predictor backward") {
  const std::size_t k = 70;
  PredictorParams p = init_predictor(k, 4);
  const auto z = random_bits(6, k, 5);
  const auto c = oracle::random_matrix(6, 1, 6);
  const std::vector<float> d(c.data().begin(), c.data().end());
  auto loss = [&] {
    const auto s = predictor_score(z, p);
    double acc = 0.0;
    for (std::size_t u = 0; u < s.size(); ++u) acc += static_cast<double>(s[u]) * d[u];
    return acc;
  };
  p.w.zero_grad();
  p.b.zero_grad();
  const auto dz = predictor_backward(z, d, p);
  CHECK(oracle::rel_error(oracle::flat(p.w.grad), oracle::finite_diff(p.w.value, loss)) < 1e-4);
  CHECK(oracle::rel_error(oracle::flat(p.b.grad), oracle::finite_diff(p.b.value, loss)) < 1e-4);
  for (std::size_t u = 0; u < 6; ++u)
    for (std::size_t j = 0; j < k; ++j) CHECK(dz(u, j) == doctest::Approx(d[u] * p.w.value(j, 0)));
}

TEST_CASE("margin ranking loss") {
  using V = std::vector<float>;
  SUBCASE("hinge boundary") {
    const auto l = mrl_loss(V{0.3f, -1.0f}, V{0.3f, -1.0f}, 0.0f);
    CHECK(l.loss == 0.0);
    CHECK(l.d_pos == V{0.0f, 0.0f});
  }
  SUBCASE("inactive") {
    CHECK(mrl_loss(V{0.0f}, V{1.0f}, 0.5f).loss == 0.0);
  }
  SUBCASE("active") {
    const auto l = mrl_loss(V{1.0f}, V{0.0f}, 1.0f);
    CHECK(l.loss == doctest::Approx(2.0));
    CHECK(l.d_pos[0] == 1.0f);
    CHECK(l.d_neg[0] == -1.0f);
  }
  SUBCASE("mean over nodes") {
    const auto l = mrl_loss(V{1.0f, 0.0f, 2.0f, -3.0f}, V{0.0f, 0.0f, 0.0f, 0.0f}, 0.5f);
    CHECK(l.loss == doctest::Approx((1.5 + 0.5 + 2.5) / 4));
    CHECK(l.d_pos[3] == 0.0f);
    CHECK(l.d_pos[0] == doctest::Approx(0.25));
  }
  SUBCASE("shifting both scores changes nothing") {
    const auto pos = oracle::random_matrix(1, 30, 7);
    const auto neg = oracle::random_matrix(1, 30, 8);
    V p(pos.data().begin(), pos.data().end()), n(neg.data().begin(), neg.data().end());
    const double base = mrl_loss(p, n, 0.7f).loss;
    for (auto& v : p) v += 3.0f;
    for (auto& v : n) v += 3.0f;
    CHECK(mrl_loss(p, n, 0.7f).loss == doctest::Approx(base).epsilon(1e-5));
  }
  SUBCASE("length mismatch") {
    CHECK_THROWS_AS(mrl_loss(V{1.0f}, V{}, 1.0f), Error);
  }
}

TEST_CASE("contrast config validation") {
  ContrastConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.margin = 2.5f;
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg = {};
  cfg.edge_drop_p = 1.0;
  CHECK_THROWS_AS(validate(cfg), Error);
}

}  // TEST_SUITE
