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

#include "sgcl/probe.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "sgcl/error.hpp"
#include "sgcl/rng.hpp"

namespace sgcl {
namespace {

void shuffle(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(v[i - 1], v[pick(rng)]);
  }
}

void cut(const std::vector<std::size_t>& ids, const SplitRatios& r, Split& out) {
  const double n = static_cast<double>(ids.size());
  const auto n_train = std::min(ids.size(), static_cast<std::size_t>(std::llround(n * r.train)));
  const auto n_val =
      std::min(ids.size() - n_train, static_cast<std::size_t>(std::llround(n * r.val)));
  out.train_idx.insert(out.train_idx.end(), ids.begin(),
                       ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  out.val_idx.insert(out.val_idx.end(), ids.begin() + static_cast<std::ptrdiff_t>(n_train),
                     ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_val));
  out.test_idx.insert(out.test_idx.end(),
                      ids.begin() + static_cast<std::ptrdiff_t>(n_train + n_val), ids.end());
}

std::size_t num_classes_of(std::span<const std::int32_t> labels) {
  std::int32_t mx = -1;
  for (auto l : labels) {
    require(l >= 0, ErrorKind::kData, "labels must be non-negative");
    mx = std::max(mx, l);
  }
  return static_cast<std::size_t>(mx + 1);
}

}  // namespace

Split make_split(std::span<const std::int32_t> labels, const SplitRatios& ratios,
                 bool stratified, std::uint64_t seed) {
  require(ratios.train >= 0 && ratios.val >= 0 && ratios.test >= 0, ErrorKind::kArgument,
          "split ratios must be non-negative");
  require(std::abs(ratios.train + ratios.val + ratios.test - 1.0) < 1e-9, ErrorKind::kArgument,
          "split ratios must sum to 1");
  std::mt19937_64 rng(derive_seed(seed, 21));
  Split s;
  if (!stratified) {
    std::vector<std::size_t> ids(labels.size());
    std::iota(ids.begin(), ids.end(), std::size_t{0});
    shuffle(ids, rng);
    cut(ids, ratios, s);
    return s;
  }
  std::map<std::int32_t, std::vector<std::size_t>> by_class;
  for (std::size_t u = 0; u < labels.size(); ++u) by_class[labels[u]].push_back(u);
  const std::size_t parts = (ratios.train > 0) + (ratios.val > 0) + (ratios.test > 0);
  for (auto& [c, ids] : by_class) {
    require(ids.size() >= parts, ErrorKind::kData,
            "class " + std::to_string(c) + " has " + std::to_string(ids.size()) +
                " nodes, fewer than the " + std::to_string(parts) + " requested splits");
    shuffle(ids, rng);
    cut(ids, ratios, s);
  }
  return s;
}

DenseMatrix probe_logits(const ProbeModel& m, const DenseMatrix& z) {
  require(z.cols() == m.weights.rows(), ErrorKind::kDimension,
          "probe expects " + std::to_string(m.weights.rows()) + " features, got " +
              std::to_string(z.cols()));
  DenseMatrix out = matmul(z, m.weights);
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t c = 0; c < m.classes; ++c) out(i, c) += m.bias[c];
  return out;
}

ProbeModel train_probe(const DenseMatrix& z, std::span<const std::int32_t> labels,
                       const Split& split, const ProbeConfig& cfg) {
  require(labels.size() == z.rows(), ErrorKind::kDimension,
          "probe: " + std::to_string(labels.size()) + " labels for " + std::to_string(z.rows()) +
              " rows");
  require(!split.train_idx.empty(), ErrorKind::kData, "probe: empty training set");
  const std::size_t classes = num_classes_of(labels);
  {
    const auto first = labels[split.train_idx.front()];
    const bool single = std::all_of(split.train_idx.begin(), split.train_idx.end(),
                                    [&](std::size_t u) { return labels[u] == first; });
    require(!single, ErrorKind::kData, "probe: training set contains a single class");
  }
  const std::size_t d = z.cols();
  const std::size_t n = split.train_idx.size();
  ProbeModel m;
  m.classes = classes;
  m.weights = DenseMatrix(d, classes);
  m.bias.assign(classes, 0.0f);

  DenseMatrix zt(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto src = z.row(split.train_idx[i]);
    std::copy(src.begin(), src.end(), zt.row(i).begin());
  }

  std::vector<double> prob(classes);
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    DenseMatrix logits = matmul(zt, m.weights);
    DenseMatrix d_logits(n, classes);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double mx = -1e300;
      for (std::size_t c = 0; c < classes; ++c) {
        prob[c] = static_cast<double>(logits(i, c)) + m.bias[c];
        mx = std::max(mx, prob[c]);
      }
      double sum = 0.0;
      for (std::size_t c = 0; c < classes; ++c) sum += (prob[c] = std::exp(prob[c] - mx));
      const auto y = static_cast<std::size_t>(labels[split.train_idx[i]]);
      loss -= std::log(prob[y] / sum);
      for (std::size_t c = 0; c < classes; ++c)
        d_logits(i, c) = static_cast<float>((prob[c] / sum - (c == y ? 1.0 : 0.0)) / n);
    }
    double sq = 0.0;
    for (float w : m.weights.data()) sq += static_cast<double>(w) * w;
    m.loss_curve.push_back(loss / static_cast<double>(n) + 0.5 * cfg.l2 * sq);

    const DenseMatrix d_w = matmul_transposed_a(zt, d_logits);
    auto& w = m.weights.storage();
    const auto g = d_w.data();
    for (std::size_t i = 0; i < w.size(); ++i)
      w[i] -= static_cast<float>(cfg.lr * (g[i] + cfg.l2 * w[i]));
    for (std::size_t c = 0; c < classes; ++c) {
      double db = 0.0;
      for (std::size_t i = 0; i < n; ++i) db += d_logits(i, c);
      m.bias[c] -= static_cast<float>(cfg.lr * db);
    }
  }
  check_finite(m.weights, "probe weights");
  return m;
}

ProbeModel train_probe(const BitMatrix& z, std::span<const std::int32_t> labels,
                       const Split& split, const ProbeConfig& cfg) {
  return train_probe(unpack(z), labels, split, cfg);
}

double accuracy(const ProbeModel& m, const DenseMatrix& z,
                std::span<const std::int32_t> labels, std::span<const std::size_t> idx) {
  if (idx.empty()) return 0.0;
  const DenseMatrix logits = probe_logits(m, z);
  std::size_t correct = 0;
  for (auto u : idx) {
    const auto row = logits.row(u);
    const auto best = static_cast<std::int32_t>(
        std::max_element(row.begin(), row.end()) - row.begin());  // first max wins
    correct += best == labels[u];
  }
  return static_cast<double>(correct) / static_cast<double>(idx.size());
}

namespace {

void summarize(TrialReport& r) {
  const double n = static_cast<double>(r.test_acc.size());
  r.mean_acc = std::accumulate(r.test_acc.begin(), r.test_acc.end(), 0.0) / n;
  double ss = 0.0;
  for (double a : r.test_acc) ss += (a - r.mean_acc) * (a - r.mean_acc);
  r.std_acc = r.test_acc.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
}

}  // namespace

TrialReport evaluate_trials(const DenseMatrix& z, std::span<const std::int32_t> labels,
                            std::size_t trials, const SplitRatios& ratios, bool stratified,
                            std::uint64_t seed, const ProbeConfig& cfg) {
  require(trials >= 1, ErrorKind::kArgument, "trials must be >= 1");
  TrialReport r;
  for (std::size_t i = 0; i < trials; ++i) {
    const Split s = make_split(labels, ratios, stratified, derive_seed(seed, i));
    const ProbeModel m = train_probe(z, labels, s, cfg);
    r.test_acc.push_back(accuracy(m, z, labels, s.test_idx));
    r.val_acc.push_back(accuracy(m, z, labels, s.val_idx));
  }
  summarize(r);
  return r;
}

TrialReport evaluate_split(const DenseMatrix& z, std::span<const std::int32_t> labels,
                           const Split& split, const ProbeConfig& cfg) {
  TrialReport r;
  const ProbeModel m = train_probe(z, labels, split, cfg);
  r.test_acc.push_back(accuracy(m, z, labels, split.test_idx));
  r.val_acc.push_back(accuracy(m, z, labels, split.val_idx));
  summarize(r);
  return r;
}

}  // namespace sgcl
