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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sgcl/bits.hpp"
#include "sgcl/dense.hpp"

namespace sgcl {

struct Split {
  std::vector<std::size_t> train_idx;
  std::vector<std::size_t> val_idx;
  std::vector<std::size_t> test_idx;
};

struct SplitRatios {
  double train = 0.1;
  double val = 0.1;
  double test = 0.8;
};

// Shuffles node ids with the seed and cuts round(n·train) / round(n·val) /
// remainder. With `stratified` the cut is applied inside every class, so each
// split keeps the class proportions to within one node.
// Throws kArgument if the ratios are negative or do not sum to 1, and kData
// when a stratified class has fewer nodes than there are non-empty splits.
Split make_split(std::span<const std::int32_t> labels, const SplitRatios& ratios,
                 bool stratified, std::uint64_t seed);

struct ProbeConfig {
  std::size_t epochs = 300;
  double lr = 0.1;
  double l2 = 1e-4;
};

// Multinomial logistic regression on frozen features.
struct ProbeModel {
  DenseMatrix weights;  // D×C
  std::vector<float> bias;
  std::size_t classes = 0;
  std::vector<double> loss_curve;  // training objective before each step
};

// Full-batch gradient descent on softmax cross-entropy plus l2/2·‖W‖²,
// starting from zero weights. Throws kData when the training set holds a
// single class.
ProbeModel train_probe(const DenseMatrix& z, std::span<const std::int32_t> labels,
                       const Split& split, const ProbeConfig& cfg = {});
ProbeModel train_probe(const BitMatrix& z, std::span<const std::int32_t> labels,
                       const Split& split, const ProbeConfig& cfg = {});

// Class scores, N×C.
DenseMatrix probe_logits(const ProbeModel& m, const DenseMatrix& z);

// Argmax-match fraction over idx; ties go to the lowest class index. 0 for an
// empty index set.
double accuracy(const ProbeModel& m, const DenseMatrix& z,
                std::span<const std::int32_t> labels, std::span<const std::size_t> idx);

struct TrialReport {
  std::vector<double> test_acc;
  std::vector<double> val_acc;
  double mean_acc = 0.0;
  double std_acc = 0.0;  // sample standard deviation; 0 for a single trial
};

// One random split per trial (seed derived from `seed` and the trial index),
// a probe trained on the train part and scored on the test part.
TrialReport evaluate_trials(const DenseMatrix& z, std::span<const std::int32_t> labels,
                            std::size_t trials, const SplitRatios& ratios, bool stratified,
                            std::uint64_t seed, const ProbeConfig& cfg = {});
// Same protocol on a fixed split; one trial.
TrialReport evaluate_split(const DenseMatrix& z, std::span<const std::int32_t> labels,
                           const Split& split, const ProbeConfig& cfg = {});

}  // namespace sgcl
