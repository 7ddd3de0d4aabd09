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
#include <filesystem>
#include <span>
#include <vector>

#include "sgcl/contrastive.hpp"
#include "sgcl/encoder.hpp"
#include "sgcl/graph.hpp"
#include "sgcl/optim.hpp"

namespace sgcl {

// Where the stop-gradient sits inside a block.
//   kState:         the membrane potential carried into a block is a constant;
//                   the encoder, predictor and neuron constant are trained.
//   kEncoderOutput: H^t itself is detached before the neuron, so only the
//                   predictor (and PLIF's tau) receive gradients.
enum class DetachMode { kState, kEncoderOutput };

DetachMode parse_detach_mode(const std::string& s);  // "state" | "encoder_output"
std::string to_string(DetachMode m);

struct TrainConfig {
  std::size_t t_steps = 8;
  std::size_t block_size = 1;
  std::size_t epochs = 100;
  OptimConfig optim;
  ContrastConfig contrast;
  NeuronConfig neuron;
  std::size_t depth = 2;
  std::size_t hidden = 8;
  std::size_t early_stop_patience = 20;
  std::uint64_t seed = 0;
  DetachMode detach_mode = DetachMode::kState;
};

// Throws ErrorKind::kConfig naming the offending field.
void validate(const TrainConfig& cfg, std::size_t feature_dim);

struct Model {
  EncoderParams encoder;
  PredictorParams predictor;
};

Model init_model(const TrainConfig& cfg, std::size_t feature_dim);

void save_model(const Model& m, const std::filesystem::path& file);
Model load_model(const std::filesystem::path& file);

struct BlockRecord {
  std::size_t epoch = 0;
  std::size_t block = 0;
  double loss = 0.0;
  double grad_norm = 0.0;
  double seconds = 0.0;      // wall-clock of the whole epoch
  std::size_t spikes = 0;    // clean-view spikes emitted inside the block
  std::size_t in_width = 0;  // summed input width of the block's steps
};

struct TrainHistory {
  std::vector<BlockRecord> blocks;
  std::vector<double> epoch_seconds;
  std::size_t nodes = 0;
  std::size_t epochs_run = 0;
  bool early_stopped = false;
};

// CSV columns: epoch,block,loss,grad_norm,seconds,spikes,nodes,in_width
void write_history_csv(const TrainHistory& h, const std::filesystem::path& file);
TrainHistory read_history_csv(const std::filesystem::path& file);

struct TrainResult {
  Model model;
  TrainHistory history;
};

// Blockwise surrogate-gradient training. Every epoch builds a fresh corrupted
// view, resets both neuron states, and for each block of time steps runs the
// clean and corrupted forward passes, applies the block-local margin ranking
// loss, backpropagates inside the block only and updates the touched
// parameters with AdamW.
TrainResult train(const CsrGraph& g, const TrainConfig& cfg);

// The clean and corrupted inputs of one epoch.
struct ContrastViews {
  const CsrGraph* clean = nullptr;
  NormCoeffs clean_coeffs;
  FeatureGroups clean_groups;
  CsrGraph corrupt;
  NormCoeffs corrupt_coeffs;
  FeatureGroups corrupt_groups;
  std::vector<std::size_t> perm;
};

ContrastViews make_views(const CsrGraph& g, const TrainConfig& cfg, std::size_t epoch);

// Zeroes all gradients, replays blocks before `block` forward-only, then runs
// forward and backward for `block`. Gradients are left in the model's
// tensors; nothing is updated. Returns the block loss.
double block_gradients(Model& m, const ContrastViews& views, const TrainConfig& cfg,
                       std::size_t block);

// Per-step norm of the first-layer weight gradient after one forward/backward
// pass at initialization. isolate = true: block size 1 with block-local
// losses. isolate = false: a single loss at the last step, backpropagated
// through the whole temporal recurrence.
std::vector<double> grad_norm_probe(const CsrGraph& g, const TrainConfig& cfg, bool isolate);

// Spike train of the clean graph under the trained encoder.
SpikeTrain embed(const Model& m, const CsrGraph& g);

}  // namespace sgcl
