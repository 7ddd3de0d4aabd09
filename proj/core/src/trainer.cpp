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

#include "sgcl/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "sgcl/checkpoint.hpp"
#include "sgcl/error.hpp"
#include "sgcl/rng.hpp"

namespace sgcl {

DetachMode parse_detach_mode(const std::string& s) {
  if (s == "state") return DetachMode::kState;
  if (s == "encoder_output") return DetachMode::kEncoderOutput;
  fail(ErrorKind::kConfig, "detach_mode: unknown value '" + s + "' (state|encoder_output)");
}

std::string to_string(DetachMode m) {
  return m == DetachMode::kState ? "state" : "encoder_output";
}

void validate(const TrainConfig& cfg, std::size_t feature_dim) {
  require(cfg.t_steps >= 1, ErrorKind::kConfig, "T must be >= 1");
  require(cfg.t_steps <= feature_dim, ErrorKind::kConfig,
          "T = " + std::to_string(cfg.t_steps) + " exceeds feature width " +
              std::to_string(feature_dim));
  require(cfg.block_size >= 1 && cfg.block_size <= cfg.t_steps, ErrorKind::kConfig,
          "block_size must lie in [1, T]");
  require(cfg.epochs >= 1, ErrorKind::kConfig, "epochs must be >= 1");
  require(cfg.hidden >= 1, ErrorKind::kConfig, "hidden must be >= 1");
  require(cfg.depth >= 1, ErrorKind::kConfig, "depth must be >= 1");
  validate(cfg.optim);
  validate(cfg.contrast);
  validate(cfg.neuron);
}

Model init_model(const TrainConfig& cfg, std::size_t feature_dim) {
  validate(cfg, feature_dim);
  const auto widths = group_widths(feature_dim, cfg.t_steps);
  Model m;
  m.encoder = init_encoder(widths, cfg.hidden, cfg.depth, cfg.neuron, derive_seed(cfg.seed, 1));
  m.predictor = init_predictor(cfg.hidden, derive_seed(cfg.seed, 2));
  // Non-PLIF kinds never read tau_raw; PLIF starts from tau_m = exp(0) = 1.
  return m;
}

namespace {

enum MetaField : std::size_t {
  kMetaSteps, kMetaHidden, kMetaDepth, kMetaKind, kMetaReset, kMetaThreshold,
  kMetaVReset, kMetaTau, kMetaAlpha, kMetaCount
};

std::vector<ParamTensor*> all_params(Model& m) {
  std::vector<ParamTensor*> ps;
  for (auto& p : m.encoder.first_weights) ps.push_back(&p);
  for (auto& p : m.encoder.first_bias) ps.push_back(&p);
  for (auto& p : m.encoder.shared_weights) ps.push_back(&p);
  ps.push_back(&m.encoder.tau_raw);
  ps.push_back(&m.predictor.w);
  ps.push_back(&m.predictor.b);
  return ps;
}

// Parameters a block touches: its own first layers plus everything shared.
std::vector<ParamTensor*> block_params(Model& m, std::size_t begin, std::size_t end) {
  std::vector<ParamTensor*> ps;
  for (std::size_t t = begin; t < end; ++t) {
    ps.push_back(&m.encoder.first_weights[t]);
    ps.push_back(&m.encoder.first_bias[t]);
  }
  for (auto& p : m.encoder.shared_weights) ps.push_back(&p);
  if (m.encoder.neuron.kind == NeuronKind::kPLIF) ps.push_back(&m.encoder.tau_raw);
  ps.push_back(&m.predictor.w);
  ps.push_back(&m.predictor.b);
  return ps;
}

struct ViewStates {
  NeuronState clean;
  NeuronState corrupt;
};

ViewStates resting_states(const Model& m, std::size_t n) {
  const auto cfg = m.encoder.effective_neuron();
  return {make_state(n, m.encoder.hidden, cfg), make_state(n, m.encoder.hidden, cfg)};
}

struct BlockPass {
  double loss = 0.0;
  std::size_t clean_spikes = 0;
};

struct ViewStepRecord {
  BitMatrix spikes;
  StepCache cache;
  std::vector<float> d_scores;
};

// Backward for one view across the block, newest step first. The gradient on
// the potential carried into the block is dropped: that is the stop-gradient.
void backward_view(Model& m, const CsrGraph& g, const NormCoeffs& coeffs,
                   std::vector<ViewStepRecord>& steps, std::size_t begin,
                   DetachMode mode) {
  DenseMatrix carry;
  bool have_carry = false;
  for (std::size_t i = steps.size(); i-- > 0;) {
    auto& rec = steps[i];
    const std::size_t t = begin + i;
    const bool any_score_grad =
        std::any_of(rec.d_scores.begin(), rec.d_scores.end(), [](float v) { return v != 0.0f; });
    if (!any_score_grad && !have_carry) continue;
    const DenseMatrix d_spikes = predictor_backward(rec.spikes, rec.d_scores, m.predictor);
    NeuronGrad ng = neuron_backward(&rec.cache.neuron, d_spikes, have_carry ? &carry : nullptr);
    if (m.encoder.neuron.kind == NeuronKind::kPLIF) {
      // tau = exp(raw) ⇒ d/draw = tau · d/dtau
      m.encoder.tau_raw.grad(0, 0) +=
          static_cast<float>(ng.d_tau * static_cast<double>(rec.cache.neuron.config.tau_m));
    }
    if (mode == DetachMode::kState)
      encoder_step_backward(g, coeffs, m.encoder, t, rec.cache, ng.d_input);
    carry = std::move(ng.d_prev_potential);
    have_carry = true;
  }
}

BlockPass run_block(Model& m, const ContrastViews& v, const TrainConfig& cfg,
                    ViewStates& st, std::size_t begin, std::size_t end,
                    std::span<const float> step_weights, bool backward) {
  BlockPass pass;
  std::vector<ViewStepRecord> clean_steps;
  std::vector<ViewStepRecord> corrupt_steps;
  for (std::size_t t = begin; t < end; ++t) {
    auto ec = encode_step(*v.clean, v.clean_coeffs, v.clean_groups.groups[t], m.encoder, t,
                          st.clean);
    auto en = encode_step(v.corrupt, v.corrupt_coeffs, v.corrupt_groups.groups[t], m.encoder,
                          t, st.corrupt);
    const auto pos = predictor_score(ec.spikes, m.predictor);
    const auto neg = predictor_score(en.spikes, m.predictor);
    const auto loss = mrl_loss(pos, neg, cfg.contrast.margin);
    const float w = step_weights[t - begin];
    pass.loss += static_cast<double>(w) * loss.loss;
    pass.clean_spikes += ec.spikes.count_ones();
    st.clean = std::move(ec.state);
    st.corrupt = std::move(en.state);
    if (!backward) continue;

    ViewStepRecord rc{std::move(ec.spikes), std::move(ec.cache), loss.d_pos};
    ViewStepRecord rn{std::move(en.spikes), std::move(en.cache), loss.d_neg};
    for (auto& d : rc.d_scores) d *= w;
    for (auto& d : rn.d_scores) d *= w;
    clean_steps.push_back(std::move(rc));
    corrupt_steps.push_back(std::move(rn));
  }
  if (!std::isfinite(pass.loss))
    fail(ErrorKind::kNumeric, "non-finite loss in block starting at step " + std::to_string(begin));
  if (backward) {
    backward_view(m, *v.clean, v.clean_coeffs, clean_steps, begin, cfg.detach_mode);
    backward_view(m, v.corrupt, v.corrupt_coeffs, corrupt_steps, begin, cfg.detach_mode);
  }
  return pass;
}

std::vector<float> uniform_weights(std::size_t n) {
  return std::vector<float>(n, 1.0f / static_cast<float>(n));
}

}  // namespace

void save_model(const Model& m, const std::filesystem::path& file) {
  TensorArchive a;
  const auto& e = m.encoder;
  DenseMatrix meta(1, kMetaCount);
  meta(0, kMetaSteps) = static_cast<float>(e.steps());
  meta(0, kMetaHidden) = static_cast<float>(e.hidden);
  meta(0, kMetaDepth) = static_cast<float>(e.depth);
  meta(0, kMetaKind) = static_cast<float>(static_cast<int>(e.neuron.kind));
  meta(0, kMetaReset) = static_cast<float>(static_cast<int>(e.neuron.reset_mode));
  meta(0, kMetaThreshold) = e.neuron.v_threshold;
  meta(0, kMetaVReset) = e.neuron.v_reset;
  meta(0, kMetaTau) = e.neuron.tau_m;
  meta(0, kMetaAlpha) = e.neuron.surrogate_alpha;
  a.put("meta", std::move(meta));
  for (std::size_t t = 0; t < e.steps(); ++t) {
    a.put("encoder/first_weight/" + std::to_string(t), e.first_weights[t].value);
    a.put("encoder/first_bias/" + std::to_string(t), e.first_bias[t].value);
  }
  for (std::size_t l = 0; l < e.shared_weights.size(); ++l)
    a.put("encoder/shared/" + std::to_string(l), e.shared_weights[l].value);
  a.put("encoder/tau_raw", e.tau_raw.value);
  a.put("predictor/w", m.predictor.w.value);
  a.put("predictor/b", m.predictor.b.value);
  a.write(file);
}

Model load_model(const std::filesystem::path& file) {
  const auto a = TensorArchive::read(file);
  const auto& meta = a.get("meta");
  require(meta.rows() == 1 && meta.cols() == kMetaCount, ErrorKind::kData,
          "checkpoint meta has unexpected shape " + shape_str(meta));
  Model m;
  auto& e = m.encoder;
  const auto steps = static_cast<std::size_t>(meta(0, kMetaSteps));
  e.hidden = static_cast<std::size_t>(meta(0, kMetaHidden));
  e.depth = static_cast<std::size_t>(meta(0, kMetaDepth));
  e.neuron.kind = static_cast<NeuronKind>(static_cast<int>(meta(0, kMetaKind)));
  e.neuron.reset_mode = static_cast<ResetMode>(static_cast<int>(meta(0, kMetaReset)));
  e.neuron.v_threshold = meta(0, kMetaThreshold);
  e.neuron.v_reset = meta(0, kMetaVReset);
  e.neuron.tau_m = meta(0, kMetaTau);
  e.neuron.surrogate_alpha = meta(0, kMetaAlpha);
  validate(e.neuron);
  for (std::size_t t = 0; t < steps; ++t) {
    e.first_weights.emplace_back(a.get("encoder/first_weight/" + std::to_string(t)));
    e.first_bias.emplace_back(a.get("encoder/first_bias/" + std::to_string(t)));
    require(e.first_weights.back().cols() == e.hidden, ErrorKind::kData,
            "checkpoint: first-layer width mismatch");
  }
  for (std::size_t l = 1; l < e.depth; ++l)
    e.shared_weights.emplace_back(a.get("encoder/shared/" + std::to_string(l - 1)));
  e.tau_raw = ParamTensor(a.get("encoder/tau_raw"));
  m.predictor.w = ParamTensor(a.get("predictor/w"));
  m.predictor.b = ParamTensor(a.get("predictor/b"));
  return m;
}

void write_history_csv(const TrainHistory& h, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) fail(ErrorKind::kData, "cannot write " + file.string());
  out.precision(9);
  out << "epoch,block,loss,grad_norm,seconds,spikes,nodes,in_width\n";
  for (const auto& r : h.blocks) {
    out << r.epoch << ',' << r.block << ',' << r.loss << ',' << r.grad_norm << ','
        << r.seconds << ',' << r.spikes << ',' << h.nodes << ',' << r.in_width << '\n';
  }
}

TrainHistory read_history_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) fail(ErrorKind::kData, "cannot open " + file.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("epoch,block,loss", 0) != 0)
    fail(ErrorKind::kData, file.string() + ": missing history header");
  TrainHistory h;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    BlockRecord r;
    std::size_t nodes = 0;
    if (!(ss >> r.epoch >> r.block >> r.loss >> r.grad_norm >> r.seconds >> r.spikes >> nodes >>
          r.in_width))
      fail(ErrorKind::kData, file.string() + ":" + std::to_string(line_no) + ": malformed row");
    h.nodes = nodes;
    h.epochs_run = std::max(h.epochs_run, r.epoch + 1);
    h.blocks.push_back(r);
  }
  return h;
}

ContrastViews make_views(const CsrGraph& g, const TrainConfig& cfg, std::size_t epoch) {
  const std::uint64_t base = derive_seed(derive_seed(cfg.seed, 3), cfg.contrast.seed);
  ContrastViews v;
  v.clean = &g;
  v.clean_coeffs = sym_norm_coeffs(g);
  v.clean_groups = partition_features(g.features, cfg.t_steps);

  DenseMatrix x_corrupt;
  if (cfg.contrast.feature_shuffle) {
    auto sh = shuffle_features(g.features, derive_seed(base, 2 * epoch));
    x_corrupt = std::move(sh.x);
    v.perm = std::move(sh.perm);
  } else {
    x_corrupt = g.features;
    v.perm.resize(g.features.cols());
    std::iota(v.perm.begin(), v.perm.end(), std::size_t{0});
  }
  v.corrupt = drop_edges(g, cfg.contrast.edge_drop_p, derive_seed(base, 2 * epoch + 1));
  v.corrupt_coeffs = sym_norm_coeffs(v.corrupt);
  v.corrupt_groups = partition_features(x_corrupt, cfg.t_steps);
  return v;
}

double block_gradients(Model& m, const ContrastViews& views, const TrainConfig& cfg,
                       std::size_t block) {
  const std::size_t n_blocks = (cfg.t_steps + cfg.block_size - 1) / cfg.block_size;
  require(block < n_blocks, ErrorKind::kArgument, "block_gradients: block out of range");
  for (auto* p : all_params(m)) p->zero_grad();
  auto st = resting_states(m, views.clean->num_nodes);
  double loss = 0.0;
  for (std::size_t b = 0; b <= block; ++b) {
    const std::size_t begin = b * cfg.block_size;
    const std::size_t end = std::min(cfg.t_steps, begin + cfg.block_size);
    const auto w = uniform_weights(end - begin);
    loss = run_block(m, views, cfg, st, begin, end, w, b == block).loss;
  }
  return loss;
}

TrainResult train(const CsrGraph& g, const TrainConfig& cfg) {
  TrainResult res;
  res.model = init_model(cfg, g.features.cols());
  auto& m = res.model;
  auto& hist = res.history;
  hist.nodes = g.num_nodes;

  const std::size_t n_blocks = (cfg.t_steps + cfg.block_size - 1) / cfg.block_size;
  const auto widths = group_widths(g.features.cols(), cfg.t_steps);
  double best = std::numeric_limits<double>::infinity();
  std::size_t since_best = 0;

  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto views = make_views(g, cfg, epoch);
    auto st = resting_states(m, g.num_nodes);
    double epoch_loss = 0.0;
    const std::size_t first_record = hist.blocks.size();

    for (std::size_t b = 0; b < n_blocks; ++b) {
      const std::size_t begin = b * cfg.block_size;
      const std::size_t end = std::min(cfg.t_steps, begin + cfg.block_size);
      for (auto* p : all_params(m)) p->zero_grad();
      const auto w = uniform_weights(end - begin);
      const auto pass = run_block(m, views, cfg, st, begin, end, w, true);

      const auto touched = block_params(m, begin, end);
      double sq = 0.0;
      for (auto* p : touched) {
        const double n = frobenius_norm(p->grad);
        sq += n * n;
      }
      for (auto* p : touched) adamw_step(*p, cfg.optim);

      BlockRecord rec;
      rec.epoch = epoch;
      rec.block = b;
      rec.loss = pass.loss;
      rec.grad_norm = std::sqrt(sq);
      rec.spikes = pass.clean_spikes;
      rec.in_width = std::accumulate(widths.begin() + static_cast<std::ptrdiff_t>(begin),
                                     widths.begin() + static_cast<std::ptrdiff_t>(end),
                                     std::size_t{0});
      hist.blocks.push_back(rec);
      epoch_loss += pass.loss;
    }

    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    hist.epoch_seconds.push_back(secs);
    for (std::size_t i = first_record; i < hist.blocks.size(); ++i) hist.blocks[i].seconds = secs;
    hist.epochs_run = epoch + 1;

    epoch_loss /= static_cast<double>(n_blocks);
    if (epoch_loss < best - 1e-7) {
      best = epoch_loss;
      since_best = 0;
    } else if (cfg.early_stop_patience > 0 && ++since_best >= cfg.early_stop_patience) {
      hist.early_stopped = true;
      break;
    }
  }
  return res;
}

std::vector<double> grad_norm_probe(const CsrGraph& g, const TrainConfig& cfg, bool isolate) {
  Model m = init_model(cfg, g.features.cols());
  const auto views = make_views(g, cfg, 0);
  for (auto* p : all_params(m)) p->zero_grad();
  auto st = resting_states(m, g.num_nodes);
  const std::size_t t_steps = cfg.t_steps;
  if (isolate) {
    const std::vector<float> w{1.0f};
    for (std::size_t t = 0; t < t_steps; ++t) run_block(m, views, cfg, st, t, t + 1, w, true);
  } else {
    std::vector<float> w(t_steps, 0.0f);
    w.back() = 1.0f;
    run_block(m, views, cfg, st, 0, t_steps, w, true);
  }
  std::vector<double> norms(t_steps);
  for (std::size_t t = 0; t < t_steps; ++t) norms[t] = frobenius_norm(m.encoder.first_weights[t].grad);
  return norms;
}

SpikeTrain embed(const Model& m, const CsrGraph& g) {
  require(g.features.cols() >= m.encoder.steps(), ErrorKind::kDimension,
          "embed: feature width smaller than T");
  const auto groups = partition_features(g.features, m.encoder.steps());
  for (std::size_t t = 0; t < groups.steps(); ++t) {
    require(groups.groups[t].cols() == m.encoder.first_weights[t].rows(), ErrorKind::kDimension,
            "embed: feature width does not match the checkpoint");
  }
  return encode(g, sym_norm_coeffs(g), groups, m.encoder);
}

}  // namespace sgcl
