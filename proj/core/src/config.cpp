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

#include "sgcl/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "sgcl/error.hpp"

namespace sgcl {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& want) {
  fail(ErrorKind::kConfig, key + ": expected " + want + ", got '" + value + "'");
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (v.empty() || ec != std::errc{} || ptr != end) bad_value(key, v, "a non-negative integer");
  return out;
}

std::size_t to_size(const std::string& key, const std::string& v) {
  return static_cast<std::size_t>(to_u64(key, v));
}

double to_double(const std::string& key, const std::string& v) {
  char* end = nullptr;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || !std::isfinite(out))
    bad_value(key, v, "a finite number");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v, "true or false");
}

template <typename Fn>
auto rethrow_as_config(const std::string& key, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    fail(ErrorKind::kConfig, key + ": " + e.what());
  }
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"T", [](RunConfig& c, const auto& k, const auto& v) { c.train.t_steps = to_size(k, v); }},
      {"hidden", [](RunConfig& c, const auto& k, const auto& v) { c.train.hidden = to_size(k, v); }},
      {"depth", [](RunConfig& c, const auto& k, const auto& v) { c.train.depth = to_size(k, v); }},
      {"epochs", [](RunConfig& c, const auto& k, const auto& v) { c.train.epochs = to_size(k, v); }},
      {"block_size",
       [](RunConfig& c, const auto& k, const auto& v) { c.train.block_size = to_size(k, v); }},
      {"early_stop_patience",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.train.early_stop_patience = to_size(k, v);
       }},
      {"seed",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.train.seed = to_u64(k, v);
         c.seed_set = true;
       }},
      {"detach_mode",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.train.detach_mode = rethrow_as_config(k, [&] { return parse_detach_mode(v); });
       }},
      {"lr",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.train.optim.learning_rate = static_cast<float>(to_double(k, v));
       }},
      {"beta1",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.train.optim.beta1 = static_cast<float>(to_double(k, v));
       }},
      {"beta2",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.train.optim.beta2 = static_cast<float>(to_double(k, v));
       }},
      {"eps",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.train.optim.epsilon = static_cast<float>(to_double(k, v));
       }},
      {"weight_decay",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.train.optim.weight_decay = static_cast<float>(to_double(k, v));
       }},
      {"margin",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.train.contrast.margin = static_cast<float>(to_double(k, v));
       }},
      {"edge_drop_p",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.train.contrast.edge_drop_p = to_double(k, v);
       }},
      {"feature_shuffle",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.train.contrast.feature_shuffle = to_bool(k, v);
       }},
      {"neuron",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.train.neuron.kind = rethrow_as_config(k, [&] { return parse_neuron_kind(v); });
       }},
      {"reset",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.train.neuron.reset_mode = rethrow_as_config(k, [&] { return parse_reset_mode(v); });
       }},
      {"v_threshold",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.train.neuron.v_threshold = static_cast<float>(to_double(k, v));
       }},
      {"v_reset",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.train.neuron.v_reset = static_cast<float>(to_double(k, v));
       }},
      {"tau_m",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.train.neuron.tau_m = static_cast<float>(to_double(k, v));
       }},
      {"surrogate_alpha",
       [](RunConfig& c, const auto& k, const auto& v) {
         c.train.neuron.surrogate_alpha = static_cast<float>(to_double(k, v));
       }},
      {"trials", [](RunConfig& c, const auto& k, const auto& v) { c.trials = to_size(k, v); }},
      {"train_ratio",
       [](RunConfig& c, const auto& k, const auto& v) { c.ratios.train = to_double(k, v); }},
      {"val_ratio",
       [](RunConfig& c, const auto& k, const auto& v) { c.ratios.val = to_double(k, v); }},
      {"test_ratio",
       [](RunConfig& c, const auto& k, const auto& v) { c.ratios.test = to_double(k, v); }},
      {"stratified",
       [](RunConfig& c, const auto& k, const auto& v) { c.stratified = to_bool(k, v); }},
      {"probe_epochs",
       [](RunConfig& c, const auto& k, const auto& v) { c.probe.epochs = to_size(k, v); }},
      {"probe_lr",
       [](RunConfig& c, const auto& k, const auto& v) { c.probe.lr = to_double(k, v); }},
      {"probe_l2",
       [](RunConfig& c, const auto& k, const auto& v) { c.probe.l2 = to_double(k, v); }},
      {"threads", [](RunConfig& c, const auto& k, const auto& v) { c.threads = to_size(k, v); }},
      {"data", [](RunConfig& c, const auto&, const auto& v) { c.data = v; }},
      {"out", [](RunConfig& c, const auto&, const auto& v) { c.out = v; }},
      {"checkpoint", [](RunConfig& c, const auto&, const auto& v) { c.checkpoint = v; }},
      {"embeddings", [](RunConfig& c, const auto&, const auto& v) { c.embeddings = v; }},
      {"labels", [](RunConfig& c, const auto&, const auto& v) { c.labels = v; }},
  };
  return table;
}

}  // namespace

KeyValues parse_key_values(const std::string& text, const std::string& source) {
  KeyValues kv;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(line_no);
    if (eq == std::string::npos) fail(ErrorKind::kConfig, where + ": expected key=value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(ErrorKind::kConfig, where + ": empty key");
    if (!seen.insert(key).second) fail(ErrorKind::kConfig, where + ": key '" + key + "' repeated");
    kv.emplace_back(std::move(key), std::move(value));
  }
  return kv;
}

KeyValues read_config_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) fail(ErrorKind::kConfig, "cannot open config file " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_key_values(ss.str(), file.string());
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const auto& [name, _] : setters()) k.push_back(name);
    return k;
  }();
  return keys;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  const auto& table = setters();
  const auto it = table.find(key);
  if (it == table.end()) fail(ErrorKind::kConfig, "unknown config key '" + key + "'");
  it->second(cfg, key, value);
}

void apply_settings(RunConfig& cfg, const KeyValues& kv) {
  for (const auto& [k, v] : kv) apply_setting(cfg, k, v);
}

void apply_seed_env(RunConfig& cfg) {
  if (cfg.seed_set) return;
  if (const char* env = std::getenv("SGCL_SEED"); env != nullptr && *env != '\0') {
    cfg.train.seed = to_u64("SGCL_SEED", env);
    cfg.seed_set = true;
  }
}

void validate(const RunConfig& cfg) {
  const auto& t = cfg.train;
  require(t.t_steps >= 1, ErrorKind::kConfig, "T must be >= 1");
  require(t.block_size >= 1 && t.block_size <= t.t_steps, ErrorKind::kConfig,
          "block_size must lie in [1, T]");
  require(t.epochs >= 1, ErrorKind::kConfig, "epochs must be >= 1");
  require(t.hidden >= 1, ErrorKind::kConfig, "hidden must be >= 1");
  require(t.depth >= 1, ErrorKind::kConfig, "depth must be >= 1");
  validate(t.optim);
  validate(t.contrast);
  validate(t.neuron);
  require(cfg.trials >= 1, ErrorKind::kConfig, "trials must be >= 1");
  require(cfg.probe.epochs >= 1, ErrorKind::kConfig, "probe_epochs must be >= 1");
  require(cfg.probe.lr > 0, ErrorKind::kConfig, "probe_lr must be > 0");
  require(cfg.probe.l2 >= 0, ErrorKind::kConfig, "probe_l2 must be >= 0");
  const auto& r = cfg.ratios;
  require(r.train >= 0 && r.val >= 0 && r.test >= 0 &&
              std::abs(r.train + r.val + r.test - 1.0) < 1e-9,
          ErrorKind::kConfig, "train_ratio + val_ratio + test_ratio must be 1 with each >= 0");
}

std::string to_key_values(const RunConfig& cfg) {
  const auto& t = cfg.train;
  std::ostringstream o;
  o.precision(9);
  o << "T=" << t.t_steps << "\nhidden=" << t.hidden << "\ndepth=" << t.depth
    << "\nepochs=" << t.epochs << "\nblock_size=" << t.block_size
    << "\nearly_stop_patience=" << t.early_stop_patience << "\nseed=" << t.seed
    << "\ndetach_mode=" << to_string(t.detach_mode) << "\nlr=" << t.optim.learning_rate
    << "\nbeta1=" << t.optim.beta1 << "\nbeta2=" << t.optim.beta2 << "\neps=" << t.optim.epsilon
    << "\nweight_decay=" << t.optim.weight_decay << "\nmargin=" << t.contrast.margin
    << "\nedge_drop_p=" << t.contrast.edge_drop_p
    << "\nfeature_shuffle=" << (t.contrast.feature_shuffle ? "true" : "false")
    << "\nneuron=" << to_string(t.neuron.kind) << "\nreset=" << to_string(t.neuron.reset_mode)
    << "\nv_threshold=" << t.neuron.v_threshold << "\nv_reset=" << t.neuron.v_reset
    << "\ntau_m=" << t.neuron.tau_m << "\nsurrogate_alpha=" << t.neuron.surrogate_alpha
    << "\ntrials=" << cfg.trials << "\ntrain_ratio=" << cfg.ratios.train
    << "\nval_ratio=" << cfg.ratios.val << "\ntest_ratio=" << cfg.ratios.test
    << "\nstratified=" << (cfg.stratified ? "true" : "false")
    << "\nprobe_epochs=" << cfg.probe.epochs << "\nprobe_lr=" << cfg.probe.lr
    << "\nprobe_l2=" << cfg.probe.l2 << "\nthreads=" << cfg.threads << '\n';
  return o.str();
}

}  // namespace sgcl
