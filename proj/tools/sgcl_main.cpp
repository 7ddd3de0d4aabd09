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
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sgcl/analytics.hpp"
#include "sgcl/config.hpp"
#include "sgcl/error.hpp"
#include "sgcl/graph.hpp"
#include "sgcl/parallel.hpp"
#include "sgcl/probe.hpp"
#include "sgcl/synthetic.hpp"
#include "sgcl/theory.hpp"
#include "sgcl/trainer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sgcl;

namespace {

enum ExitCode : int { kOk = 0, kExitConfig = 1, kExitData = 2, kExitNumeric = 3, kExitVerify = 4 };

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::kData:
    case ErrorKind::kDimension:
      return kExitData;
    case ErrorKind::kNumeric:
      return kExitNumeric;
    case ErrorKind::kVerification:
      return kExitVerify;
    default:
      return kExitConfig;
  }
}

// Flag values collected as strings and fed through the same setter as the
// config file, so both paths validate identically.
class KeyFlags {
 public:
  void add(CLI::App* app, std::initializer_list<std::string> keys) {
    for (const auto& key : keys) {
      std::string names = "--" + key;
      if (key.find('_') != std::string::npos) {
        std::string dashed = key;
        std::replace(dashed.begin(), dashed.end(), '_', '-');
        names += ",--" + dashed;
      }
      options_.emplace_back(key, app->add_option(names, values_[key], key));
    }
  }

  KeyValues given() const {
    KeyValues kv;
    for (const auto& [key, opt] : options_)
      if (opt->count() > 0) kv.emplace_back(key, values_.at(key));
    return kv;
  }

 private:
  std::map<std::string, std::string> values_;
  std::vector<std::pair<std::string, CLI::Option*>> options_;
};

const std::initializer_list<std::string> kTrainKeys = {
    "T",      "hidden",      "depth",   "epochs",      "block_size",      "early_stop_patience",
    "seed",   "detach_mode", "lr",      "beta1",       "beta2",           "eps",
    "weight_decay", "margin", "edge_drop_p", "feature_shuffle", "neuron", "reset",
    "v_threshold", "v_reset", "tau_m", "surrogate_alpha", "threads"};
const std::initializer_list<std::string> kEvalKeys = {
    "trials", "train_ratio", "val_ratio", "test_ratio", "stratified",
    "probe_epochs", "probe_lr", "probe_l2", "seed", "threads"};

struct Common {
  std::string config_path;
  KeyFlags flags;
};

RunConfig resolve(const Common& c) {
  RunConfig cfg;
  if (!c.config_path.empty()) {
    apply_settings(cfg, read_config_file(c.config_path));
  } else if (fs::exists("sgcl.conf")) {
    apply_settings(cfg, read_config_file("sgcl.conf"));
  }
  apply_settings(cfg, c.flags.given());
  apply_seed_env(cfg);
  validate(cfg);
  set_num_threads(cfg.threads);
  return cfg;
}

void require_set(const std::string& value, const std::string& flag) {
  require(!value.empty(), ErrorKind::kConfig, flag + " is required");
}

CsrGraph load_dataset(const std::string& dir) {
  require_set(dir, "--data");
  require(fs::is_directory(dir), ErrorKind::kData, "dataset directory not found: " + dir);
  return load_graph(dir);
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) fail(ErrorKind::kData, "cannot write " + p.string());
  return out;
}

DenseMatrix read_matrix_csv(const fs::path& file) {
  std::ifstream in(file);
  if (!in) fail(ErrorKind::kData, "cannot open " + file.string());
  std::vector<std::vector<float>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<float> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stof(cell));
      } catch (const std::exception&) {
        fail(ErrorKind::kData, file.string() + ":" + std::to_string(line_no) + ": bad number");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      fail(ErrorKind::kData, file.string() + ":" + std::to_string(line_no) + ": ragged row");
    rows.push_back(std::move(row));
  }
  require(!rows.empty(), ErrorKind::kData, file.string() + " is empty");
  DenseMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  return m;
}

// Split file: one "node,part" line per node with part in {train,val,test}.
Split read_split(const fs::path& file) {
  std::ifstream in(file);
  if (!in) fail(ErrorKind::kData, "cannot open " + file.string());
  Split s;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    const std::string where = file.string() + ":" + std::to_string(line_no);
    if (comma == std::string::npos) fail(ErrorKind::kData, where + ": expected node,part");
    std::size_t node = 0;
    try {
      node = std::stoul(line.substr(0, comma));
    } catch (const std::exception&) {
      fail(ErrorKind::kData, where + ": bad node id");
    }
    const std::string part = line.substr(comma + 1);
    if (part == "train") s.train_idx.push_back(node);
    else if (part == "val") s.val_idx.push_back(node);
    else if (part == "test") s.test_idx.push_back(node);
    else fail(ErrorKind::kData, where + ": unknown part '" + part + "'");
  }
  return s;
}

std::vector<std::size_t> parse_list(const std::string& s, const std::string& flag) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const auto v = std::stoul(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      fail(ErrorKind::kConfig, flag + ": bad list entry '" + item + "'");
    }
  }
  require(!out.empty(), ErrorKind::kConfig, flag + " is empty");
  return out;
}

double final_epoch_loss(const TrainHistory& h) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : h.blocks)
    if (r.epoch + 1 == h.epochs_run) {
      sum += r.loss;
      ++n;
    }
  return n ? sum / static_cast<double>(n) : 0.0;
}

json energy_json(const EnergyReport& e) {
  return {{"e_encoding_mj", e.e_encoding_mj}, {"e_spiking_mj", e.e_spiking_mj},
          {"total_mj", e.total_mj},           {"spike_count", e.spike_count},
          {"mac_count", e.mac_count}};
}

// ---------------------------------------------------------------- commands

int cmd_train(const RunConfig& cfg) {
  const CsrGraph g = load_dataset(cfg.data);
  validate(cfg.train, g.features.cols());
  const fs::path out = cfg.out.empty() ? fs::path(".") : fs::path(cfg.out);
  fs::create_directories(out);

  const TrainResult res = train(g, cfg.train);
  const SpikeTrain z = embed(res.model, g);
  save_model(res.model, out / "model.sgcl");
  write_embeddings(out / "embeddings.sgcb", concat_pool(z), z.t(), z.k());
  write_history_csv(res.history, out / "history.csv");
  open_out(out / "run.conf") << to_key_values(cfg);

  emit({{"final_loss", final_epoch_loss(res.history)},
        {"sparsity", sparsity(z)},
        {"epochs_run", res.history.epochs_run},
        {"early_stopped", res.history.early_stopped},
        {"checkpoint", (out / "model.sgcl").string()},
        {"embeddings", (out / "embeddings.sgcb").string()},
        {"history", (out / "history.csv").string()}});
  return kOk;
}

int cmd_embed(const RunConfig& cfg) {
  require_set(cfg.checkpoint, "--checkpoint");
  const Model m = load_model(cfg.checkpoint);
  const CsrGraph g = load_dataset(cfg.data);
  const SpikeTrain z = embed(m, g);
  const fs::path out = cfg.out.empty() ? fs::path("embeddings.sgcb") : fs::path(cfg.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_embeddings(out, concat_pool(z), z.t(), z.k());
  emit({{"nodes", z.n()},
        {"T", z.t()},
        {"k", z.k()},
        {"bytes", fs::file_size(out)},
        {"sparsity", sparsity(z)},
        {"embeddings", out.string()}});
  return kOk;
}

int cmd_eval(const RunConfig& cfg, const std::string& split_file, const std::string& csv) {
  require_set(cfg.embeddings, "--embeddings");
  const EmbeddingFile emb = read_embeddings(cfg.embeddings);
  std::vector<std::int32_t> labels;
  if (!cfg.labels.empty()) {
    labels = load_labels(cfg.labels);
  } else {
    require_set(cfg.data, "--labels or --data");
    labels = load_labels(fs::path(cfg.data) / "labels.csv");
  }
  require(labels.size() == emb.z.rows(), ErrorKind::kData,
          std::to_string(labels.size()) + " labels for " + std::to_string(emb.z.rows()) +
              " embedded nodes");
  const DenseMatrix z = unpack(emb.z);
  const TrialReport rep =
      split_file.empty()
          ? evaluate_trials(z, labels, cfg.trials, cfg.ratios, cfg.stratified, cfg.train.seed,
                            cfg.probe)
          : evaluate_split(z, labels, read_split(split_file), cfg.probe);
  if (!csv.empty()) {
    auto out = open_out(csv);
    out << "trial,val_acc,test_acc\n";
    for (std::size_t i = 0; i < rep.test_acc.size(); ++i)
      out << i << ',' << rep.val_acc[i] << ',' << rep.test_acc[i] << '\n';
  }
  emit({{"mean_acc", rep.mean_acc},
        {"std_acc", rep.std_acc},
        {"trials", rep.test_acc.size()},
        {"test_acc", rep.test_acc}});
  return kOk;
}

struct VerifyArgs {
  std::size_t n = 50;
  std::size_t dmax = 10;
  std::size_t depth = 2;
  std::size_t d = 64;
  std::size_t k = 8;
  std::string steps = "8,16,32,64";
  std::size_t seeds = 10;
  float v_th = 1.0f;
  std::string reset = "by_subtraction";
  std::string out;
};

int cmd_verify(const RunConfig& cfg, const VerifyArgs& a) {
  const ResetMode reset = [&] {
    try {
      return parse_reset_mode(a.reset);
    } catch (const Error& e) {
      fail(ErrorKind::kConfig, std::string("--reset: ") + e.what());
    }
  }();
  if (reset != ResetMode::kBySubtraction)
    fail(ErrorKind::kConfig,
         "verify-theorem requires --reset by_subtraction: the approximation argument relies on "
         "the membrane keeping the residue above threshold");
  require(a.v_th > 0, ErrorKind::kConfig, "--vth must be > 0");
  const auto steps = parse_list(a.steps, "--T");
  for (auto t : steps)
    require(t >= 1 && t <= a.d, ErrorKind::kConfig, "--T entries must lie in [1, d]");

  std::ostringstream csv;
  csv.precision(9);
  csv << "seed,T,N,D,nu,kappa,max_error,bound,pass\n";
  std::vector<std::string> failures;
  for (std::size_t s = 0; s < a.seeds; ++s) {
    const std::uint64_t seed = cfg.train.seed + s;
    const auto inst = make_bound_instance(a.n, a.dmax, a.depth, a.d, a.k, seed);
    for (auto t : steps) {
      const BoundReport r = verify_bound(inst.graph, inst.oracle, t, a.v_th, reset);
      std::ostringstream row;
      row.precision(9);
      row << seed << ',' << t << ',' << a.n << ',' << r.max_degree << ',' << r.nu << ','
          << r.kappa << ',' << r.max_error() << ',' << r.bound << ','
          << (r.all_pass() ? "true" : "false");
      csv << row.str() << '\n';
      if (!r.all_pass()) failures.push_back(row.str());
    }
  }
  if (a.out.empty()) {
    std::cout << csv.str();
  } else {
    open_out(a.out) << csv.str();
  }
  for (const auto& f : failures) std::cerr << "bound violated: " << f << '\n';
  return failures.empty() ? kOk : kExitVerify;
}

struct EnergyArgs {
  std::string history;
  std::size_t edges = 0;
  std::size_t baseline_d = 0;
  std::size_t baseline_layers = 0;
};

int cmd_energy(const RunConfig& cfg, const EnergyArgs& a) {
  json j;
  std::size_t nodes = 0;
  if (!a.history.empty()) {
    require(fs::exists(a.history), ErrorKind::kData, "history not found: " + a.history);
    const TrainHistory h = read_history_csv(a.history);
    require(!h.blocks.empty(), ErrorKind::kData, a.history + " has no rows");
    std::vector<std::size_t> widths, spikes;
    for (const auto& r : h.blocks)
      if (r.epoch + 1 == h.epochs_run) {
        widths.push_back(r.in_width);
        spikes.push_back(r.spikes);
      }
    nodes = h.nodes;
    j = energy_json(energy_spikegcl(nodes, widths, spikes));
    j["source"] = "history";
    j["epoch"] = h.epochs_run - 1;
  } else {
    require_set(cfg.checkpoint, "--from-history or --checkpoint");
    const Model m = load_model(cfg.checkpoint);
    const CsrGraph g = load_dataset(cfg.data);
    const SpikeTrain z = embed(m, g);
    nodes = g.num_nodes;
    j = energy_json(energy_spikegcl(g.num_nodes, g.features.cols(), z.spike_counts()));
    j["source"] = "checkpoint";
    j["sparsity"] = sparsity(z);
  }
  if (a.baseline_d > 0 && a.baseline_layers > 0) {
    j["binary_gnn_mj"] = energy_binary_gnn(nodes, a.edges, a.baseline_d, a.baseline_layers);
    j["full_precision_mj"] = energy_full_precision(nodes, a.edges, a.baseline_d, a.baseline_d,
                                                   a.baseline_layers);
  }
  emit(j);
  return kOk;
}

struct CkaArgs {
  std::string x;
  std::string y;
  std::string matrix;
};

int cmd_cka(const RunConfig& cfg, const CkaArgs& a) {
  if (!a.x.empty() || !a.y.empty()) {
    require(!a.x.empty() && !a.y.empty(), ErrorKind::kConfig, "--x and --y go together");
    emit({{"cka", cka(read_matrix_csv(a.x), read_matrix_csv(a.y))}});
    return kOk;
  }
  require_set(cfg.checkpoint, "--checkpoint");
  const Model m = load_model(cfg.checkpoint);
  const CsrGraph g = load_dataset(cfg.data);
  const SpikeTrain z = embed(m, g);
  const DenseMatrix c = cka_matrix(partition_features(g.features, z.t()), z);
  if (!a.matrix.empty()) {
    auto out = open_out(a.matrix);
    out.precision(9);
    for (std::size_t i = 0; i < c.rows(); ++i) {
      for (std::size_t j = 0; j < c.cols(); ++j) out << (j ? "," : "") << c(i, j);
      out << '\n';
    }
  }
  double diag = 0.0, off = 0.0;
  for (std::size_t i = 0; i < c.rows(); ++i)
    for (std::size_t j = 0; j < c.cols(); ++j) (i == j ? diag : off) += c(i, j);
  const double t = static_cast<double>(c.rows());
  emit({{"T", c.rows()},
        {"diagonal_dominance", diagonal_dominance(c)},
        {"mean_diagonal", diag / t},
        {"mean_off_diagonal", t > 1 ? off / (t * t - t) : 0.0}});
  return kOk;
}

int cmd_grad_probe(const RunConfig& cfg, bool no_isolate, std::size_t nodes,
                   const std::string& out) {
  CsrGraph g;
  if (!cfg.data.empty()) {
    g = load_dataset(cfg.data);
  } else {
    SbmConfig sc;
    sc.nodes = nodes;
    sc.feature_dim = std::max<std::size_t>(32, 2 * cfg.train.t_steps);
    g = stochastic_block_model(sc, cfg.train.seed);
  }
  validate(cfg.train, g.features.cols());
  const auto norms = grad_norm_probe(g, cfg.train, !no_isolate);
  std::ostringstream csv;
  csv.precision(9);
  csv << "step,grad_norm\n";
  for (std::size_t t = 0; t < norms.size(); ++t) csv << t + 1 << ',' << norms[t] << '\n';
  if (out.empty()) {
    std::cout << csv.str();
  } else {
    open_out(out) << csv.str();
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sgcl: spiking graph contrastive learning"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "sgcl 0.1.0");

  auto add_common = [](CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config_path, "key=value config file (default ./sgcl.conf)");
  };

  Common train_c, embed_c, eval_c, verify_c, energy_c, cka_c, probe_c;

  auto* train_cmd = app.add_subcommand("train", "train an encoder and write its artifacts");
  add_common(train_cmd, train_c);
  train_c.flags.add(train_cmd, kTrainKeys);
  train_c.flags.add(train_cmd, {"data", "out"});

  auto* embed_cmd = app.add_subcommand("embed", "encode a graph with a trained checkpoint");
  add_common(embed_cmd, embed_c);
  embed_c.flags.add(embed_cmd, {"checkpoint", "data", "out", "threads"});

  std::string split_file, eval_csv;
  auto* eval_cmd = app.add_subcommand("eval", "linear-probe accuracy of an embedding file");
  add_common(eval_cmd, eval_c);
  eval_c.flags.add(eval_cmd, kEvalKeys);
  eval_c.flags.add(eval_cmd, {"embeddings", "labels", "data"});
  eval_cmd->add_option("--split", split_file, "fixed split file (node,part lines)");
  eval_cmd->add_option("--csv", eval_csv, "per-trial CSV output");

  VerifyArgs va;
  auto* verify_cmd =
      app.add_subcommand("verify-theorem", "check the firing-rate approximation bound");
  add_common(verify_cmd, verify_c);
  verify_c.flags.add(verify_cmd, {"seed", "threads"});
  verify_cmd->add_option("--n", va.n, "nodes per graph");
  verify_cmd->add_option("--dmax", va.dmax, "maximum degree");
  verify_cmd->add_option("--L", va.depth, "layers");
  verify_cmd->add_option("--d", va.d, "input feature width");
  verify_cmd->add_option("--k", va.k, "hidden width");
  verify_cmd->add_option("--T", va.steps, "comma-separated time steps");
  verify_cmd->add_option("--seeds", va.seeds, "number of random instances");
  verify_cmd->add_option("--vth", va.v_th, "firing threshold");
  verify_cmd->add_option("--reset", va.reset, "reset mode");
  verify_cmd->add_option("--out", va.out, "CSV output (default stdout)");

  EnergyArgs ea;
  auto* energy_cmd = app.add_subcommand("energy", "theoretical inference energy");
  add_common(energy_cmd, energy_c);
  energy_c.flags.add(energy_cmd, {"checkpoint", "data", "threads"});
  energy_cmd->add_option("--from-history", ea.history, "training history CSV");
  energy_cmd->add_option("--edges", ea.edges, "directed edge entries for baselines");
  energy_cmd->add_option("--baseline-d", ea.baseline_d, "baseline hidden width");
  energy_cmd->add_option("--baseline-layers", ea.baseline_layers, "baseline layer count");

  CkaArgs ca;
  auto* cka_cmd = app.add_subcommand("cka", "linear CKA similarity");
  add_common(cka_cmd, cka_c);
  cka_c.flags.add(cka_cmd, {"checkpoint", "data", "threads"});
  cka_cmd->add_option("--x", ca.x, "first matrix CSV");
  cka_cmd->add_option("--y", ca.y, "second matrix CSV");
  cka_cmd->add_option("--matrix", ca.matrix, "write the TxT group/spike CKA matrix as CSV");

  bool no_isolate = false;
  std::size_t probe_nodes = 200;
  std::string probe_out;
  auto* probe_cmd = app.add_subcommand("grad-probe", "per-step first-layer gradient norms");
  add_common(probe_cmd, probe_c);
  probe_c.flags.add(probe_cmd, kTrainKeys);
  probe_c.flags.add(probe_cmd, {"data"});
  probe_cmd->add_flag("--no-isolate", no_isolate, "backpropagate through all steps");
  probe_cmd->add_option("--nodes", probe_nodes, "synthetic graph size when --data is absent");
  probe_cmd->add_option("--out", probe_out, "CSV output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kExitConfig;
  }

  try {
    if (*train_cmd) return cmd_train(resolve(train_c));
    if (*embed_cmd) return cmd_embed(resolve(embed_c));
    if (*eval_cmd) return cmd_eval(resolve(eval_c), split_file, eval_csv);
    if (*verify_cmd) return cmd_verify(resolve(verify_c), va);
    if (*energy_cmd) return cmd_energy(resolve(energy_c), ea);
    if (*cka_cmd) return cmd_cka(resolve(cka_c), ca);
    if (*probe_cmd) return cmd_grad_probe(resolve(probe_c), no_isolate, probe_nodes, probe_out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kOk;
}
