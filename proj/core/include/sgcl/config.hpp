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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sgcl/probe.hpp"
#include "sgcl/trainer.hpp"

namespace sgcl {

// Every setting a command can take. Serialized as flat key=value text.
struct RunConfig {
  TrainConfig train;
  ProbeConfig probe;
  SplitRatios ratios;
  bool stratified = true;
  std::size_t trials = 10;
  std::size_t threads = 0;  // 0 = hardware concurrency
  bool seed_set = false;    // seed given explicitly (file or flag)
  std::string data;
  std::string out;
  std::string checkpoint;
  std::string embeddings;
  std::string labels;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

// Parses key=value lines. '#' starts a comment; blank lines are skipped.
// Throws kConfig on malformed lines or repeated keys, naming the line.
KeyValues parse_key_values(const std::string& text, const std::string& source);
KeyValues read_config_file(const std::filesystem::path& file);

// Sorted list of accepted keys.
const std::vector<std::string>& config_keys();

// Throws kConfig for unknown keys or values that do not parse.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
void apply_settings(RunConfig& cfg, const KeyValues& kv);

// Falls back to SGCL_SEED when no seed was given; throws kConfig when the
// variable is set but not an unsigned integer.
void apply_seed_env(RunConfig& cfg);

// Field-level checks that do not need the dataset.
void validate(const RunConfig& cfg);

std::string to_key_values(const RunConfig& cfg);

}  // namespace sgcl
