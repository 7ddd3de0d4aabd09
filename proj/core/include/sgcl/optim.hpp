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

#include "sgcl/dense.hpp"

namespace sgcl {

struct OptimConfig {
  float learning_rate = 1e-3f;
  float beta1 = 0.9f;
  float beta2 = 0.999f;
  float epsilon = 1e-8f;
  float weight_decay = 0.0f;
};

// Throws ErrorKind::kConfig on out-of-range hyperparameters.
void validate(const OptimConfig& cfg);

// Decoupled weight decay, then a bias-corrected Adam update. Increments
// step_count and zeroes the gradient.
void adamw_step(ParamTensor& p, const OptimConfig& cfg);

}  // namespace sgcl
