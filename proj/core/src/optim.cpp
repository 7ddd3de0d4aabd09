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

#include "sgcl/optim.hpp"

#include <cmath>

#include "sgcl/error.hpp"

namespace sgcl {

void validate(const OptimConfig& cfg) {
  require(cfg.learning_rate > 0.0f, ErrorKind::kConfig, "learning_rate must be > 0");
  require(cfg.beta1 > 0.0f && cfg.beta1 < 1.0f, ErrorKind::kConfig, "beta1 must lie in (0, 1)");
  require(cfg.beta2 > 0.0f && cfg.beta2 < 1.0f, ErrorKind::kConfig, "beta2 must lie in (0, 1)");
  require(cfg.epsilon > 0.0f, ErrorKind::kConfig, "epsilon must be > 0");
  require(cfg.weight_decay >= 0.0f, ErrorKind::kConfig, "weight_decay must be >= 0");
}

void adamw_step(ParamTensor& p, const OptimConfig& cfg) {
  check_finite(p.grad, "adamw_step gradient");
  ++p.step_count;
  const double t = static_cast<double>(p.step_count);
  const float bc1 = static_cast<float>(1.0 - std::pow(static_cast<double>(cfg.beta1), t));
  const float bc2 = static_cast<float>(1.0 - std::pow(static_cast<double>(cfg.beta2), t));
  const float decay = cfg.learning_rate * cfg.weight_decay;

  auto value = p.value.data();
  auto grad = p.grad.data();
  auto m = p.adamw_m.data();
  auto v = p.adamw_v.data();
  for (std::size_t i = 0; i < value.size(); ++i) {
    value[i] -= decay * value[i];
    m[i] = cfg.beta1 * m[i] + (1.0f - cfg.beta1) * grad[i];
    v[i] = cfg.beta2 * v[i] + (1.0f - cfg.beta2) * grad[i] * grad[i];
    const float m_hat = m[i] / bc1;
    const float v_hat = v[i] / bc2;
    value[i] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    grad[i] = 0.0f;
  }
}

}  // namespace sgcl
