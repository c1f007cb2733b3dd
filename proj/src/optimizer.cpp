/*
 * Copyright 2026 The SSS Dialogue Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "sss/optimizer.hpp"

#include <cmath>
#include <stdexcept>

namespace sss {

double clip_global_norm(GradBuffer& grads, double max_norm) {
  const double norm = grads.global_norm();
  if (max_norm <= 0.0 || norm <= max_norm) return 1.0;
  const double scale = max_norm / norm;
  grads.scale(scale);
  return scale;
}

Adam::Adam(const ParamStore& store, AdamConfig cfg) : cfg_(cfg) {
  if (!(cfg.learning_rate > 0.0) || !(cfg.epsilon > 0.0) || cfg.beta1 < 0.0 || cfg.beta1 >= 1.0 ||
      cfg.beta2 < 0.0 || cfg.beta2 >= 1.0 || cfg.clip_norm < 0.0)
    throw std::invalid_argument("Adam: invalid hyperparameters");
  for (const auto& p : store) {
    m_.emplace_back(p.values.size(), 0.0);
    v_.emplace_back(p.values.size(), 0.0);
  }
}

StepOutcome Adam::step(ParamStore& store, GradBuffer& grads) {
  if (grads.grads.size() != m_.size() || store.size() != m_.size())
    throw std::invalid_argument("Adam: parameter count changed");
  StepOutcome out;
  if (!grads.all_finite()) return out;
  out.grad_norm = grads.global_norm();
  out.clip_scale = clip_global_norm(grads, cfg_.clip_norm);
  ++t_;
  const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (ParamId id = 0; id < store.size(); ++id) {
    auto& w = store[id].values;
    const auto& g = grads.grads[id];
    auto& m = m_[id];
    auto& v = v_[id];
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g[i];
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g[i] * g[i];
      w[i] -= cfg_.learning_rate * (m[i] / c1) / (std::sqrt(v[i] / c2) + cfg_.epsilon);
    }
  }
  out.applied = true;
  return out;
}

}  // namespace sss
