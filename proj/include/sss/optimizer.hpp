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

#ifndef SSS_OPTIMIZER_HPP
#define SSS_OPTIMIZER_HPP

#include <cstdint>
#include <vector>

#include "sss/params.hpp"

namespace sss {

struct AdamConfig {
  double learning_rate = 0.0004;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  /// Global-norm clipping threshold; 0 disables clipping.
  double clip_norm = 2.0;
};

struct StepOutcome {
  bool applied = false;
  double grad_norm = 0.0;  ///< global norm before clipping
  double clip_scale = 1.0;
};

/// Adam with bias correction, preceded by global-norm gradient clipping.
class Adam {
 public:
  Adam(const ParamStore& store, AdamConfig cfg);

  /// Clips `grads` in place and updates `store`. Non-finite gradients leave
  /// everything untouched and report applied = false.
  StepOutcome step(ParamStore& store, GradBuffer& grads);

  std::uint64_t steps() const { return t_; }
  const AdamConfig& config() const { return cfg_; }
  const std::vector<std::vector<double>>& first_moment() const { return m_; }
  const std::vector<std::vector<double>>& second_moment() const { return v_; }

 private:
  AdamConfig cfg_;
  std::uint64_t t_ = 0;
  std::vector<std::vector<double>> m_, v_;
};

/// Scales `grads` so its global norm is at most `max_norm`; returns the
/// factor applied.
double clip_global_norm(GradBuffer& grads, double max_norm);

}  // namespace sss

#endif  // SSS_OPTIMIZER_HPP
