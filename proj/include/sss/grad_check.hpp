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

#ifndef SSS_GRAD_CHECK_HPP
#define SSS_GRAD_CHECK_HPP

#include <functional>
#include <string>
#include <vector>

#include "sss/params.hpp"

namespace sss {

struct ParamCheck {
  std::string name;
  double max_rel_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

struct GradCheckReport {
  std::vector<ParamCheck> params;
  double max_rel_error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

/// Scalar objective evaluated against whatever the session binds.
using ScalarObjective = std::function<Tensor(Session&)>;

/// Relative error used by grad_check: |a - n| / max(|a|, |n|, 1e-6).
double relative_error(double analytic, double numeric);

/// Compares analytic gradients against central differences for every value
/// of every parameter in `store` (or only those listed in `only`). Throws
/// if the objective gives different values at the base point on repeated
/// evaluation.
GradCheckReport grad_check(const ScalarObjective& f, ParamStore& store, double step, double tol,
                           const std::vector<ParamId>& only = {});

}  // namespace sss

#endif  // SSS_GRAD_CHECK_HPP
