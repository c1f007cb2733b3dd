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

#ifndef SSS_GRADCHECK_SUITE_HPP
#define SSS_GRADCHECK_SUITE_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sss/grad_check.hpp"

namespace sss {

inline constexpr double kGradCheckStep = 1e-5;
inline constexpr double kGradCheckTolerance = 1e-3;

struct ModuleGradCheck {
  std::string module;
  GradCheckReport report;
  double seconds = 0.0;
};

/// Names accepted by run_module_gradcheck: "gcn" (one syntactic GCN layer),
/// "mgcn" (2 hops over dep and coref), "bilstm", and "model" (the full
/// encoder-decoder teacher-forced loss on a 6-token document).
std::vector<std::string> gradcheck_modules();

/// Central-difference check of one module with randomized parameters.
/// Throws std::invalid_argument for an unknown module name.
ModuleGradCheck run_module_gradcheck(std::string_view module, std::uint64_t seed = 1);

}  // namespace sss

#endif  // SSS_GRADCHECK_SUITE_HPP
