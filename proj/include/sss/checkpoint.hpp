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

#ifndef SSS_CHECKPOINT_HPP
#define SSS_CHECKPOINT_HPP

#include <optional>
#include <stdexcept>
#include <string>

#include "sss/model.hpp"

namespace sss {

inline constexpr char kCheckpointMagic[8] = {'S', 'S', 'S', 'C', 'K', 'P', 'T', '1'};

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Layout (little endian):
///   "SSSCKPT1", u64 FNV-1a digest of the model config JSON,
///   config JSON, word list, label lists for dep/coref/ent,
///   u64 parameter count, then per parameter in declaration order:
///   name, u64 rank, u64 dims..., f64 values.
/// Strings are u64 length followed by bytes.
void save_checkpoint(const std::string& path, const Model& model);

/// Rebuilds the model and restores its parameters. A model using
/// precomputed embeddings needs them passed in again. With `expected`, the
/// stored config digest must match it.
Model load_checkpoint(const std::string& path,
                      std::optional<EmbeddingProvider> precomputed = std::nullopt,
                      const std::optional<ModelConfig>& expected = std::nullopt);

std::uint64_t config_digest(const ModelConfig& cfg);

}  // namespace sss

#endif  // SSS_CHECKPOINT_HPP
