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

#ifndef SSS_EMBEDDINGS_HPP
#define SSS_EMBEDDINGS_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sss {

/// Precomputed per-token vectors.
///
/// On-disk layout (all little-endian):
///   8 bytes   magic "SSSEMB1\0"
///   uint64    row count
///   uint64    dimension
///   float32   rows * dimension values, row-major
/// Values are promoted to double on load.
struct EmbeddingMatrix {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<double> values;

  std::span<const double> row(std::size_t i) const { return {values.data() + i * dim, dim}; }
};

inline constexpr std::string_view kEmbeddingMagic{"SSSEMB1\0", 8};

EmbeddingMatrix read_embedding_file(const std::string& path);
void write_embedding_file(const std::string& path, const EmbeddingMatrix& m);

}  // namespace sss

#endif  // SSS_EMBEDDINGS_HPP
