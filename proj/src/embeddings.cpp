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

#include "sss/embeddings.hpp"

#include <fstream>
#include <stdexcept>

#include "sss/binary_io.hpp"

namespace sss {

EmbeddingMatrix read_embedding_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open embedding file '" + path + "'");
  char magic[8];
  in.read(magic, 8);
  if (!in || std::string_view(magic, 8) != kEmbeddingMagic)
    throw std::runtime_error("'" + path + "': bad magic, not an SSSEMB1 file");
  EmbeddingMatrix m;
  m.rows = io::read_u64(in);
  m.dim = io::read_u64(in);
  if (m.dim == 0) throw std::runtime_error("'" + path + "': zero embedding dimension");
  m.values.resize(m.rows * m.dim);
  for (double& v : m.values) v = io::read_f32(in);
  if (!in) throw std::runtime_error("'" + path + "': truncated, expected " +
                                    std::to_string(m.rows) + " rows of dimension " +
                                    std::to_string(m.dim));
  in.peek();
  if (!in.eof()) throw std::runtime_error("'" + path + "': trailing bytes after declared rows");
  return m;
}

void write_embedding_file(const std::string& path, const EmbeddingMatrix& m) {
  if (m.values.size() != m.rows * m.dim)
    throw std::invalid_argument("embedding matrix value count does not match rows x dim");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write embedding file '" + path + "'");
  out.write(kEmbeddingMagic.data(), 8);
  io::write_u64(out, m.rows);
  io::write_u64(out, m.dim);
  for (double v : m.values) io::write_f32(out, static_cast<float>(v));
}

}  // namespace sss
