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

#include "sss/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include "sss/binary_io.hpp"

namespace sss {

std::uint64_t config_digest(const ModelConfig& cfg) { return fnv1a64(model_config_json(cfg)); }

void save_checkpoint(const std::string& path, const Model& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw CheckpointError("cannot write checkpoint '" + path + "'");
  const std::string cfg = model_config_json(model.cfg);
  out.write(kCheckpointMagic, sizeof kCheckpointMagic);
  io::write_u64(out, fnv1a64(cfg));
  io::write_string(out, cfg);
  io::write_u64(out, model.vocab.size());
  for (const auto& w : model.vocab.words()) io::write_string(out, w);
  for (RelationKind k : kAllRelations) {
    const auto& labels = model.labels.labels(k);
    io::write_u64(out, labels.size());
    for (const auto& l : labels) io::write_string(out, l);
  }
  io::write_u64(out, model.store.size());
  for (const auto& p : model.store) {
    io::write_string(out, p.name);
    io::write_u64(out, p.shape.size());
    for (std::size_t d : p.shape) io::write_u64(out, d);
    for (double v : p.values) io::write_f64(out, v);
  }
  if (!out) throw CheckpointError("failed writing checkpoint '" + path + "'");
}

Model load_checkpoint(const std::string& path, std::optional<EmbeddingProvider> precomputed,
                      const std::optional<ModelConfig>& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot open checkpoint '" + path + "'");
  auto fail = [&](const std::string& what) -> CheckpointError {
    return CheckpointError("checkpoint '" + path + "': " + what);
  };
  char magic[sizeof kCheckpointMagic] = {};
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kCheckpointMagic, sizeof magic) != 0) throw fail("bad magic");
  try {
    const std::uint64_t digest = io::read_u64(in);
    const std::string cfg_json = io::read_string(in);
    if (fnv1a64(cfg_json) != digest) throw fail("config digest does not match its config");
    const ModelConfig cfg = model_config_from_json(cfg_json);
    if (expected && config_digest(*expected) != digest)
      throw fail("model config differs from the checkpoint (dimension mismatch)");

    std::vector<std::string> words(io::read_u64(in));
    for (auto& w : words) w = io::read_string(in);
    Vocabulary vocab(words);
    if (vocab.words() != words) throw fail("corrupt vocabulary");
    LabelVocab labels;
    for (RelationKind k : kAllRelations) {
      std::vector<std::string> names(io::read_u64(in));
      for (auto& l : names) l = io::read_string(in);
      labels.set_labels(k, std::move(names));
    }

    Model model = build_model(cfg, std::move(vocab), std::move(labels), 0, std::move(precomputed));
    const std::uint64_t count = io::read_u64(in);
    if (count != model.store.size())
      throw fail("expected " + std::to_string(model.store.size()) + " parameters, found " +
                 std::to_string(count));
    for (ParamId id = 0; id < count; ++id) {
      auto& p = model.store[id];
      const std::string name = io::read_string(in);
      Shape shape(io::read_u64(in));
      if (shape.size() > 8) throw fail("corrupt shape");
      for (auto& d : shape) d = io::read_u64(in);
      if (name != p.name || shape != p.shape)
        throw fail("parameter " + std::to_string(id) + " is " + name + " " + shape_string(shape) +
                   ", model expects " + p.name + " " + shape_string(p.shape));
      for (double& v : p.values) v = io::read_f64(in);
    }
    if (!in) throw fail("truncated");
    if (in.peek() != std::char_traits<char>::eof()) throw fail("trailing bytes");
    return model;
  } catch (const CheckpointError&) {
    throw;
  } catch (const std::exception& e) {
    throw fail(e.what());
  }
}

}  // namespace sss
