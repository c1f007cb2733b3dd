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

#ifndef SSS_CONFIG_HPP
#define SSS_CONFIG_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sss/graph.hpp"

namespace sss {

enum class EncoderMode { sem, sem_seq, seq_gcn, str_lstm, par_gcn_lstm };
enum class EmbeddingKind { lookup, precomputed };

std::string_view mode_name(EncoderMode mode);
EncoderMode mode_from_name(std::string_view name);
bool uses_structure(EncoderMode mode);
bool uses_sequence(EncoderMode mode);

struct EncoderConfig {
  EncoderMode mode = EncoderMode::par_gcn_lstm;
  std::vector<RelationKind> relations = {RelationKind::dep, RelationKind::coref, RelationKind::ent};
  std::size_t hops = 1;
  EmbeddingKind embedding = EmbeddingKind::lookup;
  std::size_t embedding_dim = 100;
  std::size_t lstm_hidden = 256;
  /// 0 picks the mode default: the BiLSTM width (2 x lstm_hidden) for
  /// seq_gcn and par_gcn_lstm, 128 otherwise.
  std::size_t gcn_hidden = 0;

  std::size_t resolved_gcn_hidden() const;
  /// Width of h_final for a document embedding of width `input_dim`.
  std::size_t output_dim(std::size_t input_dim) const;
  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

struct DecoderConfig {
  std::size_t hidden = 256;
  std::size_t attention = 256;
  /// When false p_gen is pinned to 1 and nothing is copied.
  bool copy = true;
  std::size_t max_len = 40;

  void validate() const;
};

struct ModelConfig {
  EncoderConfig encoder;
  DecoderConfig decoder;
};

struct TrainConfig {
  double learning_rate = 0.0004;
  std::size_t batch_size = 8;
  double clip_norm = 2.0;
  std::size_t epochs = 15;
  std::uint64_t seed = 1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t max_vocab = 50000;
  std::size_t min_count = 1;
  std::size_t max_labels = 32;
  /// Stop once teacher-forced train accuracy reaches this (0 disables).
  double target_train_accuracy = 0.0;

  void validate() const;
};

struct DataConfig {
  std::string train;
  std::string valid;
  std::string out_dir = "run";
  std::string embeddings;  ///< SSSEMB1 file for precomputed document embeddings
  std::size_t entity_window = kDefaultEntityWindow;
  WindowUnit window_unit = WindowUnit::tokens;
};

struct RunConfig {
  ModelConfig model;
  TrainConfig train;
  DataConfig data;
};

RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);
std::string dump_run_config(const RunConfig& cfg);

/// JSON of the model-shaping settings only; its digest goes into
/// checkpoints.
std::string model_config_json(const ModelConfig& cfg);
ModelConfig model_config_from_json(std::string_view text);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);

}  // namespace sss

#endif  // SSS_CONFIG_HPP
