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

#include "sss/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace sss {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, 5> kModeNames = {"sem", "sem_seq", "seq_gcn", "str_lstm",
                                                        "par_gcn_lstm"};

void reject_unknown(const json& obj, const std::string& section,
                    const std::set<std::string>& known) {
  if (!obj.is_object()) throw std::invalid_argument("config: '" + section + "' must be an object");
  for (const auto& [key, value] : obj.items())
    if (!known.count(key))
      throw std::invalid_argument("config: unknown key '" + section + "." + key + "'");
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

json encoder_json(const EncoderConfig& e) {
  json rel = json::array();
  for (RelationKind k : e.relations) rel.push_back(std::string(relation_name(k)));
  return {{"mode", std::string(mode_name(e.mode))},
          {"relations", rel},
          {"hops", e.hops},
          {"embedding", e.embedding == EmbeddingKind::lookup ? "lookup" : "precomputed"},
          {"embedding_dim", e.embedding_dim},
          {"lstm_hidden", e.lstm_hidden},
          {"gcn_hidden", e.gcn_hidden}};
}

json decoder_json(const DecoderConfig& d) {
  return {{"hidden", d.hidden}, {"attention", d.attention}, {"copy", d.copy}, {"max_len", d.max_len}};
}

EncoderConfig encoder_from(const json& obj) {
  reject_unknown(obj, "encoder",
                 {"mode", "relations", "hops", "embedding", "embedding_dim", "lstm_hidden",
                  "gcn_hidden"});
  EncoderConfig e;
  if (obj.contains("mode")) e.mode = mode_from_name(obj.at("mode").get<std::string>());
  if (obj.contains("relations")) {
    e.relations.clear();
    for (const auto& r : obj.at("relations"))
      e.relations.push_back(relation_from_name(r.get<std::string>()));
  }
  read(obj, "hops", e.hops);
  if (obj.contains("embedding")) {
    const auto kind = obj.at("embedding").get<std::string>();
    if (kind == "lookup") e.embedding = EmbeddingKind::lookup;
    else if (kind == "precomputed") e.embedding = EmbeddingKind::precomputed;
    else throw std::invalid_argument("config: unknown embedding kind '" + kind + "'");
  }
  read(obj, "embedding_dim", e.embedding_dim);
  read(obj, "lstm_hidden", e.lstm_hidden);
  read(obj, "gcn_hidden", e.gcn_hidden);
  return e;
}

DecoderConfig decoder_from(const json& obj) {
  reject_unknown(obj, "decoder", {"hidden", "attention", "copy", "max_len"});
  DecoderConfig d;
  read(obj, "hidden", d.hidden);
  read(obj, "attention", d.attention);
  read(obj, "copy", d.copy);
  read(obj, "max_len", d.max_len);
  return d;
}

}  // namespace

std::string_view mode_name(EncoderMode mode) { return kModeNames[static_cast<std::size_t>(mode)]; }

EncoderMode mode_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kModeNames.size(); ++i)
    if (kModeNames[i] == name) return static_cast<EncoderMode>(i);
  throw std::invalid_argument("unknown encoder mode '" + std::string(name) + "'");
}

bool uses_structure(EncoderMode mode) {
  return mode == EncoderMode::seq_gcn || mode == EncoderMode::str_lstm ||
         mode == EncoderMode::par_gcn_lstm;
}

bool uses_sequence(EncoderMode mode) { return mode != EncoderMode::sem; }

std::size_t EncoderConfig::resolved_gcn_hidden() const {
  if (mode == EncoderMode::par_gcn_lstm || (mode == EncoderMode::seq_gcn && gcn_hidden == 0))
    return 2 * lstm_hidden;
  return gcn_hidden == 0 ? 128 : gcn_hidden;
}

std::size_t EncoderConfig::output_dim(std::size_t input_dim) const {
  switch (mode) {
    case EncoderMode::sem: return input_dim;
    case EncoderMode::seq_gcn: return resolved_gcn_hidden();
    default: return 2 * lstm_hidden;
  }
}

void EncoderConfig::validate() const {
  if (embedding_dim == 0 || lstm_hidden == 0)
    throw std::invalid_argument("encoder: sizes must be positive");
  if (uses_structure(mode)) {
    if (relations.empty())
      throw std::invalid_argument("encoder: structural mode needs at least one relation kind");
    std::set<RelationKind> seen(relations.begin(), relations.end());
    if (seen.size() != relations.size())
      throw std::invalid_argument("encoder: relation listed twice");
    if (hops < 1 || hops > 3) throw std::invalid_argument("encoder: hops must be 1, 2 or 3");
  }
  if (mode == EncoderMode::par_gcn_lstm && gcn_hidden != 0 && gcn_hidden != 2 * lstm_hidden)
    throw std::invalid_argument(
        "encoder: dimension conflict, par_gcn_lstm sums M-GCN and BiLSTM outputs so gcn_hidden "
        "must equal 2 x lstm_hidden (" +
        std::to_string(2 * lstm_hidden) + ")");
}

void DecoderConfig::validate() const {
  if (hidden == 0 || attention == 0) throw std::invalid_argument("decoder: sizes must be positive");
  if (max_len == 0) throw std::invalid_argument("decoder: max_len must be at least 1");
}

void TrainConfig::validate() const {
  if (!(learning_rate > 0) || batch_size == 0 || !(clip_norm > 0) || epochs == 0)
    throw std::invalid_argument("train: learning_rate, batch_size, clip_norm, epochs must be positive");
  if (max_vocab < 5) throw std::invalid_argument("train: max_vocab too small");
}

RunConfig parse_run_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  reject_unknown(root, "config", {"encoder", "decoder", "train", "data"});
  RunConfig cfg;
  try {
    if (root.contains("encoder")) cfg.model.encoder = encoder_from(root.at("encoder"));
    if (root.contains("decoder")) cfg.model.decoder = decoder_from(root.at("decoder"));
    if (root.contains("train")) {
      const json& t = root.at("train");
      reject_unknown(t, "train",
                     {"learning_rate", "batch_size", "clip_norm", "epochs", "seed", "beta1", "beta2",
                      "epsilon", "max_vocab", "min_count", "max_labels", "target_train_accuracy"});
      read(t, "learning_rate", cfg.train.learning_rate);
      read(t, "batch_size", cfg.train.batch_size);
      read(t, "clip_norm", cfg.train.clip_norm);
      read(t, "epochs", cfg.train.epochs);
      read(t, "seed", cfg.train.seed);
      read(t, "beta1", cfg.train.beta1);
      read(t, "beta2", cfg.train.beta2);
      read(t, "epsilon", cfg.train.epsilon);
      read(t, "max_vocab", cfg.train.max_vocab);
      read(t, "min_count", cfg.train.min_count);
      read(t, "max_labels", cfg.train.max_labels);
      read(t, "target_train_accuracy", cfg.train.target_train_accuracy);
    }
    if (root.contains("data")) {
      const json& d = root.at("data");
      reject_unknown(d, "data",
                     {"train", "valid", "out_dir", "embeddings", "entity_window", "window_unit"});
      read(d, "train", cfg.data.train);
      read(d, "valid", cfg.data.valid);
      read(d, "out_dir", cfg.data.out_dir);
      read(d, "embeddings", cfg.data.embeddings);
      read(d, "entity_window", cfg.data.entity_window);
      if (d.contains("window_unit")) {
        const auto unit = d.at("window_unit").get<std::string>();
        if (unit == "tokens") cfg.data.window_unit = WindowUnit::tokens;
        else if (unit == "entities") cfg.data.window_unit = WindowUnit::entities;
        else throw std::invalid_argument("config: unknown window_unit '" + unit + "'");
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  cfg.model.encoder.validate();
  cfg.model.decoder.validate();
  cfg.train.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

std::string dump_run_config(const RunConfig& cfg) {
  const auto& t = cfg.train;
  json root = {{"encoder", encoder_json(cfg.model.encoder)},
               {"decoder", decoder_json(cfg.model.decoder)},
               {"train",
                {{"learning_rate", t.learning_rate},
                 {"batch_size", t.batch_size},
                 {"clip_norm", t.clip_norm},
                 {"epochs", t.epochs},
                 {"seed", t.seed},
                 {"beta1", t.beta1},
                 {"beta2", t.beta2},
                 {"epsilon", t.epsilon},
                 {"max_vocab", t.max_vocab},
                 {"min_count", t.min_count},
                 {"max_labels", t.max_labels},
                 {"target_train_accuracy", t.target_train_accuracy}}},
               {"data",
                {{"train", cfg.data.train},
                 {"valid", cfg.data.valid},
                 {"out_dir", cfg.data.out_dir},
                 {"embeddings", cfg.data.embeddings},
                 {"entity_window", cfg.data.entity_window},
                 {"window_unit",
                  cfg.data.window_unit == WindowUnit::tokens ? "tokens" : "entities"}}}};
  return root.dump(2);
}

std::string model_config_json(const ModelConfig& cfg) {
  return json{{"encoder", encoder_json(cfg.encoder)}, {"decoder", decoder_json(cfg.decoder)}}.dump();
}

ModelConfig model_config_from_json(std::string_view text) {
  const json root = json::parse(text);
  ModelConfig cfg;
  cfg.encoder = encoder_from(root.at("encoder"));
  cfg.decoder = decoder_from(root.at("decoder"));
  cfg.encoder.validate();
  cfg.decoder.validate();
  return cfg;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace sss
