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

#ifndef SSS_MODEL_HPP
#define SSS_MODEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "sss/config.hpp"
#include "sss/decoder.hpp"
#include "sss/encoder.hpp"
#include "sss/lstm.hpp"
#include "sss/params.hpp"
#include "sss/vocab.hpp"

namespace sss {

/// Full encoder-decoder: word table "emb.words", document encoder "enc.*",
/// context LSTM "ctx.*" and decoder "dec.*", declared in that order.
struct Model {
  ModelConfig cfg;
  Vocabulary vocab;
  LabelVocab labels;
  ParamStore store;
  ParamId word_table = 0;
  EmbeddingProvider provider;
  EncoderParams encoder;
  LstmParams context;
  DecoderParams decoder;
};

/// With `precomputed` set, document vectors come from it and its width is
/// the encoder input; otherwise documents use the word table.
Model build_model(const ModelConfig& cfg, Vocabulary vocab, LabelVocab labels, std::uint64_t seed,
                  std::optional<EmbeddingProvider> precomputed = std::nullopt);

/// A record mapped onto one model's vocabularies.
struct Example {
  const CorpusRecord* record = nullptr;
  std::vector<std::size_t> context_ids;
  /// Document word types outside the fixed vocabulary, in order of first
  /// appearance; slot vocab.size() + k holds oov_words[k].
  std::vector<std::string> oov_words;
  std::vector<std::size_t> copy_slots;
  /// Extended ids of the response followed by the end token.
  std::vector<std::size_t> targets;
  /// Fixed-vocabulary ids fed at each step: the start token, then the
  /// previous targets with copied words replaced by <unk>.
  std::vector<std::size_t> inputs;

  std::size_t extended_size(std::size_t vocab_size) const { return vocab_size + oov_words.size(); }
};

/// An empty context is encoded as the single <sep> token. Response words
/// the model cannot produce map to <unk>.
Example prepare_example(const Model& model, const CorpusRecord& record);

struct ForwardResult {
  Tensor loss;
  std::size_t correct = 0;  ///< steps whose argmax equals the target
  std::size_t steps = 0;
};

struct PreparedInputs {
  DecoderMemory memory;
  DecoderState start;
};

PreparedInputs prepare_inputs(Session& s, const Model& model, const Example& ex);

/// Teacher-forced NLL over the response and end token.
ForwardResult teacher_forced(Session& s, const Model& model, const Example& ex,
                             const StepOptions& options = {});

std::vector<std::string> greedy_response(Session& s, const Model& model, const Example& ex,
                                         const StepOptions& options = {});

}  // namespace sss

#endif  // SSS_MODEL_HPP
