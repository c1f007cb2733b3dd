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

#include "sss/model.hpp"

#include <stdexcept>
#include <unordered_map>

namespace sss {

Model build_model(const ModelConfig& cfg, Vocabulary vocab, LabelVocab labels, std::uint64_t seed,
                  std::optional<EmbeddingProvider> precomputed) {
  cfg.encoder.validate();
  cfg.decoder.validate();
  if (precomputed && precomputed->is_lookup())
    throw std::invalid_argument("build_model: precomputed provider expected");
  if ((cfg.encoder.embedding == EmbeddingKind::precomputed) != precomputed.has_value())
    throw std::invalid_argument(
        "build_model: embedding kind and supplied precomputed embeddings disagree");
  Model m;
  m.cfg = cfg;
  m.vocab = std::move(vocab);
  m.labels = std::move(labels);
  Rng rng(seed);
  const std::size_t E = cfg.encoder.embedding_dim;
  m.word_table = m.store.add_glorot("emb.words", m.vocab.size(), E, rng);
  m.provider = precomputed ? *precomputed : EmbeddingProvider::lookup(m.word_table, E);
  const std::size_t input_dim = m.provider.dim();
  m.encoder = declare_encoder(m.store, cfg.encoder, input_dim, m.labels, rng);
  m.context = declare_lstm(m.store, "ctx", E, cfg.decoder.hidden, rng);
  m.decoder = declare_decoder(m.store, cfg.decoder, m.vocab.size(), E,
                              m.encoder.output_dim(), rng);
  return m;
}

Example prepare_example(const Model& model, const CorpusRecord& record) {
  const Vocabulary& v = model.vocab;
  Example ex;
  ex.record = &record;
  for (const auto& w : record.context_tokens) ex.context_ids.push_back(v.id(w));
  if (ex.context_ids.empty()) ex.context_ids.push_back(Vocabulary::kSep);

  std::unordered_map<std::string, std::size_t> oov_slot;
  for (const auto& w : record.doc_tokens) {
    if (v.contains(w)) {
      ex.copy_slots.push_back(v.id(w));
      continue;
    }
    auto [it, fresh] = oov_slot.emplace(w, v.size() + ex.oov_words.size());
    if (fresh) ex.oov_words.push_back(w);
    ex.copy_slots.push_back(it->second);
  }

  const bool copy = model.cfg.decoder.copy;
  ex.inputs.push_back(Vocabulary::kSos);
  for (const auto& w : record.response_tokens) {
    std::size_t target = Vocabulary::kUnk;
    if (v.contains(w)) target = v.id(w);
    else if (copy && oov_slot.count(w)) target = oov_slot.at(w);
    ex.targets.push_back(target);
    ex.inputs.push_back(target < v.size() ? target : Vocabulary::kUnk);
  }
  ex.targets.push_back(Vocabulary::kEos);
  return ex;
}

PreparedInputs prepare_inputs(Session& s, const Model& model, const Example& ex) {
  const CorpusRecord& r = *ex.record;
  const Tensor x = model.provider.embed(s, r, model.vocab);
  const EncodedDocument doc = encode(s, model.encoder, x, &r.graphs, model.labels);
  const SequenceOutput ctx = context_encode(s, model.context, ex.context_ids, model.word_table);
  DecoderMemory mem = make_memory(s, model.decoder, ctx.states, doc.h_final, doc.mask, ex.copy_slots,
                                  ex.extended_size(model.vocab.size()));
  return {std::move(mem), initial_state(model.decoder, ctx.final)};
}

ForwardResult teacher_forced(Session& s, const Model& model, const Example& ex,
                             const StepOptions& options) {
  PreparedInputs in = prepare_inputs(s, model, ex);
  const Tensor table = s(model.word_table);
  DecoderState state = in.start;
  std::vector<Tensor> dists;
  ForwardResult result;
  for (std::size_t t = 0; t < ex.targets.size(); ++t) {
    StepResult step =
        decode_step(s, model.decoder, in.memory, state, gather_rows(table, {ex.inputs[t]}), options);
    if (argmax(step.distribution.values()) == ex.targets[t]) ++result.correct;
    dists.push_back(step.distribution);
    state = std::move(step.state);
  }
  result.steps = ex.targets.size();
  result.loss = nll_loss(dists, ex.targets);
  return result;
}

std::vector<std::string> greedy_response(Session& s, const Model& model, const Example& ex,
                                         const StepOptions& options) {
  PreparedInputs in = prepare_inputs(s, model, ex);
  const Tensor table = s(model.word_table);
  const std::size_t V = model.vocab.size();
  auto embed = [&](std::size_t id) { return gather_rows(table, {id < V ? id : Vocabulary::kUnk}); };
  const auto ids = greedy_decode(s, model.decoder, in.memory, in.start, embed, Vocabulary::kSos,
                                 Vocabulary::kEos, model.cfg.decoder.max_len, options);
  std::vector<std::string> words;
  words.reserve(ids.size());
  for (std::size_t id : ids) words.push_back(id < V ? model.vocab.word(id) : ex.oov_words[id - V]);
  return words;
}

}  // namespace sss
