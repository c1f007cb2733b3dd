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

#include "sss/encoder.hpp"

#include <filesystem>
#include <stdexcept>

namespace sss {

EmbeddingProvider EmbeddingProvider::lookup(ParamId table, std::size_t dim) {
  EmbeddingProvider p;
  p.table_ = table;
  p.dim_ = dim;
  return p;
}

EmbeddingProvider EmbeddingProvider::precomputed(std::shared_ptr<const EmbeddingMatrix> rows,
                                                 std::string name) {
  if (!rows) throw std::invalid_argument("precomputed provider needs rows");
  EmbeddingProvider p;
  p.dim_ = rows->dim;
  p.rows_ = std::move(rows);
  p.name_ = std::move(name);
  return p;
}

Tensor EmbeddingProvider::embed(Session& s, const CorpusRecord& record,
                                const Vocabulary& vocab) const {
  const std::size_t n = record.doc_tokens.size();
  if (n == 0) throw std::invalid_argument("embed: empty document");
  if (table_) {
    std::vector<std::size_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = vocab.id(record.doc_tokens[i]);
    return gather_rows(s(*table_), std::move(ids));
  }
  if (!record.embedding_ref)
    throw std::invalid_argument("embed: record has no embedding_ref for precomputed embeddings");
  const std::size_t offset = record.embedding_ref->row_offset;
  if (offset + n > rows_->rows)
    throw std::out_of_range("embed: rows [" + std::to_string(offset) + ", " +
                            std::to_string(offset + n) + ") exceed the " +
                            std::to_string(rows_->rows) + " rows of '" + name_ + "'");
  std::vector<double> values(rows_->values.begin() + static_cast<std::ptrdiff_t>(offset * dim_),
                             rows_->values.begin() + static_cast<std::ptrdiff_t>((offset + n) * dim_));
  return Tensor({n, dim_}, std::move(values));
}

EmbeddingProvider load_embeddings(const std::string& path) {
  auto rows = std::make_shared<EmbeddingMatrix>(read_embedding_file(path));
  return EmbeddingProvider::precomputed(std::move(rows), path);
}

void check_embedding_refs(const EmbeddingProvider& provider, std::span<const CorpusRecord> records) {
  if (provider.is_lookup()) return;
  ParamStore empty;
  Session s(empty);
  Vocabulary vocab;
  for (const auto& r : records) (void)provider.embed(s, r, vocab);
}

EncoderParams declare_encoder(ParamStore& store, const EncoderConfig& cfg, std::size_t input_dim,
                              const LabelVocab& labels, Rng& rng) {
  cfg.validate();
  EncoderParams p;
  p.cfg = cfg;
  p.input_dim = input_dim;
  if (uses_sequence(cfg.mode)) {
    const std::size_t lstm_in =
        cfg.mode == EncoderMode::str_lstm ? cfg.resolved_gcn_hidden() : input_dim;
    p.bilstm = declare_bilstm(store, "enc.bilstm", lstm_in, cfg.lstm_hidden, rng);
  }
  if (uses_structure(cfg.mode)) {
    const std::size_t gcn_dim = cfg.resolved_gcn_hidden();
    const std::size_t gcn_in = cfg.mode == EncoderMode::seq_gcn ? 2 * cfg.lstm_hidden : input_dim;
    if (gcn_in != gcn_dim) p.projection = store.add_glorot("enc.proj", gcn_in, gcn_dim, rng);
    p.mgcn = declare_mgcn(store, "enc.gcn", gcn_dim, cfg.hops, cfg.relations, labels, rng);
  }
  return p;
}

namespace {

Tensor structure(Session& s, const EncoderParams& p, const Tensor& in,
                 const LabeledMultiGraph* graphs, const LabelVocab& labels) {
  if (!graphs) throw std::invalid_argument("encode: structural mode needs graphs");
  if (graphs->length() != in.rows())
    throw std::invalid_argument("encode: graph covers " + std::to_string(graphs->length()) +
                                " tokens, document has " + std::to_string(in.rows()));
  const auto views = resolve_views(*graphs, p.cfg.relations, labels);
  const Tensor h0 = p.projection ? matmul(in, s(*p.projection)) : in;
  return mgcn_forward(s, h0, views, *p.mgcn);
}

}  // namespace

EncodedDocument encode(Session& s, const EncoderParams& p, const Tensor& x,
                       const LabeledMultiGraph* graphs, const LabelVocab& labels) {
  if (x.rank() != 2 || x.cols() != p.input_dim)
    throw std::invalid_argument("encode: expected [n x " + std::to_string(p.input_dim) +
                                "] embeddings, got " + shape_string(x.shape()));
  Tensor h;
  switch (p.cfg.mode) {
    case EncoderMode::sem:
      h = x;
      break;
    case EncoderMode::sem_seq:
      h = bilstm_forward(s, *p.bilstm, x);
      break;
    case EncoderMode::seq_gcn:
      h = structure(s, p, bilstm_forward(s, *p.bilstm, x), graphs, labels);
      break;
    case EncoderMode::str_lstm:
      h = bilstm_forward(s, *p.bilstm, structure(s, p, x, graphs, labels));
      break;
    case EncoderMode::par_gcn_lstm: {
      const Tensor str = structure(s, p, x, graphs, labels);
      const Tensor seq = bilstm_forward(s, *p.bilstm, x);
      if (str.shape() != seq.shape())
        throw std::invalid_argument("encode: dimension conflict between M-GCN " +
                                    shape_string(str.shape()) + " and BiLSTM " +
                                    shape_string(seq.shape()));
      h = add(str, seq);
      break;
    }
  }
  return {h, Tensor::filled({1, x.rows()}, 1.0)};
}

}  // namespace sss
