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

#ifndef SSS_ENCODER_HPP
#define SSS_ENCODER_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "sss/config.hpp"
#include "sss/embeddings.hpp"
#include "sss/gcn.hpp"
#include "sss/graph.hpp"
#include "sss/lstm.hpp"
#include "sss/params.hpp"
#include "sss/vocab.hpp"

namespace sss {

/// Source of the per-token document vectors x_i: either the trainable word
/// table (unknown words share the <unk> row) or frozen precomputed rows
/// addressed by each record's embedding_ref.
class EmbeddingProvider {
 public:
  static EmbeddingProvider lookup(ParamId table, std::size_t dim);
  static EmbeddingProvider precomputed(std::shared_ptr<const EmbeddingMatrix> rows,
                                       std::string name);

  bool is_lookup() const { return !rows_; }
  std::size_t dim() const { return dim_; }

  /// [n x d] rows for the record's document tokens.
  Tensor embed(Session& s, const CorpusRecord& record, const Vocabulary& vocab) const;

 private:
  std::size_t dim_ = 0;
  std::optional<ParamId> table_;
  std::shared_ptr<const EmbeddingMatrix> rows_;
  std::string name_;
};

/// Reads an SSSEMB1 file into a frozen provider.
EmbeddingProvider load_embeddings(const std::string& path);

/// Checks every record's embedding_ref range against the provider's rows.
void check_embedding_refs(const EmbeddingProvider& provider, std::span<const CorpusRecord> records);

struct EncoderParams {
  EncoderConfig cfg;
  std::size_t input_dim = 0;
  /// Linear map in front of the M-GCN when its width differs from its input.
  std::optional<ParamId> projection;
  std::optional<MgcnParams> mgcn;
  std::optional<BiLstmParams> bilstm;

  std::size_t output_dim() const { return cfg.output_dim(input_dim); }
};

/// Declares the layers the mode needs under the "enc." prefix:
/// enc.proj, enc.gcn.*, enc.bilstm.*.
EncoderParams declare_encoder(ParamStore& store, const EncoderConfig& cfg, std::size_t input_dim,
                              const LabelVocab& labels, Rng& rng);

struct EncodedDocument {
  Tensor h_final;  ///< [n x output_dim]
  Tensor mask;     ///< [1 x n], 1 for real tokens
};

/// Composes semantics, sequence and structure per the configured mode:
///   sem           x
///   sem_seq       BiLSTM(x)
///   seq_gcn       M-GCN(BiLSTM(x))
///   str_lstm      BiLSTM(M-GCN(x))
///   par_gcn_lstm  M-GCN(x) + BiLSTM(x)
EncodedDocument encode(Session& s, const EncoderParams& p, const Tensor& x,
                       const LabeledMultiGraph* graphs, const LabelVocab& labels);

}  // namespace sss

#endif  // SSS_ENCODER_HPP
