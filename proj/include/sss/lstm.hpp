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

#ifndef SSS_LSTM_HPP
#define SSS_LSTM_HPP

#include <array>
#include <span>
#include <string>

#include "sss/params.hpp"

namespace sss {

/// One LSTM direction. Gate order is input, forget, output, candidate; each
/// gate has an input matrix [d x h], a recurrent matrix [h x h] and a bias
/// row [1 x h].
struct LstmParams {
  enum Gate : std::size_t { input = 0, forget = 1, output = 2, candidate = 3 };

  std::size_t input_dim = 0;
  std::size_t hidden = 0;
  std::array<ParamId, 4> wx{};
  std::array<ParamId, 4> wh{};
  std::array<ParamId, 4> b{};
};

struct BiLstmParams {
  LstmParams forward;
  LstmParams backward;

  std::size_t output_dim() const { return forward.hidden + backward.hidden; }
};

LstmParams declare_lstm(ParamStore& store, const std::string& prefix, std::size_t input_dim,
                        std::size_t hidden, Rng& rng);
BiLstmParams declare_bilstm(ParamStore& store, const std::string& prefix, std::size_t input_dim,
                            std::size_t hidden, Rng& rng);

struct LstmState {
  Tensor h;  ///< [1 x hidden]
  Tensor c;  ///< [1 x hidden]

  static LstmState zeros(std::size_t hidden);
};

/// One recurrence step on a [1 x d] input.
LstmState lstm_step(Session& s, const LstmParams& p, const Tensor& x, const LstmState& prev);

struct SequenceOutput {
  Tensor states;     ///< [n x hidden], row i is the state after position i
  LstmState final;   ///< state after the last processed position
};

/// Runs one direction over the rows of `x` from a zero state. With
/// `reverse`, positions are processed right to left but row i of the output
/// still belongs to position i.
SequenceOutput lstm_sequence(Session& s, const LstmParams& p, const Tensor& x, bool reverse);

/// [n x 2h]: forward states concatenated with backward states per position.
Tensor bilstm_forward(Session& s, const BiLstmParams& p, const Tensor& x);

/// Unidirectional encoding of the conversation context. `embedded` holds one
/// row per context token; throws if it is empty.
SequenceOutput context_encode(Session& s, const LstmParams& p, const Tensor& embedded);
/// Looks the tokens up in `table` first.
SequenceOutput context_encode(Session& s, const LstmParams& p, std::span<const std::size_t> tokens,
                              ParamId table);

}  // namespace sss

#endif  // SSS_LSTM_HPP
