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

#ifndef SSS_DECODER_HPP
#define SSS_DECODER_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sss/config.hpp"
#include "sss/lstm.hpp"
#include "sss/params.hpp"

namespace sss {

/// Attention decoder with a copy-or-generate output layer.
///
///   context attention   f = v_d . tanh(W_c h_d + V_d s_t + b_d), m = softmax(f)
///   resource attention  e = v_r . tanh(W_r h_r + U_r s_t + V_r d_t + b_r), a = softmax(e)
///   vocabulary          P_vocab = softmax(V_o s_t + W_o c_t + b_o)
///   switch              p_gen = sigmoid(w_r c_t + w_s s_t + w_x x_t + b_g)
///   output              P(w) = p_gen P_vocab(w) + (1 - p_gen) sum_{i: w_i = w} a_i
struct DecoderParams {
  DecoderConfig cfg;
  std::size_t vocab_size = 0;
  std::size_t embed_dim = 0;
  std::size_t doc_dim = 0;

  /// Input is [x_t ; c_{t-1}].
  LstmParams lstm;

  ParamId ctx_w = 0, ctx_v = 0, ctx_b = 0, ctx_score = 0;
  ParamId res_w = 0, res_u = 0, res_v = 0, res_b = 0, res_score = 0;
  ParamId out_v = 0, out_w = 0, out_b = 0;
  ParamId gen_r = 0, gen_s = 0, gen_x = 0, gen_b = 0;
};

/// Declares the decoder under "dec.". Context states must have width
/// cfg.hidden.
DecoderParams declare_decoder(ParamStore& store, const DecoderConfig& cfg, std::size_t vocab_size,
                              std::size_t embed_dim, std::size_t doc_dim, Rng& rng);

/// Per-example inputs that stay fixed across decoding steps.
struct DecoderMemory {
  Tensor h_d;        ///< [M x hidden] context states
  Tensor h_r;        ///< [N x doc_dim] document states
  Tensor doc_mask;   ///< [1 x N]
  Tensor h_d_proj;   ///< h_d W_c
  Tensor h_r_proj;   ///< h_r W_r
  /// Extended-vocabulary slot of every document position.
  std::vector<std::size_t> copy_slots;
  std::size_t extended_size = 0;
};

DecoderMemory make_memory(Session& s, const DecoderParams& p, const Tensor& h_d, const Tensor& h_r,
                          const Tensor& doc_mask, std::vector<std::size_t> copy_slots,
                          std::size_t extended_size);

struct Attention {
  Tensor weights;  ///< [1 x positions]
  Tensor summary;  ///< weighted sum of the attended rows
};

Attention context_attention(Session& s, const DecoderParams& p, const DecoderMemory& mem,
                            const Tensor& s_t);
Attention resource_attention(Session& s, const DecoderParams& p, const DecoderMemory& mem,
                             const Tensor& s_t, const Tensor& d_t);

struct DecoderState {
  LstmState lstm;
  Tensor c_prev;  ///< [1 x doc_dim]
};

/// Starts from the context encoder's final state with a zero resource summary.
DecoderState initial_state(const DecoderParams& p, const LstmState& context_final);

struct StepOptions {
  /// Replaces the learned switch with a constant in [0, 1].
  std::optional<double> force_p_gen;
};

struct StepResult {
  DecoderState state;
  Tensor distribution;  ///< [1 x extended_size]
  Tensor attention;     ///< a^t [1 x N]
  Tensor p_gen;         ///< [1 x 1]
  Tensor p_vocab;       ///< [1 x vocab_size]
};

StepResult decode_step(Session& s, const DecoderParams& p, const DecoderMemory& mem,
                       const DecoderState& prev, const Tensor& x_t, const StepOptions& options = {});

/// Argmax with ties to the lowest index.
std::size_t argmax(std::span<const double> values);

/// Embedding of the previous output, given its extended-vocabulary id.
using EmbedFn = std::function<Tensor(std::size_t)>;

/// Argmax decoding (ties go to the lowest extended id) until `eos` or
/// `max_len` tokens. Returned ids exclude the end token.
std::vector<std::size_t> greedy_decode(Session& s, const DecoderParams& p, const DecoderMemory& mem,
                                       DecoderState state, const EmbedFn& embed, std::size_t sos,
                                       std::size_t eos, std::size_t max_len,
                                       const StepOptions& options = {});

inline constexpr double kProbabilityFloor = 1e-12;

/// Mean over steps of -log(max(P_t(target_t), 1e-12)).
Tensor nll_loss(std::span<const Tensor> distributions, std::span<const std::size_t> targets);

}  // namespace sss

#endif  // SSS_DECODER_HPP
