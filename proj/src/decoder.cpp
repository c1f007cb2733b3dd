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

#include "sss/decoder.hpp"

#include <cmath>
#include <stdexcept>

namespace sss {

namespace {

void require_cols(const Tensor& t, std::size_t cols, const char* who, const char* what) {
  if (t.rank() != 2 || t.cols() != cols)
    throw std::invalid_argument(std::string(who) + ": " + what + " must have " +
                                std::to_string(cols) + " columns, got " + shape_string(t.shape()));
}

void require_finite(const Tensor& t, const char* who) {
  for (double v : t.values())
    if (!std::isfinite(v)) throw std::runtime_error(std::string(who) + ": non-finite value");
}

// Scores [n x 1] -> [1 x n].
Tensor score_row(const Tensor& hidden, const Tensor& v) { return transpose(matmul(hidden, v)); }

}  // namespace

DecoderParams declare_decoder(ParamStore& store, const DecoderConfig& cfg, std::size_t vocab_size,
                              std::size_t embed_dim, std::size_t doc_dim, Rng& rng) {
  cfg.validate();
  DecoderParams p;
  p.cfg = cfg;
  p.vocab_size = vocab_size;
  p.embed_dim = embed_dim;
  p.doc_dim = doc_dim;
  const std::size_t H = cfg.hidden, A = cfg.attention;
  p.lstm = declare_lstm(store, "dec.lstm", embed_dim + doc_dim, H, rng);

  p.ctx_w = store.add_glorot("dec.ctx.W_c", H, A, rng);
  p.ctx_v = store.add_glorot("dec.ctx.V", H, A, rng);
  p.ctx_b = store.add_zeros("dec.ctx.b_d", {1, A});
  p.ctx_score = store.add_glorot("dec.ctx.v", A, 1, rng);

  p.res_w = store.add_glorot("dec.res.W_r", doc_dim, A, rng);
  p.res_u = store.add_glorot("dec.res.U", H, A, rng);
  p.res_v = store.add_glorot("dec.res.V", H, A, rng);
  p.res_b = store.add_zeros("dec.res.b_r", {1, A});
  p.res_score = store.add_glorot("dec.res.v", A, 1, rng);

  p.out_v = store.add_glorot("dec.out.V", H, vocab_size, rng);
  p.out_w = store.add_glorot("dec.out.W", doc_dim, vocab_size, rng);
  p.out_b = store.add_zeros("dec.out.b", {1, vocab_size});

  p.gen_r = store.add_glorot("dec.gen.w_r", doc_dim, 1, rng);
  p.gen_s = store.add_glorot("dec.gen.w_s", H, 1, rng);
  p.gen_x = store.add_glorot("dec.gen.w_x", embed_dim, 1, rng);
  p.gen_b = store.add_zeros("dec.gen.b_g", {1, 1});
  return p;
}

DecoderMemory make_memory(Session& s, const DecoderParams& p, const Tensor& h_d, const Tensor& h_r,
                          const Tensor& doc_mask, std::vector<std::size_t> copy_slots,
                          std::size_t extended_size) {
  require_cols(h_d, p.cfg.hidden, "make_memory", "context states");
  require_cols(h_r, p.doc_dim, "make_memory", "document states");
  const std::size_t n = h_r.rows();
  if (h_d.rows() == 0 || n == 0) throw std::invalid_argument("make_memory: empty input");
  if (doc_mask.shape() != Shape{1, n})
    throw std::invalid_argument("make_memory: mask must be [1 x " + std::to_string(n) + "]");
  bool any = false;
  for (double m : doc_mask.values()) any = any || m != 0.0;
  if (!any) throw std::invalid_argument("make_memory: fully masked document");
  if (copy_slots.size() != n)
    throw std::invalid_argument("make_memory: one copy slot per document position required");
  if (extended_size < p.vocab_size)
    throw std::invalid_argument("make_memory: extended vocabulary smaller than the fixed one");
  for (std::size_t slot : copy_slots)
    if (slot >= extended_size) throw std::invalid_argument("make_memory: copy slot out of range");

  DecoderMemory mem;
  mem.h_d = h_d;
  mem.h_r = h_r;
  mem.doc_mask = doc_mask;
  mem.h_d_proj = matmul(h_d, s(p.ctx_w));
  mem.h_r_proj = matmul(h_r, s(p.res_w));
  mem.copy_slots = std::move(copy_slots);
  mem.extended_size = extended_size;
  return mem;
}

Attention context_attention(Session& s, const DecoderParams& p, const DecoderMemory& mem,
                            const Tensor& s_t) {
  require_cols(s_t, p.cfg.hidden, "context_attention", "decoder state");
  const Tensor query = add(matmul(s_t, s(p.ctx_v)), s(p.ctx_b));
  const Tensor f = score_row(tanh(add(mem.h_d_proj, query)), s(p.ctx_score));
  const Tensor m = softmax(f);
  return {m, matmul(m, mem.h_d)};
}

Attention resource_attention(Session& s, const DecoderParams& p, const DecoderMemory& mem,
                             const Tensor& s_t, const Tensor& d_t) {
  require_cols(s_t, p.cfg.hidden, "resource_attention", "decoder state");
  require_cols(d_t, p.cfg.hidden, "resource_attention", "context summary");
  const Tensor query =
      add(add(matmul(s_t, s(p.res_u)), matmul(d_t, s(p.res_v))), s(p.res_b));
  const Tensor e = score_row(tanh(add(mem.h_r_proj, query)), s(p.res_score));
  const Tensor a = softmax_masked(e, mem.doc_mask);
  return {a, matmul(a, mem.h_r)};
}

DecoderState initial_state(const DecoderParams& p, const LstmState& context_final) {
  if (context_final.h.shape() != Shape{1, p.cfg.hidden})
    throw std::invalid_argument("initial_state: context state width differs from decoder hidden");
  return {context_final, Tensor::zeros({1, p.doc_dim})};
}

StepResult decode_step(Session& s, const DecoderParams& p, const DecoderMemory& mem,
                       const DecoderState& prev, const Tensor& x_t, const StepOptions& options) {
  require_cols(x_t, p.embed_dim, "decode_step", "input embedding");
  if (x_t.rows() != 1) throw std::invalid_argument("decode_step: input must be a single row");

  const LstmState state = lstm_step(s, p.lstm, concat_last_dim(x_t, prev.c_prev), prev.lstm);
  const Tensor& s_t = state.h;
  const Attention ctx = context_attention(s, p, mem, s_t);
  const Attention res = resource_attention(s, p, mem, s_t, ctx.summary);
  const Tensor& c_t = res.summary;

  const Tensor p_vocab = softmax(add(add(matmul(s_t, s(p.out_v)), matmul(c_t, s(p.out_w))), s(p.out_b)));
  const std::size_t oov_slots = mem.extended_size - p.vocab_size;
  const Tensor padded =
      oov_slots == 0 ? p_vocab : concat_last_dim(p_vocab, Tensor::zeros({1, oov_slots}));
  const Tensor copy =
      transpose(scatter_rows(transpose(res.weights), mem.copy_slots, mem.extended_size));

  std::optional<double> forced = options.force_p_gen;
  if (!p.cfg.copy) forced = 1.0;
  Tensor p_gen, dist;
  if (forced) {
    if (!(*forced >= 0.0 && *forced <= 1.0))
      throw std::invalid_argument("decode_step: forced p_gen must lie in [0, 1]");
    p_gen = Tensor::filled({1, 1}, *forced);
    dist = add(scalar_scale(padded, *forced), scalar_scale(copy, 1.0 - *forced));
  } else {
    p_gen = sigmoid(add(add(add(matmul(c_t, s(p.gen_r)), matmul(s_t, s(p.gen_s))),
                            matmul(x_t, s(p.gen_x))),
                        s(p.gen_b)));
    const Tensor rest = sub(Tensor::filled({1, 1}, 1.0), p_gen);
    dist = add(matmul(p_gen, padded), matmul(rest, copy));
  }
  require_finite(dist, "decode_step");
  return {{state, c_t}, dist, res.weights, p_gen, p_vocab};
}

std::size_t argmax(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax: empty input");
  std::size_t best = 0;
  for (std::size_t j = 1; j < values.size(); ++j)
    if (values[j] > values[best]) best = j;
  return best;
}

std::vector<std::size_t> greedy_decode(Session& s, const DecoderParams& p, const DecoderMemory& mem,
                                       DecoderState state, const EmbedFn& embed, std::size_t sos,
                                       std::size_t eos, std::size_t max_len,
                                       const StepOptions& options) {
  if (max_len == 0) throw std::invalid_argument("greedy_decode: max_len must be at least 1");
  std::vector<std::size_t> out;
  std::size_t prev = sos;
  while (out.size() < max_len) {
    StepResult step = decode_step(s, p, mem, state, embed(prev), options);
    const std::size_t best = argmax(step.distribution.values());
    if (best == eos) break;
    out.push_back(best);
    prev = best;
    state = std::move(step.state);
  }
  return out;
}

Tensor nll_loss(std::span<const Tensor> distributions, std::span<const std::size_t> targets) {
  if (distributions.size() != targets.size())
    throw std::invalid_argument("nll_loss: " + std::to_string(distributions.size()) +
                                " distributions for " + std::to_string(targets.size()) + " targets");
  if (targets.empty()) throw std::invalid_argument("nll_loss: no steps");
  std::vector<Tensor> picked;
  picked.reserve(targets.size());
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (targets[t] >= distributions[t].cols())
      throw std::invalid_argument("nll_loss: target outside the extended vocabulary");
    picked.push_back(gather_rows(transpose(distributions[t]), {targets[t]}));
  }
  const Tensor logs = log(concat_rows(picked), kProbabilityFloor);
  return scalar_scale(sum_rows(logs), -1.0 / static_cast<double>(targets.size()));
}

}  // namespace sss
