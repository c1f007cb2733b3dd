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

#include "sss/lstm.hpp"

#include <stdexcept>
#include <vector>

namespace sss {

namespace {

constexpr std::array<const char*, 4> kGateNames = {"i", "f", "o", "g"};

void require_input(const LstmParams& p, const Tensor& x, const char* who) {
  if (x.rank() != 2 || x.cols() != p.input_dim)
    throw std::invalid_argument(std::string(who) + ": expected [n x " +
                                std::to_string(p.input_dim) + "] input, got " +
                                shape_string(x.shape()));
}

LstmState combine(Session& s, const LstmParams& p, const std::array<Tensor, 4>& from_input,
                  const LstmState& prev) {
  std::array<Tensor, 4> pre;
  for (std::size_t g = 0; g < 4; ++g) pre[g] = add(from_input[g], matmul(prev.h, s(p.wh[g])));
  const Tensor i = sigmoid(pre[LstmParams::input]);
  const Tensor f = sigmoid(pre[LstmParams::forget]);
  const Tensor o = sigmoid(pre[LstmParams::output]);
  const Tensor cand = tanh(pre[LstmParams::candidate]);
  const Tensor c = add(elemwise_mul(f, prev.c), elemwise_mul(i, cand));
  return {elemwise_mul(o, tanh(c)), c};
}

}  // namespace

LstmParams declare_lstm(ParamStore& store, const std::string& prefix, std::size_t input_dim,
                        std::size_t hidden, Rng& rng) {
  LstmParams p;
  p.input_dim = input_dim;
  p.hidden = hidden;
  for (std::size_t g = 0; g < 4; ++g) {
    const std::string gp = prefix + "." + kGateNames[g];
    p.wx[g] = store.add_glorot(gp + ".Wx", input_dim, hidden, rng);
    p.wh[g] = store.add_glorot(gp + ".Wh", hidden, hidden, rng);
    p.b[g] = store.add_zeros(gp + ".b", {1, hidden});
  }
  return p;
}

BiLstmParams declare_bilstm(ParamStore& store, const std::string& prefix, std::size_t input_dim,
                            std::size_t hidden, Rng& rng) {
  return {declare_lstm(store, prefix + ".fwd", input_dim, hidden, rng),
          declare_lstm(store, prefix + ".bwd", input_dim, hidden, rng)};
}

LstmState LstmState::zeros(std::size_t hidden) {
  return {Tensor::zeros({1, hidden}), Tensor::zeros({1, hidden})};
}

LstmState lstm_step(Session& s, const LstmParams& p, const Tensor& x, const LstmState& prev) {
  require_input(p, x, "lstm_step");
  if (x.rows() != 1) throw std::invalid_argument("lstm_step: expected a single row");
  std::array<Tensor, 4> from_input;
  for (std::size_t g = 0; g < 4; ++g) from_input[g] = add(matmul(x, s(p.wx[g])), s(p.b[g]));
  return combine(s, p, from_input, prev);
}

SequenceOutput lstm_sequence(Session& s, const LstmParams& p, const Tensor& x, bool reverse) {
  require_input(p, x, "lstm_sequence");
  const std::size_t n = x.rows();
  // Input projections for every position at once.
  std::array<Tensor, 4> projected;
  for (std::size_t g = 0; g < 4; ++g) projected[g] = add(matmul(x, s(p.wx[g])), s(p.b[g]));

  std::vector<Tensor> states(n);
  LstmState state = LstmState::zeros(p.hidden);
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t pos = reverse ? n - 1 - step : step;
    std::array<Tensor, 4> from_input;
    for (std::size_t g = 0; g < 4; ++g)
      from_input[g] = n == 1 ? projected[g] : gather_rows(projected[g], {pos});
    state = combine(s, p, from_input, state);
    states[pos] = state.h;
  }
  return {concat_rows(states), state};
}

Tensor bilstm_forward(Session& s, const BiLstmParams& p, const Tensor& x) {
  if (x.rank() != 2 || x.rows() == 0) throw std::invalid_argument("bilstm_forward: empty input");
  const Tensor fwd = lstm_sequence(s, p.forward, x, false).states;
  const Tensor bwd = lstm_sequence(s, p.backward, x, true).states;
  return concat_last_dim(fwd, bwd);
}

SequenceOutput context_encode(Session& s, const LstmParams& p, const Tensor& embedded) {
  if (embedded.size() == 0) throw std::invalid_argument("context_encode: empty context");
  return lstm_sequence(s, p, embedded, false);
}

SequenceOutput context_encode(Session& s, const LstmParams& p, std::span<const std::size_t> tokens,
                              ParamId table) {
  if (tokens.empty())
    throw std::invalid_argument("context_encode: empty context (supply a start-of-chat token)");
  return context_encode(s, p, gather_rows(s(table), {tokens.begin(), tokens.end()}));
}

}  // namespace sss
