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

#ifndef SSS_TESTS_FIXTURES_HPP
#define SSS_TESTS_FIXTURES_HPP

// Randomly sized decoder instances shared by the unit and acceptance tests.

#include <map>
#include <random>

#include "oracles.hpp"
#include "sss/decoder.hpp"
#include "test_util.hpp"

namespace sss::test {

struct DecoderInstance {
  ParamStore store;
  DecoderParams params;
  oracle::Matrix h_d, h_r;
  std::vector<double> mask;
  std::vector<std::size_t> slots;
  std::size_t extended = 0;
  std::vector<double> h_prev, c_state, c_prev, x;

  static Tensor tensor(const oracle::Matrix& m) {
    std::vector<double> flat;
    for (const auto& r : m) flat.insert(flat.end(), r.begin(), r.end());
    return Tensor::matrix(m.size(), m[0].size(), flat);
  }
  static Tensor row(const std::vector<double>& v) { return Tensor::matrix(1, v.size(), v); }

  DecoderMemory memory(Session& s) const {
    return make_memory(s, params, tensor(h_d), tensor(h_r), row(mask), slots, extended);
  }
  DecoderState state() const { return {{row(h_prev), row(c_state)}, row(c_prev)}; }
  Tensor input() const { return row(x); }

  StepResult step(const StepOptions& options = {}) const {
    Session s(store);
    return decode_step(s, params, memory(s), state(), input(), options);
  }
  oracle::DecoderStepOracle oracle(std::optional<double> force = std::nullopt) const {
    return oracle::decoder_step(store, params, h_d, h_r, mask, slots, extended, h_prev, c_state,
                                c_prev, x, force);
  }
};

inline oracle::Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  oracle::Matrix m(rows);
  for (auto& r : m) r = uniform(cols, rng);
  return m;
}

/// Sizes are drawn per instance; the document mixes in-vocabulary words,
/// repeated words and up to three out-of-vocabulary types.
inline DecoderInstance random_decoder_instance(Rng& rng, bool masked = false, bool copy = true) {
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
  };
  DecoderInstance d;
  DecoderConfig cfg;
  cfg.hidden = pick(2, 4);
  cfg.attention = pick(2, 4);
  cfg.copy = copy;
  const std::size_t V = pick(4, 8), E = pick(2, 4), R = pick(2, 4);
  const std::size_t M = pick(1, 4), N = pick(1, 6);
  d.params = declare_decoder(d.store, cfg, V, E, R, rng);
  randomize(d.store, rng, -1.0, 1.0);
  d.h_d = random_matrix(M, cfg.hidden, rng);
  d.h_r = random_matrix(N, R, rng);
  std::map<std::size_t, std::size_t> oov;
  for (std::size_t i = 0; i < N; ++i) {
    const std::size_t raw = pick(0, V + 2);
    if (raw < V) {
      d.slots.push_back(raw);
    } else {
      auto [it, fresh] = oov.emplace(raw, V + oov.size());
      d.slots.push_back(it->second);
    }
  }
  d.extended = V + oov.size();
  d.mask.assign(N, 1.0);
  if (masked && N > 1) {
    for (auto& m : d.mask) m = pick(0, 2) == 0 ? 0.0 : 1.0;
    d.mask[pick(0, N - 1)] = 1.0;
  }
  d.h_prev = uniform(cfg.hidden, rng);
  d.c_state = uniform(cfg.hidden, rng);
  d.c_prev = uniform(R, rng);
  d.x = uniform(E, rng);
  return d;
}

}  // namespace sss::test

#endif  // SSS_TESTS_FIXTURES_HPP
