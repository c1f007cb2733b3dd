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

#include <cmath>
#include <numeric>

#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "sss/decoder.hpp"
#include "test_util.hpp"

using namespace sss;

namespace {

double vec_diff(const std::vector<double>& a, const Tensor& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

double sum(const Tensor& t) {
  const auto v = t.values();
  return std::accumulate(v.begin(), v.end(), 0.0);
}

}  // namespace

TEST_CASE("context attention with one position or identical rows") {
  Rng rng(1);
  auto d = test::random_decoder_instance(rng);
  const std::size_t H = d.params.cfg.hidden;
  Session s(d.store);
  const Tensor s_t = Tensor::matrix(1, H, test::uniform(H, rng));

  d.h_d = test::random_matrix(1, H, rng);
  auto one = context_attention(s, d.params, d.memory(s), s_t);
  CHECK(one.weights.shape() == Shape{1, 1});
  CHECK(one.weights[0] == 1.0);
  CHECK(vec_diff(d.h_d[0], one.summary) == 0.0);

  const auto row = test::uniform(H, rng);
  d.h_d = {row, row, row, row};
  auto same = context_attention(s, d.params, d.memory(s), s_t);
  for (std::size_t i = 0; i < 4; ++i) CHECK(same.weights[i] == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(vec_diff(row, same.summary) <= 1e-15);
}

TEST_CASE("resource attention with one position and with decoupled queries") {
  Rng rng(2);
  auto d = test::random_decoder_instance(rng);
  const std::size_t H = d.params.cfg.hidden;
  const Tensor s_t = Tensor::matrix(1, H, test::uniform(H, rng));
  const Tensor d_t = Tensor::matrix(1, H, test::uniform(H, rng));
  {
    auto single = d;
    single.h_r = test::random_matrix(1, d.params.doc_dim, rng);
    single.mask = {1.0};
    single.slots = {0};
    Session s(single.store);
    const auto att = resource_attention(s, single.params, single.memory(s), s_t, d_t);
    CHECK(att.weights[0] == 1.0);
    CHECK(vec_diff(single.h_r[0], att.summary) == 0.0);
  }
  for (ParamId id : {d.params.res_u, d.params.res_v})
    std::fill(d.store[id].values.begin(), d.store[id].values.end(), 0.0);
  Session s(d.store);
  const auto mem = d.memory(s);
  const auto base = resource_attention(s, d.params, mem, s_t, d_t);
  for (int k = 0; k < 5; ++k) {
    const Tensor s2 = Tensor::matrix(1, H, test::uniform(H, rng, -3, 3));
    const Tensor d2 = Tensor::matrix(1, H, test::uniform(H, rng, -3, 3));
    CHECK(test::max_abs_diff(resource_attention(s, d.params, mem, s2, d2).weights, base.weights) ==
          0.0);
  }
}

TEST_CASE("decode step matches the scalar re-computation") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto d = test::random_decoder_instance(rng, trial % 2 == 1, trial % 5 != 0);
    const auto got = d.step();
    const auto want = d.oracle();
    CHECK(vec_diff(want.h, got.state.lstm.h) <= 1e-12);
    CHECK(vec_diff(want.c, got.state.lstm.c) <= 1e-12);
    CHECK(vec_diff(want.a, got.attention) <= 1e-12);
    CHECK(vec_diff(want.context, got.state.c_prev) <= 1e-12);
    CHECK(vec_diff(want.p_vocab, got.p_vocab) <= 1e-12);
    CHECK(got.p_gen[0] == doctest::Approx(want.p_gen).epsilon(1e-12));
    CHECK(vec_diff(want.distribution, got.distribution) <= 1e-12);
    CHECK(std::abs(sum(got.distribution) - 1.0) <= 1e-9);
    for (double p : got.distribution.values()) CHECK(p >= 0.0);
    for (std::size_t i = 0; i < d.mask.size(); ++i)
      if (d.mask[i] == 0.0) CHECK(got.attention[i] == 0.0);
    if (d.params.cfg.copy) {
      CHECK(got.p_gen[0] > 0.0);
      CHECK(got.p_gen[0] < 1.0);
    } else {
      CHECK(got.p_gen[0] == 1.0);
    }
  }
}

TEST_CASE("context and resource attention match the scalar formulas") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = test::random_decoder_instance(rng, true);
    const auto want = d.oracle();
    Session s(d.store);
    const auto mem = d.memory(s);
    const Tensor s_t = test::DecoderInstance::row(want.h);
    const auto ctx = context_attention(s, d.params, mem, s_t);
    CHECK(vec_diff(want.m, ctx.weights) <= 1e-12);
    CHECK(vec_diff(want.d, ctx.summary) <= 1e-12);
    const auto res = resource_attention(s, d.params, mem, s_t, test::DecoderInstance::row(want.d));
    CHECK(vec_diff(want.a, res.weights) <= 1e-12);
    CHECK(vec_diff(want.context, res.summary) <= 1e-12);
  }
}

TEST_CASE("generate-only limit") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    auto d = test::random_decoder_instance(rng);
    const std::size_t V = d.params.vocab_size;
    const auto forced = d.step({1.0});
    d.store[d.params.gen_b].values[0] = 800.0;
    const auto rigged = d.step();
    CHECK(rigged.p_gen[0] == 1.0);
    for (const auto* r : {&forced, &rigged}) {
      for (std::size_t w = V; w < d.extended; ++w) CHECK(r->distribution[w] == 0.0);
      for (std::size_t w = 0; w < V; ++w) CHECK(r->distribution[w] == r->p_vocab[w]);
    }
  }
}

TEST_CASE("copy-only limit") {
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    auto d = test::random_decoder_instance(rng, trial % 2 == 0);
    const auto forced = d.step({0.0});
    d.store[d.params.gen_b].values[0] = -800.0;
    const auto rigged = d.step();
    CHECK(rigged.p_gen[0] == 0.0);
    for (const auto* r : {&forced, &rigged}) {
      for (std::size_t w = 0; w < d.extended; ++w) {
        double mass = 0.0;
        bool in_doc = false;
        for (std::size_t i = 0; i < d.slots.size(); ++i)
          if (d.slots[i] == w) {
            mass += r->attention[i];
            in_doc = true;
          }
        if (!in_doc) CHECK(r->distribution[w] == 0.0);
        else CHECK(r->distribution[w] == doctest::Approx(mass).epsilon(1e-15));
      }
    }
  }
}

TEST_CASE("disabling copy pins the switch to generation") {
  Rng rng(7);
  const auto d = test::random_decoder_instance(rng, false, false);
  const auto r = d.step();
  CHECK(r.p_gen[0] == 1.0);
  for (std::size_t w = d.params.vocab_size; w < d.extended; ++w) CHECK(r.distribution[w] == 0.0);
}

TEST_CASE("decoder input errors") {
  Rng rng(8);
  auto d = test::random_decoder_instance(rng);
  Session s(d.store);
  auto bad = d;
  bad.mask.assign(d.mask.size(), 0.0);
  CHECK_THROWS_WITH_AS(bad.memory(s), doctest::Contains("fully masked"), std::invalid_argument);
  bad = d;
  bad.slots.pop_back();
  CHECK_THROWS_AS(bad.memory(s), std::invalid_argument);
  bad = d;
  bad.slots[0] = d.extended;
  CHECK_THROWS_AS(bad.memory(s), std::invalid_argument);
  const auto mem = d.memory(s);
  CHECK_THROWS_AS(decode_step(s, d.params, mem, d.state(), Tensor::zeros({1, d.x.size() + 1})),
                  std::invalid_argument);
  CHECK_THROWS_AS(context_attention(s, d.params, mem, Tensor::zeros({1, 9})), std::invalid_argument);
  CHECK_THROWS_AS(d.step({1.5}), std::invalid_argument);
}

TEST_CASE("greedy decoding") {
  Rng rng(9);
  auto d = test::random_decoder_instance(rng);
  const std::size_t V = d.params.vocab_size;
  const std::size_t E = d.params.embed_dim;
  const Tensor table = Tensor::matrix(V, E, test::uniform(V * E, rng));
  auto embed = [&](std::size_t id) { return gather_rows(table, {id < V ? id : 0}); };
  const std::size_t eos = 2;

  SUBCASE("a distribution peaked at the end token yields nothing") {
    d.store[d.params.out_b].values[eos] = 100.0;
    Session s(d.store);
    CHECK(greedy_decode(s, d.params, d.memory(s), d.state(), embed, 1, eos, 10, {1.0}).empty());
  }
  SUBCASE("ties resolve to the lowest extended index") {
    for (ParamId id : {d.params.out_v, d.params.out_w, d.params.out_b})
      std::fill(d.store[id].values.begin(), d.store[id].values.end(), 0.0);
    Session s(d.store);
    const auto out = greedy_decode(s, d.params, d.memory(s), d.state(), embed, 1, eos, 7, {1.0});
    CHECK(out == std::vector<std::size_t>(7, 0));
  }
  SUBCASE("copy-only decoding emits document words and stops at max_len") {
    Session s(d.store);
    const auto out = greedy_decode(s, d.params, d.memory(s), d.state(), embed, 1, eos, 5, {0.0});
    CHECK(out.size() <= 5);
    for (std::size_t id : out)
      CHECK(std::find(d.slots.begin(), d.slots.end(), id) != d.slots.end());
  }
  SUBCASE("deterministic") {
    Session s1(d.store), s2(d.store);
    CHECK(greedy_decode(s1, d.params, d.memory(s1), d.state(), embed, 1, eos, 6) ==
          greedy_decode(s2, d.params, d.memory(s2), d.state(), embed, 1, eos, 6));
  }
  Session s(d.store);
  CHECK_THROWS_AS(greedy_decode(s, d.params, d.memory(s), d.state(), embed, 1, eos, 0),
                  std::invalid_argument);
  CHECK(argmax(std::vector<double>{0.2, 0.4, 0.4, 0.1}) == 1);
}

TEST_CASE("negative log-likelihood") {
  const std::vector<Tensor> certain = {Tensor::matrix(1, 3, {0, 1, 0}),
                                       Tensor::matrix(1, 3, {1, 0, 0})};
  CHECK(nll_loss(certain, std::vector<std::size_t>{1, 0}).item() == 0.0);

  const double q = std::exp(-1.0);
  const std::vector<Tensor> inverse_e = {Tensor::matrix(1, 2, {q, 1 - q}),
                                     Tensor::matrix(1, 2, {1 - q, q})};
  CHECK(nll_loss(inverse_e, std::vector<std::size_t>{0, 1}).item() == doctest::Approx(1.0).epsilon(1e-15));

  Rng rng(10);
  std::vector<Tensor> dists;
  std::vector<std::size_t> targets;
  double expected = 0.0;
  for (int t = 0; t < 6; ++t) {
    auto p = test::uniform(5, rng, 0.01, 1.0);
    const double z = std::accumulate(p.begin(), p.end(), 0.0);
    for (double& v : p) v /= z;
    targets.push_back(static_cast<std::size_t>(t) % 5);
    expected -= std::log(p[targets.back()]);
    dists.push_back(Tensor::matrix(1, 5, p));
  }
  CHECK(nll_loss(dists, targets).item() == doctest::Approx(expected / 6).epsilon(1e-14));

  const std::vector<Tensor> zero = {Tensor::matrix(1, 2, {1, 0})};
  CHECK(nll_loss(zero, std::vector<std::size_t>{1}).item() ==
        doctest::Approx(-std::log(1e-12)).epsilon(1e-14));
  CHECK_THROWS_AS(nll_loss(zero, std::vector<std::size_t>{}), std::invalid_argument);
  CHECK_THROWS_AS(nll_loss(zero, std::vector<std::size_t>{2}), std::invalid_argument);
}
