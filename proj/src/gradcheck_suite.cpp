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

#include "sss/gradcheck_suite.hpp"

#include <chrono>
#include <random>
#include <stdexcept>

#include "sss/gcn.hpp"
#include "sss/lstm.hpp"
#include "sss/model.hpp"

namespace sss {

namespace {

std::vector<double> uniform(std::size_t n, Rng& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

void randomize(ParamStore& store, Rng& rng) {
  for (ParamId id = 0; id < store.size(); ++id) store[id].values = uniform(store[id].values.size(), rng, -0.5, 0.5);
}

/// Weighted sum of every entry, so each output receives a distinct gradient.
Tensor weighted_total(const Tensor& t, std::uint64_t seed) {
  Rng rng(seed);
  const Tensor w(t.shape(), uniform(t.size(), rng));
  return sum_rows(transpose(sum_rows(elemwise_mul(t, w))));
}

LabeledMultiGraph random_graph(std::size_t n, std::span<const RelationKind> kinds,
                               const LabelVocab& labels, Rng& rng) {
  LabeledMultiGraph g(n);
  std::bernoulli_distribution keep(0.35);
  for (RelationKind k : kinds) {
    const auto& names = labels.labels(k);
    std::uniform_int_distribution<std::size_t> label(0, names.size() - 1);
    for (std::size_t s = 0; s < n; ++s)
      for (std::size_t t = 0; t < n; ++t)
        if (s != t && keep(rng)) g.add_edge(k, s, t, names[label(rng)]);
  }
  return g;
}

LabelVocab two_labels() {
  LabelVocab v;
  for (RelationKind k : kAllRelations) v.set_labels(k, {"a", "b"});
  return v;
}

GradCheckReport check_gcn(std::uint64_t seed, std::size_t hops, std::vector<RelationKind> kinds) {
  Rng rng(seed);
  ParamStore store;
  const LabelVocab labels = two_labels();
  const MgcnParams p = declare_mgcn(store, "gcn", 3, hops, kinds, labels, rng);
  randomize(store, rng);
  const auto views = resolve_views(random_graph(5, kinds, labels, rng), kinds, labels);
  const ParamId x = store.add("x", {5, 3}, uniform(15, rng));
  auto loss = [&](Session& s) {
    const Tensor h = hops == 1 ? gcn_layer(s, s(x), views[0], p.hops[0]) : mgcn_forward(s, s(x), views, p);
    return weighted_total(h, seed + 1);
  };
  return grad_check(loss, store, kGradCheckStep, kGradCheckTolerance);
}

GradCheckReport check_bilstm(std::uint64_t seed) {
  Rng rng(seed);
  ParamStore store;
  const BiLstmParams p = declare_bilstm(store, "enc", 3, 3, rng);
  randomize(store, rng);
  const ParamId x = store.add("x", {5, 3}, uniform(15, rng));
  auto loss = [&](Session& s) { return weighted_total(bilstm_forward(s, p, s(x)), seed + 1); };
  return grad_check(loss, store, kGradCheckStep, kGradCheckTolerance);
}

GradCheckReport check_model(std::uint64_t seed) {
  CorpusRecord r;
  r.doc_tokens = {"the", "film", "stars", "zorblax", "the", "hero"};
  r.context_tokens = {"who", "stars"};
  r.response_tokens = {"zorblax", "stars", "the", "unseen"};
  r.graphs = LabeledMultiGraph(6);
  r.graphs.add_edge(RelationKind::dep, 2, 1, "nsubj");
  r.graphs.add_edge(RelationKind::dep, 2, 3, "dobj");
  r.graphs.add_edge(RelationKind::dep, 5, 4, "det");
  r.graphs.add_edge(RelationKind::coref, 3, 5, "coref");
  r.graphs.add_edge(RelationKind::ent, 3, 1, "ent");
  ModelConfig cfg;
  cfg.encoder.mode = EncoderMode::par_gcn_lstm;
  cfg.encoder.embedding_dim = 3;
  cfg.encoder.lstm_hidden = 2;
  cfg.decoder.hidden = 3;
  cfg.decoder.attention = 3;
  cfg.decoder.max_len = 8;
  const std::vector<CorpusRecord> records = {r};
  Model m = build_model(cfg, Vocabulary({"the", "film", "stars", "hero", "who"}),
                        LabelVocab::build(records, 8), seed);
  Rng rng(seed + 1);
  randomize(m.store, rng);
  const Example ex = prepare_example(m, r);
  auto loss = [&](Session& s) { return teacher_forced(s, m, ex).loss; };
  return grad_check(loss, m.store, kGradCheckStep, kGradCheckTolerance);
}

}  // namespace

std::vector<std::string> gradcheck_modules() { return {"gcn", "mgcn", "bilstm", "model"}; }

ModuleGradCheck run_module_gradcheck(std::string_view module, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  ModuleGradCheck out;
  out.module = std::string(module);
  if (module == "gcn") out.report = check_gcn(seed, 1, {RelationKind::dep});
  else if (module == "mgcn") out.report = check_gcn(seed, 2, {RelationKind::dep, RelationKind::coref});
  else if (module == "bilstm") out.report = check_bilstm(seed);
  else if (module == "model") out.report = check_model(seed);
  else throw std::invalid_argument("unknown gradcheck module '" + std::string(module) + "'");
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

}  // namespace sss
