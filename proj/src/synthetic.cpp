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

#include "sss/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "sss/params.hpp"
#include "sss/vocab.hpp"

namespace sss {

namespace {

constexpr std::array<const char*, 6> kDepLabels = {"nsubj", "dobj", "amod", "det", "prep", "punct"};
constexpr const char* kPeriod = ".";
constexpr const char* kAbout = "about";

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::size_t content_count(const SyntheticSpec& s) { return s.vocab - s.cues - 2; }

std::string cue(std::size_t i) { return "c" + std::to_string(i); }
std::string content(std::size_t i) { return "w" + std::to_string(i); }

// Random tree over positions [begin, end): each node attaches to one of the
// nodes placed before it in a shuffled order.
void add_random_tree(LabeledMultiGraph& g, std::size_t begin, std::size_t end, Rng& rng) {
  std::vector<std::size_t> order;
  for (std::size_t i = begin; i < end; ++i) order.push_back(i);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t k = 1; k < order.size(); ++k)
    g.add_edge(RelationKind::dep, order[pick(rng, 0, k - 1)], order[k],
               kDepLabels[pick(rng, 0, kDepLabels.size() - 1)]);
}

}  // namespace

void SyntheticSpec::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("synthetic spec: " + what); };
  if (records < 10) fail("at least 10 records required");
  if (vocab < 20) fail("vocab must be at least 20");
  if (sentences == 0) fail("sentences must be positive");
  if (cues < sentences) fail("need at least as many cues as sentences");
  if (cues + 2 >= vocab || content_count(*this) < 5) fail("cues leave too few content words");
  if (body_min == 0 || body_min > body_max) fail("body lengths must satisfy 1 <= body_min <= body_max");
  if (!(oov_fraction >= 0.0 && oov_fraction < 1.0)) fail("oov_fraction must lie in [0, 1)");
  if (markers > content_count(*this)) fail("more markers than content words");
  if (oov_prefix.empty()) fail("oov_prefix must be nonempty");
}

SyntheticSpec parse_synthetic_spec(std::string_view json_text) {
  using nlohmann::json;
  SyntheticSpec spec;
  try {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw std::invalid_argument("synthetic spec: expected an object");
    static const std::set<std::string> known = {"records", "vocab",        "cues",    "sentences",
                                                "body_min", "body_max",    "oov_fraction",
                                                "markers",  "seed",        "oov_prefix"};
    for (const auto& [key, _] : j.items())
      if (!known.count(key)) throw std::invalid_argument("synthetic spec: unknown key '" + key + "'");
    auto read = [&](const char* key, auto& out) {
      if (j.contains(key)) out = j.at(key).get<std::decay_t<decltype(out)>>();
    };
    read("records", spec.records);
    read("vocab", spec.vocab);
    read("cues", spec.cues);
    read("sentences", spec.sentences);
    read("body_min", spec.body_min);
    read("body_max", spec.body_max);
    read("oov_fraction", spec.oov_fraction);
    read("markers", spec.markers);
    read("seed", spec.seed);
    read("oov_prefix", spec.oov_prefix);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("synthetic spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

std::vector<std::string> synthetic_words(const SyntheticSpec& spec) {
  spec.validate();
  std::vector<std::string> words;
  for (std::size_t i = 0; i < spec.cues; ++i) words.push_back(cue(i));
  words.emplace_back(kPeriod);
  words.emplace_back(kAbout);
  for (std::size_t i = 0; i < content_count(spec); ++i) words.push_back(content(i));
  return words;
}

std::vector<CorpusRecord> generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const std::size_t n_content = content_count(spec);
  std::vector<std::size_t> cue_ids(spec.cues);
  for (std::size_t i = 0; i < spec.cues; ++i) cue_ids[i] = i;

  std::vector<CorpusRecord> out;
  out.reserve(spec.records);
  std::size_t response_tokens = 0, oov_tokens = 0;
  for (std::size_t r = 0; r < spec.records; ++r) {
    std::shuffle(cue_ids.begin(), cue_ids.end(), rng);
    std::vector<std::vector<std::string>> bodies(spec.sentences);
    for (auto& body : bodies) {
      body.resize(pick(rng, spec.body_min, spec.body_max));
      for (auto& w : body) w = content(pick(rng, 0, n_content - 1));
    }
    const std::size_t target = pick(rng, 0, spec.sentences - 1);
    auto& chosen = bodies[target];

    // Running quota: the corpus-wide OOV share tracks the requested fraction.
    response_tokens += chosen.size();
    const auto quota = static_cast<std::size_t>(
        std::llround(spec.oov_fraction * static_cast<double>(response_tokens)));
    const std::size_t replace = std::min(quota > oov_tokens ? quota - oov_tokens : 0, chosen.size());
    std::vector<std::size_t> slots(chosen.size());
    for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = i;
    std::shuffle(slots.begin(), slots.end(), rng);
    for (std::size_t k = 0; k < replace; ++k)
      chosen[slots[k]] = spec.oov_prefix + "_" + std::to_string(r) + "_" + std::to_string(k);
    oov_tokens += replace;

    CorpusRecord rec;
    std::vector<std::pair<std::size_t, std::size_t>> sentence_ranges;
    for (std::size_t s = 0; s < spec.sentences; ++s) {
      const std::size_t begin = rec.doc_tokens.size();
      rec.doc_tokens.push_back(cue(cue_ids[s]));
      if (s == target) rec.doc_tokens.emplace_back(kAbout);
      rec.doc_tokens.insert(rec.doc_tokens.end(), bodies[s].begin(), bodies[s].end());
      rec.doc_tokens.emplace_back(kPeriod);
      sentence_ranges.emplace_back(begin, rec.doc_tokens.size());
    }
    rec.context_tokens = {kAbout, cue(cue_ids[target])};
    rec.response_tokens = chosen;

    rec.graphs = LabeledMultiGraph(rec.doc_tokens.size());
    for (const auto& [b, e] : sentence_ranges) add_random_tree(rec.graphs, b, e, rng);

    std::map<std::string, std::vector<std::size_t>> marker_positions;
    std::vector<TokenSpan> spans;
    for (std::size_t i = 0; i < rec.doc_tokens.size(); ++i) {
      const auto& w = rec.doc_tokens[i];
      for (std::size_t m = 0; m < spec.markers; ++m)
        if (w == content(m)) {
          marker_positions[w].push_back(i);
          spans.push_back({i, i + 1});
        }
    }
    for (const auto& [_, positions] : marker_positions)
      for (std::size_t k = 1; k < positions.size(); ++k)
        rec.graphs.add_edge(RelationKind::coref, positions[k - 1], positions[k], "coref");
    for (const Edge& e : build_entity_window_graph(spans, kDefaultEntityWindow))
      rec.graphs.add_edge(RelationKind::ent, e.source, e.target, kEntityLabel);
    rec.entity_spans = std::move(spans);
    out.push_back(std::move(rec));
  }
  return out;
}

RunConfig synthetic_run_config(const SyntheticSpec& spec) {
  spec.validate();
  RunConfig cfg;
  auto& enc = cfg.model.encoder;
  enc.mode = EncoderMode::str_lstm;
  enc.relations = {RelationKind::dep};
  enc.hops = 1;
  enc.embedding_dim = 32;
  enc.lstm_hidden = 16;
  enc.gcn_hidden = 32;
  cfg.model.decoder.hidden = 32;
  cfg.model.decoder.attention = 32;
  cfg.model.decoder.max_len = spec.body_max + 4;
  cfg.train.learning_rate = 0.005;
  cfg.train.batch_size = 8;
  cfg.train.epochs = 300;
  cfg.train.seed = spec.seed;
  cfg.train.min_count = 3;
  cfg.train.max_vocab = spec.vocab + Vocabulary::kSpecials.size();
  return cfg;
}

}  // namespace sss
