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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "sss/embeddings.hpp"
#include "sss/graph.hpp"
#include "sss/vocab.hpp"
#include "test_util.hpp"

using namespace sss;
using nlohmann::json;
using nlohmann::ordered_json;

TEST_CASE("parse a minimal record") {
  const auto r = parse_record(
      R"({"doc_tokens":["a","b"],"context_tokens":["q"],"response_tokens":["b"],)"
      R"("graphs":{"dep":[[0,1,"nsubj"]]}})");
  CHECK(r.graphs.length() == 2);
  CHECK(r.graphs.edges(RelationKind::dep).size() == 1);
  CHECK(r.graphs.edges(RelationKind::coref).empty());
  CHECK(r.graphs.label_name(r.graphs.edges(RelationKind::dep)[0]) == "nsubj");
}

TEST_CASE("parse errors carry the line number") {
  auto error_of = [](std::string_view line) {
    try {
      parse_record(line, 7);
    } catch (const CorpusError& e) {
      CHECK(e.line() == 7);
      return std::string(e.what());
    }
    return std::string();
  };
  const std::string base = R"("doc_tokens":["a","b"],"context_tokens":["q"],"response_tokens":["b"])";
  CHECK(error_of("{" + base + R"(,"graphs":{"dep":[[0,2,"x"]]}})").find("edge index out of range") !=
        std::string::npos);
  CHECK(error_of("{" + base + R"(,"graphs":{"dep":[[1,1,"x"]]}})").find("self loop") !=
        std::string::npos);
  CHECK(error_of("{" + base + R"(,"graphs":{"dep":[[0,1,"x"],[0,1,"x"]]}})").find("duplicate") !=
        std::string::npos);
  CHECK(error_of("{" + base).find("line 7: malformed") == 0);
  CHECK(error_of(R"({"doc_tokens":["a"],"context_tokens":[],"response_tokens":[]})")
            .find("response_tokens must be nonempty") != std::string::npos);
  CHECK(error_of("{" + base + R"(,"graphs":{"srl":[]}})").find("unknown relation") !=
        std::string::npos);
  CHECK(error_of("{" + base + R"(,"entity_spans":[[0,2],[1,2]]})").find("overlapping") !=
        std::string::npos);
  CHECK_FALSE(error_of("{" + base + R"(,"graphs":{"dep":[[0,1,"x"],[0,1,"y"]],"coref":[[0,1,"x"]]}})")
                  .size());
}

TEST_CASE("entity window graph") {
  const std::vector<TokenSpan> far = {{0, 1}, {25, 27}};
  CHECK(build_entity_window_graph(far, 20).empty());

  const std::vector<TokenSpan> one = {{3, 5}};
  CHECK(build_entity_window_graph(one, 20).empty());

  const std::vector<TokenSpan> overlapping = {{0, 3}, {2, 4}};
  CHECK_THROWS_AS(build_entity_window_graph(overlapping, 20), std::invalid_argument);
  CHECK_THROWS_AS(build_entity_window_graph(one, 0), std::invalid_argument);

  // Brute force over all pairs.
  Rng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<TokenSpan> spans;
    std::size_t pos = 0;
    std::uniform_int_distribution<std::size_t> gap(0, 15), len(1, 3);
    const int count = 1 + trial % 7;
    for (int i = 0; i < count; ++i) {
      pos += gap(rng);
      const std::size_t l = len(rng);
      spans.push_back({pos, pos + l});
      pos += l;
    }
    if (trial == 0) spans = {{0, 1}, {5, 6}, {30, 31}};
    const auto edges = build_entity_window_graph(spans, 20);
    std::vector<std::pair<std::size_t, std::size_t>> expected, got;
    for (std::size_t i = 0; i < spans.size(); ++i)
      for (std::size_t j = 0; j < spans.size(); ++j)
        if (i != j && (spans[i].start > spans[j].start ? spans[i].start - spans[j].start
                                                       : spans[j].start - spans[i].start) <= 20)
          expected.emplace_back(spans[i].start, spans[j].start);
    for (const Edge& e : edges) {
      CHECK(e.kind == RelationKind::ent);
      got.emplace_back(e.source, e.target);
    }
    std::sort(expected.begin(), expected.end());
    std::sort(got.begin(), got.end());
    CHECK(got == expected);
    if (trial == 0)
      CHECK(got == std::vector<std::pair<std::size_t, std::size_t>>{{0, 5}, {5, 0}});
  }
}

TEST_CASE("entity window measured in entities") {
  const std::vector<TokenSpan> spans = {{0, 1}, {40, 41}, {90, 91}};
  CHECK(build_entity_window_graph(spans, 1, WindowUnit::entities).size() == 4);
  CHECK(build_entity_window_graph(spans, 2, WindowUnit::entities).size() == 6);
}

TEST_CASE("ent edges are built from spans when the record has none") {
  const auto r = parse_record(
      R"({"doc_tokens":["A","x","B","y"],"context_tokens":["q"],"response_tokens":["B"],)"
      R"("entity_spans":[[0,1],[2,3]]})");
  CHECK(r.graphs.edges(RelationKind::ent).size() == 2);
  ParseOptions no_build;
  no_build.build_entity_edges = false;
  const auto bare = parse_record(
      R"({"doc_tokens":["A","x","B","y"],"context_tokens":["q"],"response_tokens":["B"],)"
      R"("entity_spans":[[0,1],[2,3]]})",
      1, no_build);
  CHECK(bare.graphs.edges(RelationKind::ent).empty());
}

TEST_CASE("neighborhood view") {
  LabeledMultiGraph g(3);
  g.add_edge(RelationKind::dep, 0, 1, "a");
  CHECK(neighborhood_view(g, RelationKind::dep, 0) ==
        std::vector<ViewEntry>{{1, Direction::out, 0}});
  CHECK(neighborhood_view(g, RelationKind::dep, 1) ==
        std::vector<ViewEntry>{{0, Direction::in, 0}});
  CHECK(neighborhood_view(g, RelationKind::dep, 2).empty());
  CHECK(neighborhood_view(g, RelationKind::coref, 0).empty());
  CHECK_THROWS(neighborhood_view(g, RelationKind::dep, 3));
}

TEST_CASE("views reconstruct the edge list exactly") {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    LabeledMultiGraph g(10);
    std::uniform_int_distribution<std::size_t> node(0, 9), label(0, 2);
    for (int e = 0; e < 25; ++e) {
      const std::size_t s = node(rng), t = node(rng);
      try {
        g.add_edge(RelationKind::dep, s, t, "l" + std::to_string(label(rng)));
      } catch (const std::invalid_argument&) {
      }
    }
    std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> from_out, from_in, edges;
    for (const Edge& e : g.edges(RelationKind::dep)) edges.emplace_back(e.source, e.target, e.label);
    std::size_t entries = 0;
    for (std::size_t v = 0; v < 10; ++v) {
      const auto view = neighborhood_view(g, RelationKind::dep, v);
      CHECK(view == neighborhood_views(g, RelationKind::dep)[v]);
      entries += view.size();
      for (const auto& e : view) {
        CHECK(e.neighbor != v);
        if (e.direction == Direction::out) from_out.emplace_back(v, e.neighbor, e.label);
        else from_in.emplace_back(e.neighbor, v, e.label);
      }
    }
    std::sort(edges.begin(), edges.end());
    std::sort(from_out.begin(), from_out.end());
    std::sort(from_in.begin(), from_in.end());
    CHECK(from_out == edges);
    CHECK(from_in == edges);
    CHECK(entries == 2 * edges.size());
  }
}

namespace {

// Random record text with shuffled key order and optionally missing graph
// kinds, plus its canonical form computed without the library.
std::pair<std::string, std::string> random_record_text(Rng& rng) {
  std::uniform_int_distribution<std::size_t> len(1, 12), word(0, 30), coin(0, 1);
  auto tokens = [&](std::size_t n) {
    std::vector<std::string> t;
    for (std::size_t i = 0; i < n; ++i) t.push_back("w" + std::to_string(word(rng)));
    return t;
  };
  const std::size_t n = len(rng);
  ordered_json rec;
  std::vector<std::string> keys = {"doc_tokens", "context_tokens", "response_tokens", "graphs"};
  std::shuffle(keys.begin(), keys.end(), rng);
  ordered_json graphs = ordered_json::object();
  for (const char* kind : {"ent", "dep", "coref"}) {
    if (coin(rng) && std::string(kind) != "ent") continue;
    ordered_json edges = ordered_json::array();
    std::set<std::tuple<std::size_t, std::size_t, std::string>> seen;
    std::uniform_int_distribution<std::size_t> node(0, n - 1);
    for (int e = 0; e < 6 && n > 1; ++e) {
      const std::size_t s = node(rng), t = node(rng);
      const std::string label = std::string(kind) + std::to_string(coin(rng));
      if (s == t || !seen.emplace(s, t, label).second) continue;
      edges.push_back(ordered_json::array({s, t, label}));
    }
    graphs[kind] = edges;
  }
  for (const auto& k : keys) {
    if (k == "graphs") rec[k] = graphs;
    else if (k == "doc_tokens") rec[k] = tokens(n);
    else if (k == "context_tokens") rec[k] = tokens(len(rng));
    else rec[k] = tokens(len(rng));
  }
  if (coin(rng)) rec["embedding_ref"] = {{"row_offset", word(rng)}, {"file", "emb.bin"}};
  if (coin(rng)) rec["entity_spans"] = ordered_json::array({ordered_json::array({0, 1})});

  json canonical = json::parse(rec.dump());
  for (const char* kind : {"dep", "coref", "ent"})
    if (!canonical["graphs"].contains(kind)) canonical["graphs"][kind] = json::array();
  return {rec.dump(), canonical.dump()};
}

}  // namespace

TEST_CASE("serialize(parse(x)) is the canonical form of x") {
  Rng rng(50);
  for (int i = 0; i < 50; ++i) {
    const auto [text, canonical] = random_record_text(rng);
    CAPTURE(text);
    const auto r = parse_record(text, i + 1);
    CHECK(serialize_record(r) == canonical);
    CHECK(serialize_record(parse_record(serialize_record(r))) == canonical);
  }
}

TEST_CASE("corpus file round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "sss_graph_test";
  std::filesystem::create_directories(dir);
  Rng rng(4);
  std::vector<CorpusRecord> records;
  for (int i = 0; i < 5; ++i) records.push_back(parse_record(random_record_text(rng).first));
  const auto path = (dir / "c.jsonl").string();
  save_corpus(path, records);
  const auto back = load_corpus(path);
  REQUIRE(back.size() == records.size());
  for (std::size_t i = 0; i < back.size(); ++i)
    CHECK(serialize_record(back[i]) == serialize_record(records[i]));
  CHECK_THROWS(load_corpus((dir / "missing.jsonl").string()));
}

TEST_CASE("embedding file round trip and validation") {
  const auto dir = std::filesystem::temp_directory_path() / "sss_graph_test";
  std::filesystem::create_directories(dir);
  Rng rng(9);
  EmbeddingMatrix m{3, 5, test::uniform(15, rng)};
  const auto path = (dir / "e.bin").string();
  write_embedding_file(path, m);
  const auto back = read_embedding_file(path);
  CHECK(back.rows == 3);
  CHECK(back.dim == 5);
  for (std::size_t i = 0; i < m.values.size(); ++i)
    CHECK(back.values[i] == static_cast<double>(static_cast<float>(m.values[i])));

  const auto bad = (dir / "bad.bin").string();
  {
    std::ofstream out(bad, std::ios::binary);
    out << "NOTMAGIC";
  }
  CHECK_THROWS_WITH(read_embedding_file(bad), doctest::Contains("bad magic"));
}

TEST_CASE("vocabulary orders by frequency and caps") {
  CorpusRecord r;
  r.doc_tokens = {"b", "a", "b", "c"};
  r.context_tokens = {"<sep>", "b"};
  r.response_tokens = {"a"};
  r.graphs = LabeledMultiGraph(4);
  const std::vector<CorpusRecord> rs = {r};
  const auto v = Vocabulary::build(rs, 6);
  CHECK(v.size() == 6);
  CHECK(v.word(4) == "b");
  CHECK(v.word(5) == "a");
  CHECK(v.id("c") == Vocabulary::kUnk);
  CHECK(Vocabulary::build(rs, 100, 2).size() == 6);

  r.graphs.add_edge(RelationKind::dep, 0, 1, "nsubj");
  r.graphs.add_edge(RelationKind::dep, 1, 2, "nsubj");
  r.graphs.add_edge(RelationKind::dep, 2, 3, "obj");
  const std::vector<CorpusRecord> rs2 = {r};
  const auto labels = LabelVocab::build(rs2, 1);
  CHECK(labels.size(RelationKind::dep) == 2);
  CHECK(labels.id(RelationKind::dep, "nsubj") == 1);
  CHECK(labels.id(RelationKind::dep, "obj") == 0);
  CHECK(labels.size(RelationKind::coref) == 1);
}
