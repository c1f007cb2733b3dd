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

#include "sss/graph.hpp"

#include <algorithm>
#include <fstream>

#include "json.hpp"

namespace sss {

using nlohmann::json;

std::string_view relation_name(RelationKind kind) {
  switch (kind) {
    case RelationKind::dep: return "dep";
    case RelationKind::coref: return "coref";
    case RelationKind::ent: return "ent";
  }
  return "?";
}

RelationKind relation_from_name(std::string_view name) {
  for (RelationKind k : kAllRelations)
    if (relation_name(k) == name) return k;
  throw std::invalid_argument("unknown relation kind '" + std::string(name) + "'");
}

void LabeledMultiGraph::add_edge(RelationKind kind, std::size_t source, std::size_t target,
                                 std::string_view label) {
  if (source >= length_ || target >= length_)
    throw std::invalid_argument("edge index out of range (" + std::to_string(source) + " -> " +
                                std::to_string(target) + ", document length " +
                                std::to_string(length_) + ")");
  if (source == target)
    throw std::invalid_argument("self loop at token " + std::to_string(source));

  auto& vocab = labels_[index(kind)];
  auto it = std::find(vocab.begin(), vocab.end(), label);
  const std::size_t label_id = static_cast<std::size_t>(it - vocab.begin());
  if (it == vocab.end()) vocab.emplace_back(label);

  if (!seen_.emplace(index(kind), source, target, label_id).second)
    throw std::invalid_argument("duplicate " + std::string(relation_name(kind)) + " edge " +
                                std::to_string(source) + " -> " + std::to_string(target) +
                                " '" + std::string(label) + "'");
  edges_[index(kind)].push_back({source, target, label_id, kind});
}

std::size_t LabeledMultiGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& e : edges_) n += e.size();
  return n;
}

std::vector<ViewEntry> neighborhood_view(const LabeledMultiGraph& g, RelationKind kind,
                                         std::size_t node) {
  if (node >= g.length())
    throw std::out_of_range("node " + std::to_string(node) + " outside document of length " +
                            std::to_string(g.length()));
  std::vector<ViewEntry> view;
  for (const Edge& e : g.edges(kind)) {
    if (e.source == node) view.push_back({e.target, Direction::out, e.label});
    if (e.target == node) view.push_back({e.source, Direction::in, e.label});
  }
  return view;
}

std::vector<std::vector<ViewEntry>> neighborhood_views(const LabeledMultiGraph& g,
                                                       RelationKind kind) {
  std::vector<std::vector<ViewEntry>> views(g.length());
  for (const Edge& e : g.edges(kind)) {
    views[e.source].push_back({e.target, Direction::out, e.label});
    views[e.target].push_back({e.source, Direction::in, e.label});
  }
  return views;
}

std::vector<Edge> build_entity_window_graph(std::span<const TokenSpan> spans, std::size_t window,
                                            WindowUnit unit) {
  if (window == 0) throw std::invalid_argument("entity window must be positive");
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (spans[i].start >= spans[i].end)
      throw std::invalid_argument("empty entity span at index " + std::to_string(i));
    if (i > 0 && spans[i].start < spans[i - 1].end)
      throw std::invalid_argument("overlapping or unsorted entity spans at index " +
                                  std::to_string(i));
  }
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    for (std::size_t j = i + 1; j < spans.size(); ++j) {
      const std::size_t distance =
          unit == WindowUnit::tokens ? spans[j].start - spans[i].start : j - i;
      if (distance > window) break;
      edges.push_back({spans[i].start, spans[j].start, 0, RelationKind::ent});
      edges.push_back({spans[j].start, spans[i].start, 0, RelationKind::ent});
    }
  }
  return edges;
}

CorpusError::CorpusError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::vector<std::string> token_list(const json& obj, const char* key, bool required) {
  if (!obj.contains(key)) {
    if (required) throw std::invalid_argument(std::string("missing key '") + key + "'");
    return {};
  }
  const json& arr = obj.at(key);
  if (!arr.is_array()) throw std::invalid_argument(std::string("'") + key + "' must be an array");
  std::vector<std::string> out;
  out.reserve(arr.size());
  for (const auto& t : arr) {
    if (!t.is_string())
      throw std::invalid_argument(std::string("'") + key + "' must contain strings");
    out.push_back(t.get<std::string>());
  }
  return out;
}

std::size_t index_value(const json& v, const char* what) {
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw std::invalid_argument(std::string(what) + " must be a non-negative integer");
  return v.get<std::size_t>();
}

CorpusRecord parse_object(const json& obj, const ParseOptions& options) {
  if (!obj.is_object()) throw std::invalid_argument("record must be a JSON object");
  static const std::set<std::string> known = {"doc_tokens",   "context_tokens", "response_tokens",
                                              "graphs",       "entity_spans",   "embedding_ref"};
  for (const auto& [key, value] : obj.items())
    if (!known.count(key)) throw std::invalid_argument("unknown key '" + key + "'");

  CorpusRecord r;
  r.doc_tokens = token_list(obj, "doc_tokens", true);
  r.context_tokens = token_list(obj, "context_tokens", true);
  r.response_tokens = token_list(obj, "response_tokens", true);
  if (r.doc_tokens.empty()) throw std::invalid_argument("doc_tokens must be nonempty");
  if (r.response_tokens.empty()) throw std::invalid_argument("response_tokens must be nonempty");

  if (obj.contains("entity_spans")) {
    const json& spans = obj.at("entity_spans");
    if (!spans.is_array()) throw std::invalid_argument("'entity_spans' must be an array");
    std::vector<TokenSpan> out;
    for (const auto& s : spans) {
      if (!s.is_array() || s.size() != 2)
        throw std::invalid_argument("entity span must be [start, end]");
      TokenSpan span{index_value(s[0], "span start"), index_value(s[1], "span end")};
      if (span.end > r.doc_tokens.size()) throw std::invalid_argument("entity span out of range");
      out.push_back(span);
    }
    // Validates ordering and overlap.
    (void)build_entity_window_graph(out, 1);
    r.entity_spans = std::move(out);
  }

  if (obj.contains("embedding_ref")) {
    const json& ref = obj.at("embedding_ref");
    if (!ref.is_object() || !ref.contains("file") || !ref.at("file").is_string() ||
        !ref.contains("row_offset"))
      throw std::invalid_argument("embedding_ref must be {file, row_offset}");
    r.embedding_ref = EmbeddingRef{ref.at("file").get<std::string>(),
                                   index_value(ref.at("row_offset"), "row_offset")};
  }

  r.graphs = LabeledMultiGraph(r.doc_tokens.size());
  const json graphs = obj.contains("graphs") ? obj.at("graphs") : json::object();
  if (!graphs.is_object()) throw std::invalid_argument("'graphs' must be an object");
  for (const auto& [key, value] : graphs.items()) {
    const RelationKind kind = relation_from_name(key);
    if (!value.is_array()) throw std::invalid_argument("graphs." + key + " must be an array");
    for (const auto& e : value) {
      if (!e.is_array() || e.size() != 3 || !e[2].is_string())
        throw std::invalid_argument("edge must be [source, target, label]");
      r.graphs.add_edge(kind, index_value(e[0], "edge source"), index_value(e[1], "edge target"),
                        e[2].get<std::string>());
    }
  }
  if (!graphs.contains("ent") && r.entity_spans && options.build_entity_edges) {
    for (const Edge& e :
         build_entity_window_graph(*r.entity_spans, options.entity_window, options.window_unit))
      r.graphs.add_edge(RelationKind::ent, e.source, e.target, kEntityLabel);
  }
  return r;
}

}  // namespace

CorpusRecord parse_record(std::string_view line, std::size_t line_number,
                          const ParseOptions& options) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw CorpusError(line_number, std::string("malformed record: ") + e.what());
  }
  try {
    return parse_object(obj, options);
  } catch (const json::exception& e) {
    throw CorpusError(line_number, e.what());
  } catch (const std::invalid_argument& e) {
    throw CorpusError(line_number, e.what());
  }
}

std::string serialize_record(const CorpusRecord& r) {
  json obj;
  obj["doc_tokens"] = r.doc_tokens;
  obj["context_tokens"] = r.context_tokens;
  obj["response_tokens"] = r.response_tokens;
  json graphs = json::object();
  for (RelationKind kind : kAllRelations) {
    json edges = json::array();
    for (const Edge& e : r.graphs.edges(kind))
      edges.push_back(json::array({e.source, e.target, r.graphs.label_name(e)}));
    graphs[std::string(relation_name(kind))] = std::move(edges);
  }
  obj["graphs"] = std::move(graphs);
  if (r.entity_spans) {
    json spans = json::array();
    for (const auto& s : *r.entity_spans) spans.push_back(json::array({s.start, s.end}));
    obj["entity_spans"] = std::move(spans);
  }
  if (r.embedding_ref)
    obj["embedding_ref"] = {{"file", r.embedding_ref->file},
                            {"row_offset", r.embedding_ref->row_offset}};
  return obj.dump();
}

std::vector<CorpusRecord> load_corpus(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file '" + path + "'");
  std::vector<CorpusRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    records.push_back(parse_record(line, line_number, options));
  }
  return records;
}

void save_corpus(const std::string& path, std::span<const CorpusRecord> records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write corpus file '" + path + "'");
  for (const auto& r : records) out << serialize_record(r) << '\n';
}

}  // namespace sss
