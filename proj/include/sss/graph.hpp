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

#ifndef SSS_GRAPH_HPP
#define SSS_GRAPH_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace sss {

enum class RelationKind { dep = 0, coref = 1, ent = 2 };

inline constexpr std::array<RelationKind, 3> kAllRelations = {RelationKind::dep,
                                                              RelationKind::coref,
                                                              RelationKind::ent};

std::string_view relation_name(RelationKind kind);
RelationKind relation_from_name(std::string_view name);

/// Direction of an edge as seen from the node whose view it appears in.
enum class Direction { in = 0, out = 1 };

struct Edge {
  std::size_t source = 0;
  std::size_t target = 0;
  std::size_t label = 0;  ///< index into the kind's label vocabulary
  RelationKind kind = RelationKind::dep;

  bool operator==(const Edge&) const = default;
};

/// Per-document set of labelled edge lists, one per relation kind. Self
/// loops are never stored; identical (kind, source, target, label) edges
/// are rejected.
class LabeledMultiGraph {
 public:
  LabeledMultiGraph() = default;
  explicit LabeledMultiGraph(std::size_t length) : length_(length) {}

  std::size_t length() const { return length_; }

  /// Throws std::invalid_argument on out-of-range indices, self loops and
  /// duplicates.
  void add_edge(RelationKind kind, std::size_t source, std::size_t target, std::string_view label);

  const std::vector<Edge>& edges(RelationKind kind) const { return edges_[index(kind)]; }
  const std::vector<std::string>& labels(RelationKind kind) const { return labels_[index(kind)]; }
  const std::string& label_name(const Edge& e) const { return labels_[index(e.kind)].at(e.label); }
  std::size_t edge_count() const;

 private:
  static std::size_t index(RelationKind k) { return static_cast<std::size_t>(k); }

  std::size_t length_ = 0;
  std::array<std::vector<Edge>, 3> edges_;
  std::array<std::vector<std::string>, 3> labels_;
  std::set<std::tuple<std::size_t, std::size_t, std::size_t, std::size_t>> seen_;
};

struct ViewEntry {
  std::size_t neighbor = 0;
  Direction direction = Direction::in;
  std::size_t label = 0;

  bool operator==(const ViewEntry&) const = default;
};

/// Neighbours of `node` under one relation kind: an edge u->v shows up as
/// (v, out, L) for u and (u, in, L) for v. Throws if node is out of range.
std::vector<ViewEntry> neighborhood_view(const LabeledMultiGraph& g, RelationKind kind,
                                         std::size_t node);

/// neighborhood_view for every node at once.
std::vector<std::vector<ViewEntry>> neighborhood_views(const LabeledMultiGraph& g,
                                                       RelationKind kind);

/// Half-open token range [start, end).
struct TokenSpan {
  std::size_t start = 0;
  std::size_t end = 0;

  bool operator==(const TokenSpan&) const = default;
};

enum class WindowUnit { tokens, entities };

/// Entity co-occurrence edges: every pair of spans whose starts lie within
/// `window` (token positions, or span ordinals for WindowUnit::entities) is
/// joined in both directions between the spans' first tokens. Spans must be
/// sorted and non-overlapping.
std::vector<Edge> build_entity_window_graph(std::span<const TokenSpan> spans, std::size_t window,
                                            WindowUnit unit = WindowUnit::tokens);

inline constexpr std::size_t kDefaultEntityWindow = 20;
inline constexpr std::string_view kEntityLabel = "ent";

struct EmbeddingRef {
  std::string file;
  std::size_t row_offset = 0;

  bool operator==(const EmbeddingRef&) const = default;
};

struct CorpusRecord {
  std::vector<std::string> doc_tokens;
  std::vector<std::string> context_tokens;
  std::vector<std::string> response_tokens;
  LabeledMultiGraph graphs;
  std::optional<EmbeddingRef> embedding_ref;
  std::optional<std::vector<TokenSpan>> entity_spans;
};

/// Corpus format or validation failure, tagged with the 1-based line.
class CorpusError : public std::runtime_error {
 public:
  CorpusError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct ParseOptions {
  /// Build ent edges from entity_spans when the record has no graphs.ent.
  bool build_entity_edges = true;
  std::size_t entity_window = kDefaultEntityWindow;
  WindowUnit window_unit = WindowUnit::tokens;
};

CorpusRecord parse_record(std::string_view line, std::size_t line_number = 0,
                          const ParseOptions& options = {});

/// Canonical single-line form: sorted keys, all three graph kinds present,
/// optional keys omitted when absent.
std::string serialize_record(const CorpusRecord& record);

std::vector<CorpusRecord> load_corpus(const std::string& path, const ParseOptions& options = {});
void save_corpus(const std::string& path, std::span<const CorpusRecord> records);

}  // namespace sss

#endif  // SSS_GRAPH_HPP
