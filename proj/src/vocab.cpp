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

#include "sss/vocab.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace sss {

namespace {

std::vector<std::string> by_frequency(const std::map<std::string, std::size_t>& counts,
                                      std::size_t min_count) {
  std::vector<std::pair<std::string, std::size_t>> items;
  for (const auto& [w, c] : counts)
    if (c >= min_count) items.emplace_back(w, c);
  std::stable_sort(items.begin(), items.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> out;
  out.reserve(items.size());
  for (auto& [w, c] : items) out.push_back(std::move(w));
  return out;
}

}  // namespace

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

Vocabulary::Vocabulary(std::vector<std::string> words) {
  for (const char* s : kSpecials) {
    index_.emplace(s, words_.size());
    words_.emplace_back(s);
  }
  for (auto& w : words) {
    if (index_.count(w)) continue;
    index_.emplace(w, words_.size());
    words_.push_back(std::move(w));
  }
}

Vocabulary Vocabulary::build(std::span<const CorpusRecord> records, std::size_t max_size,
                             std::size_t min_count) {
  if (max_size < kSpecials.size()) throw std::invalid_argument("vocabulary cap below specials");
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records) {
    for (const auto& t : r.doc_tokens) ++counts[t];
    for (const auto& t : r.context_tokens) ++counts[t];
    for (const auto& t : r.response_tokens) ++counts[t];
  }
  for (const char* s : kSpecials) counts.erase(s);
  auto words = by_frequency(counts, min_count);
  if (words.size() > max_size - kSpecials.size()) words.resize(max_size - kSpecials.size());
  return Vocabulary(std::move(words));
}

std::size_t Vocabulary::id(const std::string& w) const {
  auto it = index_.find(w);
  return it == index_.end() ? kUnk : it->second;
}

LabelVocab::LabelVocab() {
  for (RelationKind k : kAllRelations) set_labels(k, {});
}

LabelVocab LabelVocab::build(std::span<const CorpusRecord> records, std::size_t max_labels) {
  std::array<std::map<std::string, std::size_t>, 3> counts;
  for (const auto& r : records)
    for (RelationKind k : kAllRelations)
      for (const Edge& e : r.graphs.edges(k)) ++counts[idx(k)][r.graphs.label_name(e)];
  LabelVocab v;
  for (RelationKind k : kAllRelations) {
    counts[idx(k)].erase(kOther);
    auto labels = by_frequency(counts[idx(k)], 1);
    if (labels.size() > max_labels) labels.resize(max_labels);
    v.set_labels(k, std::move(labels));
  }
  return v;
}

void LabelVocab::set_labels(RelationKind kind, std::vector<std::string> labels) {
  auto& out = labels_[idx(kind)];
  auto& index = index_[idx(kind)];
  out.assign(1, kOther);
  index.clear();
  index.emplace(kOther, 0);
  for (auto& l : labels) {
    if (index.count(l)) continue;
    index.emplace(l, out.size());
    out.push_back(std::move(l));
  }
}

std::size_t LabelVocab::id(RelationKind kind, const std::string& label) const {
  const auto& index = index_[idx(kind)];
  auto it = index.find(label);
  return it == index.end() ? 0 : it->second;
}

}  // namespace sss
