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

#ifndef SSS_VOCAB_HPP
#define SSS_VOCAB_HPP

#include <array>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "sss/graph.hpp"

namespace sss {

/// Fixed word vocabulary. The first four ids are reserved.
class Vocabulary {
 public:
  static constexpr std::size_t kUnk = 0;
  static constexpr std::size_t kSos = 1;
  static constexpr std::size_t kEos = 2;
  static constexpr std::size_t kSep = 3;
  static constexpr std::array<const char*, 4> kSpecials = {"<unk>", "<s>", "</s>", "<sep>"};

  Vocabulary();
  explicit Vocabulary(std::vector<std::string> words);

  /// Words from all token fields, ordered by descending count then
  /// lexicographically; at most `max_size` entries including specials.
  static Vocabulary build(std::span<const CorpusRecord> records, std::size_t max_size,
                          std::size_t min_count = 1);

  std::size_t size() const { return words_.size(); }
  bool contains(const std::string& w) const { return index_.count(w) != 0; }
  /// Id of `w`, or kUnk.
  std::size_t id(const std::string& w) const;
  const std::string& word(std::size_t id) const { return words_.at(id); }
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Model-side label vocabulary per relation kind. Each kind keeps its most
/// frequent labels and an "other" bucket at id 0.
class LabelVocab {
 public:
  static constexpr const char* kOther = "<other>";

  LabelVocab();
  static LabelVocab build(std::span<const CorpusRecord> records, std::size_t max_labels = 32);

  std::size_t size(RelationKind kind) const { return labels_[idx(kind)].size(); }
  /// Label id for a label string, "other" when unseen.
  std::size_t id(RelationKind kind, const std::string& label) const;
  const std::vector<std::string>& labels(RelationKind kind) const { return labels_[idx(kind)]; }
  void set_labels(RelationKind kind, std::vector<std::string> labels);

 private:
  static std::size_t idx(RelationKind k) { return static_cast<std::size_t>(k); }
  std::array<std::vector<std::string>, 3> labels_;
  std::array<std::unordered_map<std::string, std::size_t>, 3> index_;
};

}  // namespace sss

#endif  // SSS_VOCAB_HPP
