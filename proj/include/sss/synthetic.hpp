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

#ifndef SSS_SYNTHETIC_HPP
#define SSS_SYNTHETIC_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sss/config.hpp"
#include "sss/graph.hpp"

namespace sss {

/// Span-copy corpus. Each document is a list of sentences "cue w1 .. wL .";
/// the target sentence carries "about" after its cue, the context is
/// "about cue" and the response is the target sentence's body. Some
/// response words are replaced, in the document too, by unique
/// out-of-vocabulary strings so only copying can recover them.
struct SyntheticSpec {
  std::size_t records = 200;
  /// Distinct in-vocabulary word types, cues and punctuation included.
  std::size_t vocab = 50;
  std::size_t cues = 8;
  std::size_t sentences = 3;
  std::size_t body_min = 4;
  std::size_t body_max = 6;
  /// Fraction of response tokens that are out of vocabulary.
  double oov_fraction = 0.1;
  /// Word types that mark entities; repeats are joined by coref edges.
  std::size_t markers = 5;
  std::uint64_t seed = 7;
  /// Prefix keeping out-of-vocabulary strings unique across corpora.
  std::string oov_prefix = "oov";

  /// Throws std::invalid_argument on an inconsistent spec.
  void validate() const;
};

SyntheticSpec parse_synthetic_spec(std::string_view json_text);

/// The in-vocabulary word types the generator draws from.
std::vector<std::string> synthetic_words(const SyntheticSpec& spec);

std::vector<CorpusRecord> generate_synthetic(const SyntheticSpec& spec);

/// Desk-scale settings for training on a synthetic corpus: str_lstm over
/// dep graphs with k = 1, width 32, and a vocabulary holding every
/// in-vocabulary type of `spec`.
RunConfig synthetic_run_config(const SyntheticSpec& spec);

}  // namespace sss

#endif  // SSS_SYNTHETIC_HPP
