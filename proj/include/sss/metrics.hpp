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

#ifndef SSS_METRICS_HPP
#define SSS_METRICS_HPP

#include <span>
#include <string>
#include <vector>

namespace sss {

using TokenList = std::vector<std::string>;

/// Corpus-level BLEU-4 on the 0-100 scale: clipped n-gram precisions for
/// n = 1..4 pooled over the corpus, geometric mean, brevity penalty
/// exp(1 - r/c) when the candidates are shorter than the references.
/// Unsmoothed, any zero precision gives 0. With `smooth`, n >= 2 counts get
/// add-one smoothing.
double bleu4(std::span<const TokenList> candidates, std::span<const TokenList> references,
             bool smooth = false);

struct RougeScores {
  double rouge1 = 0.0;
  double rouge2 = 0.0;
  double rougeL = 0.0;
};

/// ROUGE-1, ROUGE-2 and ROUGE-L F1 per pair, averaged, on the 0-100 scale.
RougeScores rouge(std::span<const TokenList> candidates, std::span<const TokenList> references);

/// Length of the longest common subsequence.
std::size_t lcs_length(const TokenList& a, const TokenList& b);

}  // namespace sss

#endif  // SSS_METRICS_HPP
