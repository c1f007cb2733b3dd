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

#include "sss/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <stdexcept>

namespace sss {

namespace {

using NgramCounts = std::map<std::vector<std::string>, std::size_t>;

NgramCounts ngrams(const TokenList& tokens, std::size_t n) {
  NgramCounts counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i)
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  return counts;
}

std::size_t total(const NgramCounts& c) {
  std::size_t t = 0;
  for (const auto& [_, n] : c) t += n;
  return t;
}

std::size_t clipped_overlap(const NgramCounts& cand, const NgramCounts& ref) {
  std::size_t overlap = 0;
  for (const auto& [gram, n] : cand) {
    const auto it = ref.find(gram);
    if (it != ref.end()) overlap += std::min(n, it->second);
  }
  return overlap;
}

void check_inputs(std::span<const TokenList> candidates, std::span<const TokenList> references,
                  const char* who) {
  if (candidates.empty()) throw std::invalid_argument(std::string(who) + ": empty candidate set");
  if (candidates.size() != references.size())
    throw std::invalid_argument(std::string(who) + ": " + std::to_string(candidates.size()) +
                                " candidates for " + std::to_string(references.size()) +
                                " references");
  for (const auto& r : references)
    if (r.empty()) throw std::invalid_argument(std::string(who) + ": empty reference");
}

double f1(std::size_t overlap, std::size_t cand, std::size_t ref) {
  if (overlap == 0 || cand == 0 || ref == 0) return 0.0;
  const double p = static_cast<double>(overlap) / static_cast<double>(cand);
  const double r = static_cast<double>(overlap) / static_cast<double>(ref);
  return 2.0 * p * r / (p + r);
}

}  // namespace

double bleu4(std::span<const TokenList> candidates, std::span<const TokenList> references,
             bool smooth) {
  check_inputs(candidates, references, "bleu4");
  std::array<double, 4> matched{}, possible{};
  double cand_len = 0.0, ref_len = 0.0;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    cand_len += static_cast<double>(candidates[k].size());
    ref_len += static_cast<double>(references[k].size());
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto c = ngrams(candidates[k], n);
      matched[n - 1] += static_cast<double>(clipped_overlap(c, ngrams(references[k], n)));
      possible[n - 1] += static_cast<double>(total(c));
    }
  }
  if (cand_len == 0.0) return 0.0;
  double log_sum = 0.0;
  for (std::size_t n = 0; n < 4; ++n) {
    double m = matched[n], p = possible[n];
    if (smooth && n > 0) {
      m += 1.0;
      p += 1.0;
    }
    if (m == 0.0 || p == 0.0) return 0.0;
    log_sum += std::log(m / p);
  }
  const double bp = cand_len > ref_len ? 1.0 : std::exp(1.0 - ref_len / cand_len);
  return 100.0 * bp * std::exp(log_sum / 4.0);
}

std::size_t lcs_length(const TokenList& a, const TokenList& b) {
  std::vector<std::size_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j)
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeScores rouge(std::span<const TokenList> candidates, std::span<const TokenList> references) {
  check_inputs(candidates, references, "rouge");
  RougeScores s;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const auto& c = candidates[k];
    const auto& r = references[k];
    for (std::size_t n = 1; n <= 2; ++n) {
      const auto cg = ngrams(c, n), rg = ngrams(r, n);
      (n == 1 ? s.rouge1 : s.rouge2) += f1(clipped_overlap(cg, rg), total(cg), total(rg));
    }
    s.rougeL += f1(lcs_length(c, r), c.size(), r.size());
  }
  const double scale = 100.0 / static_cast<double>(candidates.size());
  s.rouge1 *= scale;
  s.rouge2 *= scale;
  s.rougeL *= scale;
  return s;
}

}  // namespace sss
