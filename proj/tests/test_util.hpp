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

#ifndef SSS_TESTS_TEST_UTIL_HPP
#define SSS_TESTS_TEST_UTIL_HPP

#include <random>
#include <vector>

#include "sss/params.hpp"
#include "sss/tensor.hpp"

namespace sss::test {

inline std::vector<double> uniform(std::size_t n, Rng& rng, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = dist(rng);
  return v;
}

/// Sum of every entry as a [1] or [1 x 1] scalar.
inline Tensor total(const Tensor& t) {
  if (t.rank() == 1) return sum_rows(t);
  return sum_rows(transpose(sum_rows(t)));
}

inline double max_abs_diff(const Tensor& a, const Tensor& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Fills every parameter with uniform values in [lo, hi].
inline void randomize(ParamStore& store, Rng& rng, double lo = -0.5, double hi = 0.5) {
  std::uniform_real_distribution<double> dist(lo, hi);
  for (ParamId id = 0; id < store.size(); ++id)
    for (double& v : store[id].values) v = dist(rng);
}

}  // namespace sss::test

#endif  // SSS_TESTS_TEST_UTIL_HPP
