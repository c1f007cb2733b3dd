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

#include "sss/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sss {

namespace {

double evaluate(const ScalarObjective& f, const ParamStore& store) {
  Session session(store);
  return f(session).item();
}

}  // namespace

double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
  return std::abs(analytic - numeric) / scale;
}

GradCheckReport grad_check(const ScalarObjective& f, ParamStore& store, double step, double tol,
                           const std::vector<ParamId>& only) {
  if (!(step > 0.0)) throw std::invalid_argument("grad_check: step must be positive");

  GradBuffer analytic(store);
  double base = 0.0;
  {
    Tape tape;
    Session session(store, &tape);
    Tensor loss = f(session);
    base = loss.item();
    session.accumulate(backward(loss), analytic);
  }
  if (evaluate(f, store) != base)
    throw std::runtime_error("grad_check: objective is not deterministic at the base point");

  std::vector<ParamId> ids = only;
  if (ids.empty())
    for (ParamId id = 0; id < store.size(); ++id) ids.push_back(id);

  GradCheckReport report;
  report.tolerance = tol;
  for (ParamId id : ids) {
    ParamCheck check;
    check.name = store[id].name;
    auto& values = store[id].values;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + step;
      const double up = evaluate(f, store);
      values[i] = saved - step;
      const double down = evaluate(f, store);
      values[i] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic.grads[id][i];
      const double err = relative_error(a, numeric);
      if (err > check.max_rel_error || i == 0) {
        check.max_rel_error = std::max(err, check.max_rel_error);
        check.worst_index = i;
        check.analytic = a;
        check.numeric = numeric;
      }
    }
    report.max_rel_error = std::max(report.max_rel_error, check.max_rel_error);
    report.params.push_back(std::move(check));
  }

  if (evaluate(f, store) != base)
    throw std::runtime_error("grad_check: objective changed value after probing");
  report.passed = report.max_rel_error < tol;
  return report;
}

}  // namespace sss
