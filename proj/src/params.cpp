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

#include "sss/params.hpp"

#include <cmath>

namespace sss {

ParamId ParamStore::add(std::string name, Shape shape, std::vector<double> values) {
  if (index_.count(name)) throw std::invalid_argument("duplicate parameter '" + name + "'");
  if (values.size() != numel(shape))
    throw std::invalid_argument("parameter '" + name + "' has " + std::to_string(values.size()) +
                                " values for shape " + shape_string(shape));
  const ParamId id = params_.size();
  index_.emplace(name, id);
  params_.push_back({std::move(name), std::move(shape), std::move(values)});
  return id;
}

ParamId ParamStore::add_zeros(std::string name, Shape shape) {
  const std::size_t n = numel(shape);
  return add(std::move(name), std::move(shape), std::vector<double>(n, 0.0));
}

ParamId ParamStore::add_glorot(std::string name, std::size_t rows, std::size_t cols, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-limit, limit);
  std::vector<double> values(rows * cols);
  for (double& v : values) v = dist(rng);
  return add(std::move(name), {rows, cols}, std::move(values));
}

std::optional<ParamId> ParamStore::find(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ParamId ParamStore::id(const std::string& name) const {
  auto found = find(name);
  if (!found) throw std::out_of_range("no parameter named '" + name + "'");
  return *found;
}

std::size_t ParamStore::total_values() const {
  std::size_t n = 0;
  for (const auto& p : params_) n += p.values.size();
  return n;
}

void ParamStore::zero_prefix(const std::string& prefix) {
  for (auto& p : params_)
    if (p.name.rfind(prefix, 0) == 0) std::fill(p.values.begin(), p.values.end(), 0.0);
}

GradBuffer::GradBuffer(const ParamStore& store) {
  grads.reserve(store.size());
  for (const auto& p : store) grads.emplace_back(p.values.size(), 0.0);
}

void GradBuffer::zero() {
  for (auto& g : grads) std::fill(g.begin(), g.end(), 0.0);
}

void GradBuffer::scale(double factor) {
  for (auto& g : grads)
    for (double& v : g) v *= factor;
}

double GradBuffer::global_norm() const {
  double s = 0.0;
  for (const auto& g : grads)
    for (double v : g) s += v * v;
  return std::sqrt(s);
}

bool GradBuffer::all_finite() const {
  for (const auto& g : grads)
    for (double v : g)
      if (!std::isfinite(v)) return false;
  return true;
}

Session::Session(const ParamStore& store, Tape* tape)
    : store_(&store), tape_(tape), bound_(store.size()) {}

Tensor Session::operator()(ParamId id) {
  auto& slot = bound_.at(id);
  if (!slot) {
    const Parameter& p = (*store_)[id];
    slot = tape_ ? tape_->leaf(p.shape, p.values) : Tensor(p.shape, p.values);
  }
  return *slot;
}

void Session::accumulate(const Gradients& grads, GradBuffer& into) const {
  for (ParamId id = 0; id < bound_.size(); ++id) {
    if (!bound_[id] || !bound_[id]->node_id()) continue;
    auto g = grads.raw(*bound_[id]->node_id());
    auto& dst = into.grads[id];
    for (std::size_t i = 0; i < g.size(); ++i) dst[i] += g[i];
  }
}

}  // namespace sss
