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

#ifndef SSS_PARAMS_HPP
#define SSS_PARAMS_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "sss/tensor.hpp"

namespace sss {

using Rng = std::mt19937_64;
using ParamId = std::size_t;

struct Parameter {
  std::string name;
  Shape shape;
  std::vector<double> values;
};

/// Named trainable parameters in declaration order. Declaration order is
/// the checkpoint order.
class ParamStore {
 public:
  ParamId add(std::string name, Shape shape, std::vector<double> values);
  ParamId add_zeros(std::string name, Shape shape);
  /// Glorot-uniform, limit sqrt(6 / (fan_in + fan_out)).
  ParamId add_glorot(std::string name, std::size_t rows, std::size_t cols, Rng& rng);

  const Parameter& operator[](ParamId id) const { return params_.at(id); }
  Parameter& operator[](ParamId id) { return params_.at(id); }
  std::optional<ParamId> find(const std::string& name) const;
  ParamId id(const std::string& name) const;

  std::size_t size() const { return params_.size(); }
  std::size_t total_values() const;

  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  /// Sets every parameter whose name starts with `prefix` to zero.
  void zero_prefix(const std::string& prefix);

 private:
  std::vector<Parameter> params_;
  std::unordered_map<std::string, ParamId> index_;
};

/// Per-parameter gradient accumulator aligned with a ParamStore.
struct GradBuffer {
  std::vector<std::vector<double>> grads;

  explicit GradBuffer(const ParamStore& store);
  void zero();
  void scale(double factor);
  double global_norm() const;
  bool all_finite() const;
};

/// Binds parameters for one forward pass. With a tape, each parameter
/// becomes a gradient-tracking leaf the first time it is used; without one,
/// parameters are plain constants.
class Session {
 public:
  explicit Session(const ParamStore& store, Tape* tape = nullptr);

  Tensor operator()(ParamId id);
  Tape* tape() const { return tape_; }
  const ParamStore& store() const { return *store_; }

  /// Adds this pass's parameter gradients into `into`.
  void accumulate(const Gradients& grads, GradBuffer& into) const;

 private:
  const ParamStore* store_;
  Tape* tape_;
  std::vector<std::optional<Tensor>> bound_;
};

}  // namespace sss

#endif  // SSS_PARAMS_HPP
