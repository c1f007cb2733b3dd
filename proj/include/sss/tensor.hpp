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

#ifndef SSS_TENSOR_HPP
#define SSS_TENSOR_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sss {

/// Raised for shape mismatches, non-finite forward results and misuse of
/// the tape.
class TensorError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Shape = std::vector<std::size_t>;
using NodeId = std::size_t;

std::size_t numel(const Shape& shape);
std::string shape_string(const Shape& shape);

class Tape;
class Tensor;
class Gradients;
Gradients backward(const Tensor& loss);

/// Dense row-major tensor of doubles. Values are immutable once created; a
/// tensor that requires gradients carries the tape it was recorded on and
/// its node id there.
///
/// Rank-2 tensors are the working currency of the layers. Row vectors are
/// stored as [1 x m], so `h W` reads left to right.
class Tensor {
 public:
  Tensor() = default;
  Tensor(Shape shape, std::vector<double> values);

  static Tensor zeros(Shape shape);
  static Tensor filled(Shape shape, double value);
  static Tensor scalar(double value) { return Tensor({1}, {value}); }
  static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> values) {
    return Tensor({rows, cols}, std::move(values));
  }

  const Shape& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_ ? data_->size() : 0; }
  /// Leading dimension for rank 2, 1 otherwise.
  std::size_t rows() const { return shape_.size() == 2 ? shape_[0] : 1; }
  std::size_t cols() const { return shape_.empty() ? 0 : shape_.back(); }

  std::span<const double> values() const;
  double operator[](std::size_t i) const { return (*data_)[i]; }
  double at(std::size_t r, std::size_t c) const { return (*data_)[r * cols() + c]; }
  /// Only valid when size() == 1.
  double item() const;

  bool requires_grad() const { return node_.has_value(); }
  std::optional<NodeId> node_id() const { return node_; }
  Tape* tape() const { return tape_; }

  /// Same values, detached from any tape.
  Tensor detached() const;

 private:
  friend class Tape;
  Shape shape_;
  std::shared_ptr<const std::vector<double>> data_;
  Tape* tape_ = nullptr;
  std::optional<NodeId> node_;
};

enum class OpKind {
  matmul,
  add,
  sub,
  elemwise_mul,
  sigmoid,
  tanh,
  relu,
  softmax_masked,
  concat_last_dim,
  sum_rows,
  scalar_scale,
  gather_rows,
  // Extensions needed by the layers.
  concat_rows,
  scatter_rows,
  row_scale,
  log,
  transpose,
};

std::string_view op_name(OpKind kind);
OpKind op_from_name(std::string_view name);

/// Non-tensor arguments of a primitive.
struct OpAttrs {
  double scalar = 0.0;                ///< scalar_scale factor, log floor
  std::vector<std::size_t> indices;   ///< gather_rows / scatter_rows rows
  std::size_t count = 0;              ///< scatter_rows output rows
};

/// Applies a primitive. Records on the tape when any input requires grad.
Tensor op_apply(OpKind kind, std::span<const Tensor> inputs, const OpAttrs& attrs = {});

Tensor matmul(const Tensor& a, const Tensor& b);
/// Same shapes, or `b` a [1 x m] bias row added to every row of `a`.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor elemwise_mul(const Tensor& a, const Tensor& b);
Tensor sigmoid(const Tensor& x);
Tensor tanh(const Tensor& x);
Tensor relu(const Tensor& x);
/// Row-wise softmax over the last dimension. Masked entries (mask value 0)
/// come out exactly zero.
Tensor softmax_masked(const Tensor& logits, const Tensor& mask);
Tensor softmax(const Tensor& logits);
Tensor concat_last_dim(std::span<const Tensor> parts);
Tensor concat_last_dim(const Tensor& a, const Tensor& b);
Tensor concat_rows(std::span<const Tensor> parts);
/// [n x m] -> [1 x m]; rank 1 [n] -> [1].
Tensor sum_rows(const Tensor& x);
Tensor scalar_scale(const Tensor& x, double factor);
Tensor gather_rows(const Tensor& x, std::vector<std::size_t> rows);
/// out[rows[e]] += x[e]; output has `count` rows.
Tensor scatter_rows(const Tensor& x, std::vector<std::size_t> rows, std::size_t count);
/// x [n x m] times per-row scalars s [n x 1].
Tensor row_scale(const Tensor& x, const Tensor& s);
/// log(max(x, floor)); the gradient is zero where the floor is active.
Tensor log(const Tensor& x, double floor = 0.0);
Tensor transpose(const Tensor& x);

/// Masked-logit value used before normalisation.
inline constexpr double kMaskedLogit = -1e30;

/// Reverse-mode tape. One tape per example; not thread-safe, but separate
/// tapes share nothing.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Creates a gradient-tracking leaf.
  Tensor leaf(Shape shape, std::vector<double> values);
  Tensor leaf(const Tensor& value);

  std::size_t size() const { return nodes_.size(); }

 private:
  friend Tensor op_apply(OpKind, std::span<const Tensor>, const OpAttrs&);
  friend class Gradients;
  friend Gradients backward(const Tensor& loss);

  struct Node {
    bool is_leaf = true;
    OpKind kind = OpKind::add;
    std::vector<Tensor> inputs;
    OpAttrs attrs;
    Tensor output;
  };

  Tensor record(OpKind kind, std::vector<Tensor> inputs, OpAttrs attrs, Shape shape,
                std::vector<double> values);

  std::vector<Node> nodes_;
};

/// Gradients of a scalar loss, indexed by node id.
class Gradients {
 public:
  /// Gradient w.r.t. a tensor on the same tape; zeros if the loss does not
  /// depend on it.
  Tensor operator[](const Tensor& t) const;
  std::span<const double> raw(NodeId id) const;
  bool has(NodeId id) const { return id < grads_.size() && !grads_[id].empty(); }

 private:
  friend Gradients backward(const Tensor& loss);
  std::vector<std::vector<double>> grads_;
  std::vector<Shape> shapes_;
};

/// Reverse pass from a scalar loss. Each node is visited once, in reverse
/// recording order.
Gradients backward(const Tensor& loss);

}  // namespace sss

#endif  // SSS_TENSOR_HPP
