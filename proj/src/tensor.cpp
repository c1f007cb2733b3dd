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

#include "sss/tensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace sss {

namespace {

[[noreturn]] void fail(OpKind kind, const std::string& what) {
  throw TensorError(std::string(op_name(kind)) + ": " + what);
}

bool is_matrix(const Tensor& t) { return t.rank() == 2; }

void require_matrix(OpKind kind, const Tensor& t) {
  if (!is_matrix(t)) fail(kind, "expected rank-2 input, got " + shape_string(t.shape()));
}

void require_same(OpKind kind, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape())
    fail(kind, "shape mismatch " + shape_string(a.shape()) + " vs " + shape_string(b.shape()));
}

bool is_bias_row(const Tensor& a, const Tensor& b) {
  return is_matrix(a) && is_matrix(b) && b.rows() == 1 && a.rows() > 1 && a.cols() == b.cols();
}

void check_finite(OpKind kind, const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) fail(kind, "non-finite output");
}

double sigmoid_scalar(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

constexpr std::array<std::string_view, 17> kOpNames = {
    "matmul",      "add",          "sub",       "elemwise_mul", "sigmoid", "tanh",
    "relu",        "softmax_masked", "concat_last_dim", "sum_rows", "scalar_scale",
    "gather_rows", "concat_rows",  "scatter_rows", "row_scale", "log", "transpose"};

struct Forward {
  Shape shape;
  std::vector<double> values;
};

Forward forward(OpKind kind, std::span<const Tensor> in, const OpAttrs& attrs) {
  auto arity = [&](std::size_t n) {
    if (in.size() != n) fail(kind, "expected " + std::to_string(n) + " inputs");
  };
  switch (kind) {
    case OpKind::matmul: {
      arity(2);
      const Tensor& a = in[0];
      const Tensor& b = in[1];
      require_matrix(kind, a);
      require_matrix(kind, b);
      if (a.cols() != b.rows())
        fail(kind, "inner dimensions differ: " + shape_string(a.shape()) + " x " +
                       shape_string(b.shape()));
      const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
      std::vector<double> out(n * m, 0.0);
      const auto av = a.values();
      const auto bv = b.values();
      for (std::size_t i = 0; i < n; ++i) {
        double* orow = out.data() + i * m;
        for (std::size_t p = 0; p < k; ++p) {
          const double s = av[i * k + p];
          if (s == 0.0) continue;
          const double* brow = bv.data() + p * m;
          for (std::size_t j = 0; j < m; ++j) orow[j] += s * brow[j];
        }
      }
      return {{n, m}, std::move(out)};
    }
    case OpKind::add:
    case OpKind::sub: {
      arity(2);
      const Tensor& a = in[0];
      const Tensor& b = in[1];
      const double sign = kind == OpKind::add ? 1.0 : -1.0;
      std::vector<double> out(a.values().begin(), a.values().end());
      if (a.shape() == b.shape()) {
        const auto bv = b.values();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += sign * bv[i];
      } else if (is_bias_row(a, b)) {
        const auto bv = b.values();
        const std::size_t m = a.cols();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += sign * bv[i % m];
      } else {
        require_same(kind, a, b);
      }
      return {a.shape(), std::move(out)};
    }
    case OpKind::elemwise_mul: {
      arity(2);
      require_same(kind, in[0], in[1]);
      std::vector<double> out(in[0].size());
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = in[0][i] * in[1][i];
      return {in[0].shape(), std::move(out)};
    }
    case OpKind::sigmoid:
    case OpKind::tanh:
    case OpKind::relu: {
      arity(1);
      std::vector<double> out(in[0].size());
      for (std::size_t i = 0; i < out.size(); ++i) {
        const double x = in[0][i];
        out[i] = kind == OpKind::sigmoid ? sigmoid_scalar(x)
                 : kind == OpKind::tanh  ? std::tanh(x)
                                         : (x > 0.0 ? x : 0.0);
      }
      return {in[0].shape(), std::move(out)};
    }
    case OpKind::softmax_masked: {
      if (in.empty() || in.size() > 2) fail(kind, "expected logits and optional mask");
      const Tensor& x = in[0];
      if (in.size() == 2) require_same(kind, x, in[1]);
      const std::size_t m = x.cols();
      const std::size_t rows = x.size() / std::max<std::size_t>(m, 1);
      std::vector<double> out(x.size(), 0.0);
      for (std::size_t r = 0; r < rows; ++r) {
        double mx = kMaskedLogit;
        bool any = false;
        for (std::size_t j = 0; j < m; ++j) {
          const bool keep = in.size() == 1 || in[1][r * m + j] != 0.0;
          if (!keep) continue;
          any = true;
          mx = std::max(mx, x[r * m + j]);
        }
        if (!any) fail(kind, "fully masked row");
        double z = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
          const bool keep = in.size() == 1 || in[1][r * m + j] != 0.0;
          const double logit = keep ? x[r * m + j] : kMaskedLogit;
          const double e = std::exp(logit - mx);
          out[r * m + j] = e;
          z += e;
        }
        for (std::size_t j = 0; j < m; ++j) {
          const bool keep = in.size() == 1 || in[1][r * m + j] != 0.0;
          out[r * m + j] = keep ? out[r * m + j] / z : 0.0;
        }
      }
      return {x.shape(), std::move(out)};
    }
    case OpKind::concat_last_dim: {
      if (in.empty()) fail(kind, "no inputs");
      const std::size_t rows = in[0].rows();
      std::size_t total = 0;
      for (const auto& t : in) {
        if (t.rank() != in[0].rank() || t.rows() != rows)
          fail(kind, "row mismatch " + shape_string(t.shape()));
        total += t.cols();
      }
      std::vector<double> out(rows * total);
      std::size_t offset = 0;
      for (const auto& t : in) {
        const std::size_t c = t.cols();
        for (std::size_t r = 0; r < rows; ++r)
          std::copy_n(t.values().data() + r * c, c, out.data() + r * total + offset);
        offset += c;
      }
      Shape shape = in[0].shape();
      shape.back() = total;
      return {shape, std::move(out)};
    }
    case OpKind::concat_rows: {
      if (in.empty()) fail(kind, "no inputs");
      const std::size_t cols = in[0].cols();
      std::size_t rows = 0;
      std::vector<double> out;
      for (const auto& t : in) {
        require_matrix(kind, t);
        if (t.cols() != cols) fail(kind, "column mismatch " + shape_string(t.shape()));
        rows += t.rows();
        out.insert(out.end(), t.values().begin(), t.values().end());
      }
      return {{rows, cols}, std::move(out)};
    }
    case OpKind::sum_rows: {
      arity(1);
      const Tensor& x = in[0];
      if (x.rank() == 1) {
        double s = 0.0;
        for (double v : x.values()) s += v;
        return {{1}, {s}};
      }
      require_matrix(kind, x);
      std::vector<double> out(x.cols(), 0.0);
      for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c) out[c] += x.at(r, c);
      return {{1, x.cols()}, std::move(out)};
    }
    case OpKind::scalar_scale: {
      arity(1);
      std::vector<double> out(in[0].size());
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = attrs.scalar * in[0][i];
      return {in[0].shape(), std::move(out)};
    }
    case OpKind::gather_rows: {
      arity(1);
      const Tensor& x = in[0];
      require_matrix(kind, x);
      const std::size_t m = x.cols();
      std::vector<double> out(attrs.indices.size() * m);
      for (std::size_t e = 0; e < attrs.indices.size(); ++e) {
        const std::size_t r = attrs.indices[e];
        if (r >= x.rows()) fail(kind, "row index " + std::to_string(r) + " out of range");
        std::copy_n(x.values().data() + r * m, m, out.data() + e * m);
      }
      return {{attrs.indices.size(), m}, std::move(out)};
    }
    case OpKind::scatter_rows: {
      arity(1);
      const Tensor& x = in[0];
      require_matrix(kind, x);
      if (attrs.indices.size() != x.rows()) fail(kind, "one index per input row required");
      if (attrs.count == 0) fail(kind, "output must have rows");
      const std::size_t m = x.cols();
      std::vector<double> out(attrs.count * m, 0.0);
      for (std::size_t e = 0; e < attrs.indices.size(); ++e) {
        const std::size_t r = attrs.indices[e];
        if (r >= attrs.count) fail(kind, "row index " + std::to_string(r) + " out of range");
        for (std::size_t c = 0; c < m; ++c) out[r * m + c] += x.at(e, c);
      }
      return {{attrs.count, m}, std::move(out)};
    }
    case OpKind::row_scale: {
      arity(2);
      const Tensor& x = in[0];
      const Tensor& s = in[1];
      require_matrix(kind, x);
      require_matrix(kind, s);
      if (s.cols() != 1 || s.rows() != x.rows())
        fail(kind, "scale must be [" + std::to_string(x.rows()) + " x 1], got " +
                       shape_string(s.shape()));
      std::vector<double> out(x.size());
      for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c) out[r * x.cols() + c] = x.at(r, c) * s[r];
      return {x.shape(), std::move(out)};
    }
    case OpKind::log: {
      arity(1);
      std::vector<double> out(in[0].size());
      for (std::size_t i = 0; i < out.size(); ++i) {
        const double x = std::max(in[0][i], attrs.scalar);
        if (!(x > 0.0)) fail(kind, "non-positive input");
        out[i] = std::log(x);
      }
      return {in[0].shape(), std::move(out)};
    }
    case OpKind::transpose: {
      arity(1);
      const Tensor& x = in[0];
      require_matrix(kind, x);
      std::vector<double> out(x.size());
      for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t c = 0; c < x.cols(); ++c) out[c * x.rows() + r] = x.at(r, c);
      return {{x.cols(), x.rows()}, std::move(out)};
    }
  }
  fail(kind, "unknown kind");
}

void accumulate(std::vector<double>& dst, std::size_t n) {
  if (dst.empty()) dst.assign(n, 0.0);
}

}  // namespace

std::size_t numel(const Shape& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

std::string shape_string(const Shape& shape) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) os << (i ? " x " : "") << shape[i];
  os << ']';
  return os.str();
}

Tensor::Tensor(Shape shape, std::vector<double> values) : shape_(std::move(shape)) {
  if (shape_.empty()) throw TensorError("tensor shape must have at least one dimension");
  for (std::size_t d : shape_)
    if (d == 0) throw TensorError("tensor dimensions must be positive: " + shape_string(shape_));
  if (values.size() != numel(shape_))
    throw TensorError("value count " + std::to_string(values.size()) + " does not match shape " +
                      shape_string(shape_));
  data_ = std::make_shared<const std::vector<double>>(std::move(values));
}

Tensor Tensor::zeros(Shape shape) { return filled(std::move(shape), 0.0); }

Tensor Tensor::filled(Shape shape, double value) {
  const std::size_t n = numel(shape);
  return Tensor(std::move(shape), std::vector<double>(n, value));
}

std::span<const double> Tensor::values() const {
  if (!data_) return {};
  return {data_->data(), data_->size()};
}

double Tensor::item() const {
  if (size() != 1) throw TensorError("item() on tensor of shape " + shape_string(shape_));
  return (*data_)[0];
}

Tensor Tensor::detached() const {
  Tensor t;
  t.shape_ = shape_;
  t.data_ = data_;
  return t;
}

std::string_view op_name(OpKind kind) { return kOpNames[static_cast<std::size_t>(kind)]; }

OpKind op_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kOpNames.size(); ++i)
    if (kOpNames[i] == name) return static_cast<OpKind>(i);
  throw TensorError("unknown op kind '" + std::string(name) + "'");
}

Tensor Tape::leaf(Shape shape, std::vector<double> values) {
  Tensor t(std::move(shape), std::move(values));
  t.tape_ = this;
  t.node_ = nodes_.size();
  Node node;
  node.output = t.detached();
  nodes_.push_back(std::move(node));
  return t;
}

Tensor Tape::leaf(const Tensor& value) {
  Tensor t = value.detached();
  t.tape_ = this;
  t.node_ = nodes_.size();
  Node node;
  node.output = value.detached();
  nodes_.push_back(std::move(node));
  return t;
}

Tensor Tape::record(OpKind kind, std::vector<Tensor> inputs, OpAttrs attrs, Shape shape,
                    std::vector<double> values) {
  Tensor t(std::move(shape), std::move(values));
  t.tape_ = this;
  t.node_ = nodes_.size();
  Node node;
  node.is_leaf = false;
  node.kind = kind;
  node.inputs = std::move(inputs);
  node.attrs = std::move(attrs);
  node.output = t.detached();
  nodes_.push_back(std::move(node));
  return t;
}

Tensor op_apply(OpKind kind, std::span<const Tensor> inputs, const OpAttrs& attrs) {
  if (static_cast<std::size_t>(kind) >= kOpNames.size()) throw TensorError("unknown op kind");
  for (const auto& t : inputs)
    if (t.size() == 0) fail(kind, "empty input tensor");
  Forward out = forward(kind, inputs, attrs);
  check_finite(kind, out.values);

  Tape* tape = nullptr;
  for (const auto& t : inputs) {
    if (!t.requires_grad()) continue;
    if (tape && tape != t.tape()) fail(kind, "inputs recorded on different tapes");
    tape = t.tape();
  }
  if (!tape) return Tensor(std::move(out.shape), std::move(out.values));
  return tape->record(kind, std::vector<Tensor>(inputs.begin(), inputs.end()), attrs,
                      std::move(out.shape), std::move(out.values));
}

Tensor matmul(const Tensor& a, const Tensor& b) {
  const std::array in{a, b};
  return op_apply(OpKind::matmul, in);
}
Tensor add(const Tensor& a, const Tensor& b) {
  const std::array in{a, b};
  return op_apply(OpKind::add, in);
}
Tensor sub(const Tensor& a, const Tensor& b) {
  const std::array in{a, b};
  return op_apply(OpKind::sub, in);
}
Tensor elemwise_mul(const Tensor& a, const Tensor& b) {
  const std::array in{a, b};
  return op_apply(OpKind::elemwise_mul, in);
}
Tensor sigmoid(const Tensor& x) { return op_apply(OpKind::sigmoid, std::span(&x, 1)); }
Tensor tanh(const Tensor& x) { return op_apply(OpKind::tanh, std::span(&x, 1)); }
Tensor relu(const Tensor& x) { return op_apply(OpKind::relu, std::span(&x, 1)); }
Tensor softmax_masked(const Tensor& logits, const Tensor& mask) {
  const std::array in{logits, mask};
  return op_apply(OpKind::softmax_masked, in);
}
Tensor softmax(const Tensor& logits) {
  return op_apply(OpKind::softmax_masked, std::span(&logits, 1));
}
Tensor concat_last_dim(std::span<const Tensor> parts) {
  return op_apply(OpKind::concat_last_dim, parts);
}
Tensor concat_last_dim(const Tensor& a, const Tensor& b) {
  const std::array in{a, b};
  return op_apply(OpKind::concat_last_dim, in);
}
Tensor concat_rows(std::span<const Tensor> parts) { return op_apply(OpKind::concat_rows, parts); }
Tensor sum_rows(const Tensor& x) { return op_apply(OpKind::sum_rows, std::span(&x, 1)); }
Tensor scalar_scale(const Tensor& x, double factor) {
  OpAttrs attrs;
  attrs.scalar = factor;
  return op_apply(OpKind::scalar_scale, std::span(&x, 1), attrs);
}
Tensor gather_rows(const Tensor& x, std::vector<std::size_t> rows) {
  OpAttrs attrs;
  attrs.indices = std::move(rows);
  return op_apply(OpKind::gather_rows, std::span(&x, 1), attrs);
}
Tensor scatter_rows(const Tensor& x, std::vector<std::size_t> rows, std::size_t count) {
  OpAttrs attrs;
  attrs.indices = std::move(rows);
  attrs.count = count;
  return op_apply(OpKind::scatter_rows, std::span(&x, 1), attrs);
}
Tensor row_scale(const Tensor& x, const Tensor& s) {
  const std::array in{x, s};
  return op_apply(OpKind::row_scale, in);
}
Tensor log(const Tensor& x, double floor) {
  OpAttrs attrs;
  attrs.scalar = floor;
  return op_apply(OpKind::log, std::span(&x, 1), attrs);
}
Tensor transpose(const Tensor& x) { return op_apply(OpKind::transpose, std::span(&x, 1)); }

Tensor Gradients::operator[](const Tensor& t) const {
  if (!t.node_id() || !has(*t.node_id())) return Tensor::zeros(t.shape());
  const NodeId id = *t.node_id();
  return Tensor(shapes_[id], grads_[id]);
}

std::span<const double> Gradients::raw(NodeId id) const {
  if (!has(id)) return {};
  return grads_[id];
}

Gradients backward(const Tensor& loss) {
  if (loss.size() != 1)
    throw TensorError("backward: loss must be scalar, got " + shape_string(loss.shape()));
  if (!loss.requires_grad() || !loss.tape()) throw TensorError("backward: loss is not on a tape");

  const Tape& tape = *loss.tape();
  const NodeId root = *loss.node_id();
  Gradients g;
  g.grads_.resize(root + 1);
  g.shapes_.resize(root + 1);
  for (NodeId id = 0; id <= root; ++id) g.shapes_[id] = tape.nodes_[id].output.shape();
  g.grads_[root] = {1.0};

  for (NodeId id = root + 1; id-- > 0;) {
    const auto& node = tape.nodes_[id];
    if (node.is_leaf || g.grads_[id].empty()) continue;
    const std::vector<double>& gy = g.grads_[id];
    const Tensor& y = node.output;
    const auto& in = node.inputs;

    auto target = [&](std::size_t k) -> std::vector<double>* {
      if (!in[k].requires_grad()) return nullptr;
      auto& dst = g.grads_[*in[k].node_id()];
      accumulate(dst, in[k].size());
      return &dst;
    };

    switch (node.kind) {
      case OpKind::matmul: {
        const Tensor& a = in[0];
        const Tensor& b = in[1];
        const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
        if (auto* da = target(0)) {
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t p = 0; p < k; ++p) {
              double s = 0.0;
              for (std::size_t j = 0; j < m; ++j) s += gy[i * m + j] * b[p * m + j];
              (*da)[i * k + p] += s;
            }
        }
        if (auto* db = target(1)) {
          for (std::size_t i = 0; i < n; ++i)
            for (std::size_t p = 0; p < k; ++p) {
              const double s = a[i * k + p];
              if (s == 0.0) continue;
              for (std::size_t j = 0; j < m; ++j) (*db)[p * m + j] += s * gy[i * m + j];
            }
        }
        break;
      }
      case OpKind::add:
      case OpKind::sub: {
        const double sign = node.kind == OpKind::add ? 1.0 : -1.0;
        if (auto* da = target(0))
          for (std::size_t i = 0; i < gy.size(); ++i) (*da)[i] += gy[i];
        if (auto* db = target(1)) {
          const std::size_t m = in[1].size();
          for (std::size_t i = 0; i < gy.size(); ++i) (*db)[i % m] += sign * gy[i];
        }
        break;
      }
      case OpKind::elemwise_mul: {
        if (auto* da = target(0))
          for (std::size_t i = 0; i < gy.size(); ++i) (*da)[i] += gy[i] * in[1][i];
        if (auto* db = target(1))
          for (std::size_t i = 0; i < gy.size(); ++i) (*db)[i] += gy[i] * in[0][i];
        break;
      }
      case OpKind::sigmoid:
        if (auto* dx = target(0))
          for (std::size_t i = 0; i < gy.size(); ++i) (*dx)[i] += gy[i] * y[i] * (1.0 - y[i]);
        break;
      case OpKind::tanh:
        if (auto* dx = target(0))
          for (std::size_t i = 0; i < gy.size(); ++i) (*dx)[i] += gy[i] * (1.0 - y[i] * y[i]);
        break;
      case OpKind::relu:
        if (auto* dx = target(0))
          for (std::size_t i = 0; i < gy.size(); ++i)
            if (in[0][i] > 0.0) (*dx)[i] += gy[i];
        break;
      case OpKind::softmax_masked:
        if (auto* dx = target(0)) {
          const std::size_t m = y.cols();
          for (std::size_t r = 0; r < y.size() / m; ++r) {
            double dot = 0.0;
            for (std::size_t j = 0; j < m; ++j) dot += y[r * m + j] * gy[r * m + j];
            for (std::size_t j = 0; j < m; ++j)
              (*dx)[r * m + j] += y[r * m + j] * (gy[r * m + j] - dot);
          }
        }
        break;
      case OpKind::concat_last_dim: {
        const std::size_t total = y.cols();
        const std::size_t rows = y.size() / total;
        std::size_t offset = 0;
        for (std::size_t k = 0; k < in.size(); ++k) {
          const std::size_t c = in[k].cols();
          if (auto* dx = target(k))
            for (std::size_t r = 0; r < rows; ++r)
              for (std::size_t j = 0; j < c; ++j) (*dx)[r * c + j] += gy[r * total + offset + j];
          offset += c;
        }
        break;
      }
      case OpKind::concat_rows: {
        std::size_t offset = 0;
        for (std::size_t k = 0; k < in.size(); ++k) {
          const std::size_t n = in[k].size();
          if (auto* dx = target(k))
            for (std::size_t i = 0; i < n; ++i) (*dx)[i] += gy[offset + i];
          offset += n;
        }
        break;
      }
      case OpKind::sum_rows:
        if (auto* dx = target(0)) {
          const std::size_t m = gy.size();
          for (std::size_t i = 0; i < dx->size(); ++i) (*dx)[i] += gy[i % m];
        }
        break;
      case OpKind::scalar_scale:
        if (auto* dx = target(0))
          for (std::size_t i = 0; i < gy.size(); ++i) (*dx)[i] += node.attrs.scalar * gy[i];
        break;
      case OpKind::gather_rows:
        if (auto* dx = target(0)) {
          const std::size_t m = y.cols();
          for (std::size_t e = 0; e < node.attrs.indices.size(); ++e) {
            const std::size_t r = node.attrs.indices[e];
            for (std::size_t c = 0; c < m; ++c) (*dx)[r * m + c] += gy[e * m + c];
          }
        }
        break;
      case OpKind::scatter_rows:
        if (auto* dx = target(0)) {
          const std::size_t m = y.cols();
          for (std::size_t e = 0; e < node.attrs.indices.size(); ++e) {
            const std::size_t r = node.attrs.indices[e];
            for (std::size_t c = 0; c < m; ++c) (*dx)[e * m + c] += gy[r * m + c];
          }
        }
        break;
      case OpKind::row_scale: {
        const Tensor& x = in[0];
        const Tensor& s = in[1];
        const std::size_t m = x.cols();
        if (auto* dx = target(0))
          for (std::size_t i = 0; i < gy.size(); ++i) (*dx)[i] += gy[i] * s[i / m];
        if (auto* ds = target(1))
          for (std::size_t i = 0; i < gy.size(); ++i) (*ds)[i / m] += gy[i] * x[i];
        break;
      }
      case OpKind::log:
        if (auto* dx = target(0))
          for (std::size_t i = 0; i < gy.size(); ++i)
            if (in[0][i] > node.attrs.scalar) (*dx)[i] += gy[i] / in[0][i];
        break;
      case OpKind::transpose:
        if (auto* dx = target(0)) {
          const std::size_t rows = in[0].rows(), cols = in[0].cols();
          for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) (*dx)[r * cols + c] += gy[c * rows + r];
        }
        break;
    }
  }
  return g;
}

}  // namespace sss
