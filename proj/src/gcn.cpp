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

#include "sss/gcn.hpp"

#include <stdexcept>

namespace sss {

namespace {

std::size_t kidx(RelationKind k) { return static_cast<std::size_t>(k); }
std::size_t didx(Direction d) { return static_cast<std::size_t>(d); }

const char* dir_name(std::size_t d) { return d == 0 ? "in" : "out"; }

}  // namespace

MgcnParams declare_mgcn(ParamStore& store, const std::string& prefix, std::size_t dim,
                        std::size_t hops, std::span<const RelationKind> kinds,
                        const LabelVocab& labels, Rng& rng) {
  if (hops < 1) throw std::invalid_argument("M-GCN needs at least one hop");
  MgcnParams p;
  p.dim = dim;
  for (std::size_t t = 0; t < hops; ++t) {
    const std::string hp = prefix + ".hop" + std::to_string(t);
    GcnLayerParams layer;
    layer.dim = dim;
    p.w_self.push_back(store.add_glorot(hp + ".W_self", dim, dim, rng));
    layer.w_in = store.add_glorot(hp + ".W_in", dim, dim, rng);
    layer.w_out = store.add_glorot(hp + ".W_out", dim, dim, rng);
    layer.gate_in = store.add_glorot(hp + ".gate_in", dim, 1, rng);
    layer.gate_out = store.add_glorot(hp + ".gate_out", dim, 1, rng);
    for (RelationKind k : kinds) {
      const std::size_t n = labels.size(k);
      for (std::size_t d = 0; d < 2; ++d) {
        const std::string kp = hp + "." + std::string(relation_name(k)) + "." + dir_name(d);
        layer.bias[kidx(k)][d] = store.add_zeros(kp + ".bias", {n, dim});
        layer.gate_bias[kidx(k)][d] = store.add_zeros(kp + ".gate_bias", {n, 1});
      }
    }
    p.hops.push_back(layer);
  }
  return p;
}

std::vector<KindViews> resolve_views(const LabeledMultiGraph& g,
                                     std::span<const RelationKind> kinds,
                                     const LabelVocab& labels) {
  std::vector<KindViews> out;
  for (RelationKind k : kinds) {
    KindViews kv;
    kv.kind = k;
    kv.views = neighborhood_views(g, k);
    const auto& names = g.labels(k);
    std::vector<std::size_t> remap(names.size());
    for (std::size_t i = 0; i < names.size(); ++i) remap[i] = labels.id(k, names[i]);
    for (auto& view : kv.views)
      for (auto& e : view) e.label = remap[e.label];
    out.push_back(std::move(kv));
  }
  return out;
}

Tensor edge_gate(Session& s, const Tensor& h_u, Direction dir, RelationKind kind,
                 std::size_t label, const GcnLayerParams& p) {
  if (h_u.rank() != 2 || h_u.rows() != 1 || h_u.cols() != p.dim)
    throw std::invalid_argument("edge_gate: expected [1 x " + std::to_string(p.dim) +
                                "] embedding, got " + shape_string(h_u.shape()));
  const auto& gb = p.gate_bias[kidx(kind)][didx(dir)];
  if (!gb) throw std::invalid_argument("edge_gate: no parameters for relation kind");
  const Tensor table = s(*gb);
  if (label >= table.rows())
    throw std::invalid_argument("edge_gate: unknown label id " + std::to_string(label));
  const Tensor w = s(dir == Direction::in ? p.gate_in : p.gate_out);
  return sigmoid(add(matmul(h_u, w), gather_rows(table, {label})));
}

Tensor gcn_layer(Session& s, const Tensor& h, const KindViews& kv, const GcnLayerParams& p) {
  if (h.rank() != 2 || h.cols() != p.dim)
    throw std::invalid_argument("gcn_layer: expected [n x " + std::to_string(p.dim) +
                                "] input, got " + shape_string(h.shape()));
  const std::size_t n = h.rows();
  if (kv.views.size() != n)
    throw std::invalid_argument("gcn_layer: views cover " + std::to_string(kv.views.size()) +
                                " nodes, input has " + std::to_string(n));
  if (!p.has_kind(kv.kind))
    throw std::invalid_argument("gcn_layer: no parameters for relation kind " +
                                std::string(relation_name(kv.kind)));

  std::optional<Tensor> out;
  for (Direction dir : {Direction::in, Direction::out}) {
    std::vector<std::size_t> targets, sources, labels;
    for (std::size_t v = 0; v < n; ++v)
      for (const ViewEntry& e : kv.views[v]) {
        if (e.direction != dir) continue;
        if (e.neighbor >= n) throw std::invalid_argument("gcn_layer: neighbour out of range");
        targets.push_back(v);
        sources.push_back(e.neighbor);
        labels.push_back(e.label);
      }
    if (targets.empty()) continue;

    const Tensor bias = s(*p.bias[kidx(kv.kind)][didx(dir)]);
    const Tensor gate_bias = s(*p.gate_bias[kidx(kv.kind)][didx(dir)]);
    for (std::size_t l : labels)
      if (l >= bias.rows()) throw std::invalid_argument("gcn_layer: unknown label id");

    const Tensor transformed = matmul(h, s(dir == Direction::in ? p.w_in : p.w_out));
    const Tensor gate_scores = matmul(h, s(dir == Direction::in ? p.gate_in : p.gate_out));
    const Tensor messages = add(gather_rows(transformed, sources), gather_rows(bias, labels));
    const Tensor gates =
        sigmoid(add(gather_rows(gate_scores, sources), gather_rows(gate_bias, labels)));
    Tensor summed = scatter_rows(row_scale(messages, gates), targets, n);
    out = out ? add(*out, summed) : summed;
  }
  return out ? *out : Tensor::zeros({n, p.dim});
}

Tensor mgcn_forward(Session& s, const Tensor& h0, std::span<const KindViews> graphs,
                    const MgcnParams& p) {
  if (p.hops.empty()) throw std::invalid_argument("mgcn_forward: hop count must be at least 1");
  Tensor h = h0;
  for (std::size_t t = 0; t < p.hops.size(); ++t) {
    Tensor acc = matmul(h, s(p.w_self[t]));
    for (const KindViews& kv : graphs) acc = add(acc, gcn_layer(s, h, kv, p.hops[t]));
    h = relu(acc);
  }
  return h;
}

}  // namespace sss
