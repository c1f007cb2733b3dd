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

#ifndef SSS_GCN_HPP
#define SSS_GCN_HPP

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sss/graph.hpp"
#include "sss/params.hpp"
#include "sss/vocab.hpp"

namespace sss {

/// Parameters of one gated graph convolution (one hop). Direction weights
/// and gate vectors are shared across relation kinds; bias tables are keyed
/// by (kind, label, direction).
///
///   W_in, W_out       [m x m]
///   gate_in, gate_out [m x 1]
///   bias[kind][dir]       [labels(kind) x m]
///   gate_bias[kind][dir]  [labels(kind) x 1]
struct GcnLayerParams {
  std::size_t dim = 0;
  ParamId w_in = 0;
  ParamId w_out = 0;
  ParamId gate_in = 0;
  ParamId gate_out = 0;
  std::array<std::array<std::optional<ParamId>, 2>, 3> bias;
  std::array<std::array<std::optional<ParamId>, 2>, 3> gate_bias;

  bool has_kind(RelationKind k) const { return bias[static_cast<std::size_t>(k)][0].has_value(); }
};

/// Multi-graph stack: one GcnLayerParams and one W_self per hop.
struct MgcnParams {
  std::size_t dim = 0;
  std::vector<GcnLayerParams> hops;
  std::vector<ParamId> w_self;
};

/// Declares a k-hop stack over `kinds`. Matrices are Glorot-uniform,
/// biases zero.
MgcnParams declare_mgcn(ParamStore& store, const std::string& prefix, std::size_t dim,
                        std::size_t hops, std::span<const RelationKind> kinds,
                        const LabelVocab& labels, Rng& rng);

/// Neighbourhood views of one relation kind with labels resolved against the
/// model's label vocabulary.
struct KindViews {
  RelationKind kind = RelationKind::dep;
  std::vector<std::vector<ViewEntry>> views;
};

std::vector<KindViews> resolve_views(const LabeledMultiGraph& g,
                                     std::span<const RelationKind> kinds,
                                     const LabelVocab& labels);

/// Scalar gate sigmoid(h_u . gate_dir + gate_bias[kind][label][dir]) for a
/// [1 x m] source embedding.
Tensor edge_gate(Session& s, const Tensor& h_u, Direction dir, RelationKind kind,
                 std::size_t label, const GcnLayerParams& p);

/// Gated convolution over one relation kind with identity activation. Row v
/// of the result is the gated sum of W_dir h_u + b over v's view; isolated
/// nodes get zeros.
Tensor gcn_layer(Session& s, const Tensor& h, const KindViews& views, const GcnLayerParams& p);

/// h <- ReLU(h W_self + sum over kinds of gcn_layer(h)), once per hop.
Tensor mgcn_forward(Session& s, const Tensor& h0, std::span<const KindViews> graphs,
                    const MgcnParams& p);

}  // namespace sss

#endif  // SSS_GCN_HPP
