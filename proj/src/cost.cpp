// Copyright 2026 The tsm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tsm/cost.hpp"

#include "tsm/error.hpp"

namespace tsm {

namespace {

using u64 = std::uint64_t;

u64 axes_size(const Shape& shape, const AxisSet& s) {
  u64 p = 1;
  for (auto a : s) p *= shape[a];
  return p;
}

void check_positive(std::initializer_list<u64> values) {
  for (u64 v : values)
    if (v == 0) fail(ErrorCode::InvalidArgument, "dimensions and ranks must be >= 1");
}

CostReport tucker_cost(const ModelLayout& layout) {
  const Shape& shape = layout.shape;
  if (layout.ranks.size() != shape.size())
    fail(ErrorCode::InvalidArgument, "Tucker layout needs one rank per axis");
  CostReport report;
  std::vector<u64> current(shape.begin(), shape.end());
  for (std::size_t k = 0; k < shape.size(); ++k) {
    const u64 r = layout.ranks[k];
    report.storage_scalars += shape[k] * r;
    u64 others = 1;
    for (std::size_t j = 0; j < shape.size(); ++j)
      if (j != k) others *= current[j];
    report.projection_macs += others * current[k] * r;
    current[k] = r;
  }
  u64 core = 1;
  for (u64 r : current) core *= r;
  report.projection_macs += core;
  return report;
}

// Cost of rebuilding `node`'s basis from leaves and transfers.
u64 rebuild_cost(const ModelLayout& layout, std::size_t node) {
  const auto& tree = *layout.tree;
  const auto& nd = tree.node(node);
  if (nd.is_leaf()) return 0;
  const auto l = static_cast<std::size_t>(nd.left);
  const auto r = static_cast<std::size_t>(nd.right);
  const u64 il = axes_size(layout.shape, tree.node(l).axes);
  const u64 ir = axes_size(layout.shape, tree.node(r).axes);
  const u64 rl = layout.ranks[l], rr = layout.ranks[r];
  return rebuild_cost(layout, l) + rebuild_cost(layout, r) + (il * rl) * (ir * rr) +
         (il * ir) * (rl * rr) * layout.ranks[node];
}

CostReport hierarchical_cost(const ModelLayout& layout, Scheme scheme) {
  const auto& tree = *layout.tree;
  if (layout.ranks.size() != tree.node_count())
    fail(ErrorCode::InvalidArgument, "hierarchical layout needs one rank per node");
  const auto& root = tree.node(DimensionTree::root());
  const auto l = static_cast<std::size_t>(root.left);
  const auto r = static_cast<std::size_t>(root.right);
  const u64 il = axes_size(layout.shape, tree.node(l).axes);
  const u64 ir = axes_size(layout.shape, tree.node(r).axes);
  const u64 rl = layout.ranks[l], rr = layout.ranks[r];

  CostReport report;
  switch (scheme) {
    case Scheme::HtMaterialized:
      report.storage_scalars = il * rl + ir * rr;
      report.projection_macs = rl * il * ir + rl * ir * rr + rl * rr;
      break;
    case Scheme::HtFactored:
      for (std::size_t id = 1; id < tree.node_count(); ++id) {
        const auto& nd = tree.node(id);
        if (nd.is_leaf())
          report.storage_scalars += layout.shape[nd.axes.front()] * layout.ranks[id];
        else
          report.storage_scalars += layout.ranks[static_cast<std::size_t>(nd.left)] *
                                    layout.ranks[static_cast<std::size_t>(nd.right)] *
                                    layout.ranks[id];
      }
      report.projection_macs = rebuild_cost(layout, l) + rebuild_cost(layout, r) +
                               rl * il * ir + rl * ir * rr + rl * rr;
      break;
    case Scheme::TtMaterialized:
      if (!tree.is_linear())
        fail(ErrorCode::InvalidArgument, "tt-materialized needs a linear tree");
      // X U_{n-1} first, then U_{0..n-2}^T; the chain count carries no
      // separate energy term.
      report.storage_scalars = il * rl + ir * rr;
      report.projection_macs = il * ir * rr + rl * il * rr;
      break;
    case Scheme::TuckerModes:
      fail(ErrorCode::InvalidArgument, "tucker-modes does not apply to hierarchical models");
  }
  return report;
}

}  // namespace

ModelLayout layout_of(const SubspaceModel& model) {
  if (const auto* t = std::get_if<TuckerModel>(&model))
    return {t->shape, std::nullopt, t->ranks()};
  const auto& h = std::get<HtModel>(model);
  return {h.shape, h.tree, h.ranks()};
}

CostReport cost_layout(const ModelLayout& layout, Scheme scheme) {
  CostReport report;
  if (!layout.tree) {
    if (scheme != Scheme::TuckerModes)
      fail(ErrorCode::InvalidArgument, to_string(scheme) + " does not apply to Tucker models");
    report = tucker_cost(layout);
  } else {
    report = hierarchical_cost(layout, scheme);
  }
  report.ambient_dimension = 1;
  for (auto d : layout.shape) report.ambient_dimension *= d;
  return report;
}

CostReport cost_general(const SubspaceModel& model, Scheme scheme) {
  return cost_layout(layout_of(model), scheme);
}

FormulaCost cost_formula_tucker(u64 n, u64 r) {
  check_positive({n, r});
  return {4 * n * r, n * n * n * n * r + n * n * n * r * r + n * n * r * r * r +
                         n * r * r * r * r + r * r * r * r};
}

FormulaCost cost_formula_hier1(u64 n, u64 rp) {
  check_positive({n, rp});
  return {2 * n * n * rp, n * n * n * n * rp + n * n * rp * rp + rp * rp};
}

FormulaCost cost_formula_hier2(u64 n, u64 r, u64 rp) {
  check_positive({n, r, rp});
  return {4 * n * r + 2 * r * r * rp, n * n * n * n * rp + n * n * rp * rp + rp * rp +
                                          2 * n * n * r * r + 2 * n * n * r * r * rp};
}

FormulaCost cost_formula_tt(u64 n, u64 r, u64 rp) {
  check_positive({n, r, rp});
  return {n * n * n * rp + n * r, n * n * n * n * r + n * n * n * r * rp};
}

}  // namespace tsm
