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

#include "tsm/models.hpp"

#include <cmath>

#include "tsm/error.hpp"
#include "tsm/linalg.hpp"

namespace tsm {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstRowMap = Eigen::Map<const RowMatrix>;

Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

std::size_t axes_size(const Shape& shape, const AxisSet& s) {
  std::size_t p = 1;
  for (auto a : s) p *= shape[a];
  return p;
}

const Shape& check_samples(std::span<const DenseTensor> samples) {
  if (samples.empty()) fail(ErrorCode::InvalidArgument, "no training samples");
  const Shape& shape = samples.front().shape();
  for (const auto& s : samples)
    if (s.shape() != shape)
      fail(ErrorCode::ShapeMismatch, "training samples have different shapes (" +
                                         shape_to_string(shape) + " vs " +
                                         shape_to_string(s.shape()) + ")");
  return shape;
}

// Samples stacked along a trailing axis of length N.
DenseTensor stack(std::span<const DenseTensor> samples) {
  Shape shape = samples.front().shape();
  const std::size_t n = samples.size();
  const std::size_t per = samples.front().size();
  std::vector<double> data(per * n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto src = samples[k].data();
    for (std::size_t i = 0; i < per; ++i) data[i * n + k] = src[i];
  }
  shape.push_back(n);
  return DenseTensor(std::move(shape), std::move(data));
}

void check_input(const Shape& model, const DenseTensor& x) {
  if (x.shape() != model)
    fail(ErrorCode::ShapeMismatch, "input shape " + shape_to_string(x.shape()) +
                                       " does not match model shape " +
                                       shape_to_string(model));
}

struct RootChildren {
  std::size_t left;
  std::size_t right;
};

RootChildren root_children(const DimensionTree& tree) {
  const auto& root = tree.node(DimensionTree::root());
  return {static_cast<std::size_t>(root.left), static_cast<std::size_t>(root.right)};
}

Matrix two_sided(const Matrix& ul, const DenseTensor& x, const AxisSet& rows,
                 const Matrix& ur) {
  const Matrix xm = unfold(x, rows);
  const Matrix left = ul.transpose() * xm;
  return left * ur;
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::Tucker: return "tucker";
    case Family::HierarchicalTucker: return "ht";
    case Family::TensorTrain: return "tt";
  }
  return "?";
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::TuckerModes: return "tucker-modes";
    case Scheme::HtMaterialized: return "ht-materialized";
    case Scheme::HtFactored: return "ht-factored";
    case Scheme::TtMaterialized: return "tt-materialized";
  }
  return "?";
}

Family family_from_string(const std::string& s) {
  if (s == "tucker") return Family::Tucker;
  if (s == "ht" || s == "hierarchical-tucker") return Family::HierarchicalTucker;
  if (s == "tt" || s == "tensor-train") return Family::TensorTrain;
  fail(ErrorCode::InvalidArgument, "unknown model family '" + s + "'");
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "tucker-modes") return Scheme::TuckerModes;
  if (s == "ht-materialized" || s == "hier1") return Scheme::HtMaterialized;
  if (s == "ht-factored" || s == "hier2") return Scheme::HtFactored;
  if (s == "tt-materialized") return Scheme::TtMaterialized;
  fail(ErrorCode::InvalidArgument, "unknown projection scheme '" + s + "'");
}

bool scheme_supports(Family f, Scheme s) {
  switch (f) {
    case Family::Tucker: return s == Scheme::TuckerModes;
    case Family::HierarchicalTucker:
      return s == Scheme::HtMaterialized || s == Scheme::HtFactored;
    case Family::TensorTrain: return s != Scheme::TuckerModes;
  }
  return false;
}

std::vector<std::size_t> TuckerModel::ranks() const {
  std::vector<std::size_t> r;
  for (const auto& u : factors) r.push_back(static_cast<std::size_t>(u.cols()));
  return r;
}

std::vector<std::size_t> HtModel::ranks() const {
  std::vector<std::size_t> r;
  for (const auto& b : bases) r.push_back(static_cast<std::size_t>(b.cols()));
  return r;
}

const Shape& model_shape(const SubspaceModel& m) {
  return std::visit([](const auto& v) -> const Shape& { return v.shape; }, m);
}

std::size_t full_rank(const Shape& shape, const AxisSet& s, std::size_t sample_count) {
  const std::size_t inside = axes_size(shape, s);
  const std::size_t outside = axes_size(shape, s.complement(shape.size()));
  return std::min(inside, sample_count * outside);
}

std::size_t fraction_rank(double fraction, std::size_t full) {
  if (!(fraction > 0.0) || fraction > 1.0)
    fail(ErrorCode::InvalidArgument, "rank fraction must lie in (0, 1]");
  const auto r = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(full)));
  return std::max<std::size_t>(1, r);
}

ResolvedRanks resolve_tucker_ranks(const Shape& shape, std::size_t sample_count,
                                   double fraction, RankPolicy) {
  ResolvedRanks out;
  for (std::size_t i = 0; i < shape.size(); ++i)
    out.ranks.push_back(fraction_rank(fraction, full_rank(shape, AxisSet{i}, sample_count)));
  return out;
}

ResolvedRanks resolve_tree_ranks(const DimensionTree& tree, const Shape& shape,
                                 std::size_t sample_count, double leaf_fraction,
                                 double internal_fraction, RankPolicy policy) {
  if (tree.order() != shape.size())
    fail(ErrorCode::ShapeMismatch, "tree order does not match tensor order");
  ResolvedRanks out;
  out.ranks.assign(tree.node_count(), 0);
  for (std::size_t id : tree.leaves_to_root()) {
    if (tree.is_root(id)) continue;
    const auto& nd = tree.node(id);
    const std::size_t full = full_rank(shape, nd.axes, sample_count);
    std::size_t r = fraction_rank(nd.is_leaf() ? leaf_fraction : internal_fraction, full);
    std::size_t ceiling = full;
    if (!nd.is_leaf())
      ceiling = std::min(ceiling, out.ranks[static_cast<std::size_t>(nd.left)] *
                                      out.ranks[static_cast<std::size_t>(nd.right)]);
    if (r > ceiling) {
      if (policy == RankPolicy::Strict)
        fail(ErrorCode::RankInfeasible, "rank " + std::to_string(r) + " at node " +
                                            nd.axes.to_string() + " exceeds " +
                                            std::to_string(ceiling));
      r = ceiling;
      out.clamped = true;
    }
    out.ranks[id] = r;
  }
  return out;
}

ResolvedRanks clamp_tucker_ranks(const Shape& shape, std::size_t sample_count,
                                 std::span<const std::size_t> ranks) {
  if (ranks.size() != shape.size())
    fail(ErrorCode::InvalidArgument, "need one Tucker rank per axis");
  ResolvedRanks out{{ranks.begin(), ranks.end()}, false};
  for (std::size_t i = 0; i < shape.size(); ++i) {
    const std::size_t ceiling = full_rank(shape, AxisSet{i}, sample_count);
    if (out.ranks[i] > ceiling) {
      out.ranks[i] = ceiling;
      out.clamped = true;
    }
  }
  return out;
}

ResolvedRanks clamp_tree_ranks(const DimensionTree& tree, const Shape& shape,
                               std::size_t sample_count, std::span<const std::size_t> ranks) {
  if (ranks.size() != tree.node_count())
    fail(ErrorCode::InvalidArgument, "need one rank per tree node");
  ResolvedRanks out{{ranks.begin(), ranks.end()}, false};
  for (std::size_t id : tree.leaves_to_root()) {
    if (tree.is_root(id)) continue;
    const auto& nd = tree.node(id);
    std::size_t ceiling = full_rank(shape, nd.axes, sample_count);
    if (!nd.is_leaf())
      ceiling = std::min(ceiling, out.ranks[static_cast<std::size_t>(nd.left)] *
                                      out.ranks[static_cast<std::size_t>(nd.right)]);
    if (out.ranks[id] > ceiling) {
      out.ranks[id] = ceiling;
      out.clamped = true;
    }
  }
  return out;
}

void validate_tucker_ranks(const Shape& shape, std::size_t sample_count,
                           std::span<const std::size_t> ranks) {
  if (ranks.size() != shape.size())
    fail(ErrorCode::InvalidArgument, "need one Tucker rank per axis");
  for (std::size_t i = 0; i < shape.size(); ++i) {
    const std::size_t ceiling = full_rank(shape, AxisSet{i}, sample_count);
    if (ranks[i] < 1 || ranks[i] > ceiling)
      fail(ErrorCode::RankInfeasible, "Tucker rank " + std::to_string(ranks[i]) +
                                          " on axis " + std::to_string(i) +
                                          " outside [1, " + std::to_string(ceiling) + "]");
  }
}

void validate_tree_ranks(const DimensionTree& tree, const Shape& shape,
                         std::size_t sample_count, std::span<const std::size_t> ranks) {
  if (tree.order() != shape.size())
    fail(ErrorCode::ShapeMismatch, "tree order does not match tensor order");
  if (ranks.size() != tree.node_count())
    fail(ErrorCode::InvalidArgument, "need one rank per tree node");
  for (std::size_t id = 1; id < tree.node_count(); ++id) {
    const auto& nd = tree.node(id);
    std::size_t ceiling = full_rank(shape, nd.axes, sample_count);
    if (!nd.is_leaf())
      ceiling = std::min(ceiling, ranks[static_cast<std::size_t>(nd.left)] *
                                      ranks[static_cast<std::size_t>(nd.right)]);
    if (ranks[id] < 1 || ranks[id] > ceiling)
      fail(ErrorCode::RankInfeasible, "rank " + std::to_string(ranks[id]) + " at node " +
                                          nd.axes.to_string() + " outside [1, " +
                                          std::to_string(ceiling) + "]");
  }
}

TuckerModel learn_tucker(std::span<const DenseTensor> samples,
                         std::span<const std::size_t> ranks) {
  const Shape& shape = check_samples(samples);
  validate_tucker_ranks(shape, samples.size(), ranks);
  const DenseTensor stacked = stack(samples);
  TuckerModel model{shape, {}};
  for (std::size_t i = 0; i < shape.size(); ++i)
    model.factors.push_back(leading_left_singular_vectors(unfold(stacked, AxisSet{i}), ranks[i]).u);
  return model;
}

Matrix kron_apply(const Matrix& ul, const Matrix& ur, const Matrix& b) {
  if (b.rows() != ul.cols() * ur.cols())
    fail(ErrorCode::ShapeMismatch, "transfer matrix rows do not match child ranks");
  Matrix out(ul.rows() * ur.rows(), b.cols());
  RowMatrix block;
  for (Eigen::Index k = 0; k < b.cols(); ++k) {
    ConstRowMap g(b.col(k).data(), ul.cols(), ur.cols());
    block.noalias() = ul * g * ur.transpose();
    out.col(k) = Eigen::Map<const Vector>(block.data(), block.size());
  }
  return out;
}

Matrix kron_transpose_apply(const Matrix& ul, const Matrix& ur, const Matrix& x) {
  if (x.rows() != ul.rows() * ur.rows())
    fail(ErrorCode::ShapeMismatch, "unfolding rows do not match child bases");
  Matrix out(ul.cols() * ur.cols(), x.cols());
  RowMatrix block;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    ConstRowMap m(x.col(j).data(), ul.rows(), ur.rows());
    block.noalias() = ul.transpose() * m * ur;
    out.col(j) = Eigen::Map<const Vector>(block.data(), block.size());
  }
  return out;
}

HtModel learn_hierarchical(std::span<const DenseTensor> samples, const DimensionTree& tree,
                           std::span<const std::size_t> ranks) {
  const Shape& shape = check_samples(samples);
  validate_tree_ranks(tree, shape, samples.size(), ranks);
  const DenseTensor stacked = stack(samples);
  HtModel model{shape, tree, std::vector<Matrix>(tree.node_count()),
                std::vector<Matrix>(tree.node_count())};
  for (std::size_t id : tree.leaves_to_root()) {
    if (tree.is_root(id)) continue;
    const auto& nd = tree.node(id);
    const Matrix xs = unfold(stacked, nd.axes);
    if (nd.is_leaf()) {
      model.bases[id] = leading_left_singular_vectors(xs, ranks[id]).u;
      continue;
    }
    const Matrix& ul = model.bases[static_cast<std::size_t>(nd.left)];
    const Matrix& ur = model.bases[static_cast<std::size_t>(nd.right)];
    // Left singular vectors of (Ul (x) Ur)(Ul (x) Ur)^T X_s are (Ul (x) Ur)
    // times those of the coefficient matrix (Ul (x) Ur)^T X_s.
    const Matrix coefficients = kron_transpose_apply(ul, ur, xs);
    Matrix transfer = leading_left_singular_vectors(coefficients, ranks[id]).u;
    Matrix basis = kron_apply(ul, ur, transfer);
    fix_column_signs(basis, &transfer);
    model.bases[id] = std::move(basis);
    model.transfers[id] = std::move(transfer);
  }
  return model;
}

Matrix factored_basis(const HtModel& model, std::size_t node) {
  const auto& tree = model.tree;
  if (tree.is_root(node)) fail(ErrorCode::InvalidArgument, "the root has no basis");
  const auto& nd = tree.node(node);
  if (nd.is_leaf()) return model.bases.at(node);
  const Matrix product = kron(factored_basis(model, static_cast<std::size_t>(nd.left)),
                              factored_basis(model, static_cast<std::size_t>(nd.right)));
  return product * model.transfers.at(node);
}

Matrix project_ht_materialized(const HtModel& model, const DenseTensor& x) {
  check_input(model.shape, x);
  const auto [l, r] = root_children(model.tree);
  return two_sided(model.bases[l], x, model.tree.node(l).axes, model.bases[r]);
}

Matrix project_ht_factored(const HtModel& model, const DenseTensor& x) {
  check_input(model.shape, x);
  const auto [l, r] = root_children(model.tree);
  const Matrix ul = factored_basis(model, l);
  const Matrix ur = factored_basis(model, r);
  return two_sided(ul, x, model.tree.node(l).axes, ur);
}

Matrix project_tt(const HtModel& model, const DenseTensor& x) {
  if (!model.is_tensor_train())
    fail(ErrorCode::InvalidArgument, "tensor-train projection needs a linear tree");
  check_input(model.shape, x);
  const auto [l, r] = root_children(model.tree);
  const Matrix xm = unfold(x, model.tree.node(l).axes);
  const Matrix right = xm * model.bases[r];
  return model.bases[l].transpose() * right;
}

DenseTensor mode_product(const DenseTensor& t, std::size_t axis, const Matrix& u,
                         bool transpose) {
  if (axis >= t.order()) fail(ErrorCode::InvalidArgument, "mode product axis out of range");
  const Eigen::Index in = transpose ? u.rows() : u.cols();
  const Eigen::Index out_dim = transpose ? u.cols() : u.rows();
  if (static_cast<std::size_t>(in) != t.dim(axis))
    fail(ErrorCode::ShapeMismatch, "factor does not match tensor axis " + std::to_string(axis));
  std::size_t outer = 1, inner = 1;
  for (std::size_t a = 0; a < axis; ++a) outer *= t.dim(a);
  for (std::size_t a = axis + 1; a < t.order(); ++a) inner *= t.dim(a);
  Shape shape = t.shape();
  shape[axis] = static_cast<std::size_t>(out_dim);
  DenseTensor result(shape);
  auto dst = result.mutable_data();
  const auto src = t.data();
  const Matrix op = transpose ? Matrix(u.transpose()) : u;
  for (std::size_t p = 0; p < outer; ++p) {
    ConstRowMap slice(src.data() + p * t.dim(axis) * inner, in, idx(inner));
    Eigen::Map<RowMatrix> target(dst.data() + p * shape[axis] * inner, out_dim, idx(inner));
    target.noalias() = op * slice;
  }
  return result;
}

DenseTensor project_tucker(const TuckerModel& model, const DenseTensor& x) {
  check_input(model.shape, x);
  DenseTensor core = x;
  for (std::size_t i = 0; i < model.factors.size(); ++i)
    core = mode_product(core, i, model.factors[i], true);
  return core;
}

double projection_energy(const Matrix& coefficients) { return coefficients.squaredNorm(); }

double projection_energy(const DenseTensor& coefficients) { return squared_norm(coefficients); }

double projection_energy(const SubspaceModel& model, Scheme scheme, const DenseTensor& x) {
  if (const auto* tucker = std::get_if<TuckerModel>(&model)) {
    if (scheme != Scheme::TuckerModes)
      fail(ErrorCode::InvalidArgument, to_string(scheme) + " does not apply to Tucker models");
    return projection_energy(project_tucker(*tucker, x));
  }
  const auto& ht = std::get<HtModel>(model);
  switch (scheme) {
    case Scheme::HtMaterialized: return projection_energy(project_ht_materialized(ht, x));
    case Scheme::HtFactored: return projection_energy(project_ht_factored(ht, x));
    case Scheme::TtMaterialized: return projection_energy(project_tt(ht, x));
    case Scheme::TuckerModes: break;
  }
  fail(ErrorCode::InvalidArgument, "tucker-modes does not apply to hierarchical models");
}

DenseTensor reconstruct(const HtModel& model, const Matrix& coefficients) {
  const auto [l, r] = root_children(model.tree);
  const Matrix& ul = model.bases[l];
  const Matrix& ur = model.bases[r];
  if (coefficients.rows() != ul.cols() || coefficients.cols() != ur.cols())
    fail(ErrorCode::ShapeMismatch, "coefficient matrix does not match root-child ranks");
  const Matrix ambient = ul * coefficients * ur.transpose();
  return fold(ambient, model.tree.node(l).axes, model.shape);
}

DenseTensor reconstruct(const TuckerModel& model, const DenseTensor& core) {
  DenseTensor t = core;
  for (std::size_t i = 0; i < model.factors.size(); ++i)
    t = mode_product(t, i, model.factors[i], false);
  return t;
}

DenseTensor project_onto(const SubspaceModel& model, const DenseTensor& x) {
  if (const auto* tucker = std::get_if<TuckerModel>(&model))
    return reconstruct(*tucker, project_tucker(*tucker, x));
  const auto& ht = std::get<HtModel>(model);
  return reconstruct(ht, project_ht_materialized(ht, x));
}

}  // namespace tsm
