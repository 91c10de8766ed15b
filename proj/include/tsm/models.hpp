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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "tsm/tensor.hpp"
#include "tsm/tree.hpp"

namespace tsm {

enum class Family { Tucker, HierarchicalTucker, TensorTrain };

// How a test point is mapped to subspace coefficients. The schemes differ in
// what is stored and in operation count, not in the resulting energy.
enum class Scheme {
  TuckerModes,     // U_i^T applied along each axis in ascending order
  HtMaterialized,  // stored root-child bases U_l, U_r: U_l^T X U_r
  HtFactored,      // root-child bases rebuilt from leaves and transfers
  TtMaterialized,  // U_{0..n-2}^T (X U_{n-1})
};

std::string to_string(Family f);
std::string to_string(Scheme s);
Family family_from_string(const std::string& s);
Scheme scheme_from_string(const std::string& s);
bool scheme_supports(Family f, Scheme s);

struct TuckerModel {
  Shape shape;
  std::vector<Matrix> factors;  // I_i x r_i, orthonormal columns

  std::vector<std::size_t> ranks() const;
};

// Hierarchical Tucker subspace over a dimension tree. A tensor-train model is
// an HtModel whose tree is linear.
struct HtModel {
  Shape shape;
  DimensionTree tree;
  std::vector<Matrix> bases;      // per node; empty for the root
  std::vector<Matrix> transfers;  // per internal non-root node, else empty

  std::size_t rank(std::size_t node) const {
    return static_cast<std::size_t>(bases.at(node).cols());
  }
  std::vector<std::size_t> ranks() const;  // per node, 0 for the root
  bool is_tensor_train() const { return tree.is_linear(); }
};

using SubspaceModel = std::variant<TuckerModel, HtModel>;

const Shape& model_shape(const SubspaceModel& m);

// Rank ceiling of the node unfolding of N stacked samples:
// min(prod_{i in s} I_i, N * prod_{j not in s} I_j).
std::size_t full_rank(const Shape& shape, const AxisSet& s, std::size_t sample_count);

// round(fraction * full), at least 1.
std::size_t fraction_rank(double fraction, std::size_t full);

enum class RankPolicy { Strict, Clamp };

struct ResolvedRanks {
  std::vector<std::size_t> ranks;
  bool clamped = false;
};

// Per-axis Tucker ranks from one fraction of each axis' full rank.
ResolvedRanks resolve_tucker_ranks(const Shape& shape, std::size_t sample_count,
                                   double fraction, RankPolicy policy);

// Per-node ranks (indexed by node id, root = 0). Leaves get `leaf_fraction` of
// their full rank, internal non-root nodes `internal_fraction`. Internal
// nodes are additionally capped by r_left * r_right; with RankPolicy::Clamp
// violations are clamped and reported, with Strict they throw.
ResolvedRanks resolve_tree_ranks(const DimensionTree& tree, const Shape& shape,
                                 std::size_t sample_count, double leaf_fraction,
                                 double internal_fraction, RankPolicy policy);

// Lowers already-resolved ranks to what `sample_count` samples can support.
ResolvedRanks clamp_tucker_ranks(const Shape& shape, std::size_t sample_count,
                                 std::span<const std::size_t> ranks);
ResolvedRanks clamp_tree_ranks(const DimensionTree& tree, const Shape& shape,
                               std::size_t sample_count, std::span<const std::size_t> ranks);

// Throws RankInfeasible unless every rank is learnable from `sample_count`
// samples of `shape`.
void validate_tucker_ranks(const Shape& shape, std::size_t sample_count,
                           std::span<const std::size_t> ranks);
void validate_tree_ranks(const DimensionTree& tree, const Shape& shape,
                         std::size_t sample_count, std::span<const std::size_t> ranks);

// Truncated HOSVD: U_i = leading r_i left singular vectors of the mode-i
// unfolding of the stacked samples.
TuckerModel learn_tucker(std::span<const DenseTensor> samples,
                         std::span<const std::size_t> ranks);

// Leaves-to-root hierarchical subspace learning. Leaves take the leading
// left singular vectors of their unfolding. An internal node s with children
// (l, r) compresses its unfolding onto U_l (x) U_r, takes the leading left
// singular vectors of the coefficients as B_s, and stores U_s = (U_l (x) U_r) B_s.
// The root stores nothing.
HtModel learn_hierarchical(std::span<const DenseTensor> samples, const DimensionTree& tree,
                           std::span<const std::size_t> ranks);

// (U_l (x) U_r) * b without forming the Kronecker product.
Matrix kron_apply(const Matrix& ul, const Matrix& ur, const Matrix& b);
// (U_l (x) U_r)^T * x without forming the Kronecker product.
Matrix kron_transpose_apply(const Matrix& ul, const Matrix& ur, const Matrix& x);

// Basis of `node` rebuilt from leaf bases and transfer matrices with explicit
// Kronecker products, bottom-up.
Matrix factored_basis(const HtModel& model, std::size_t node);

Matrix project_ht_materialized(const HtModel& model, const DenseTensor& x);
Matrix project_ht_factored(const HtModel& model, const DenseTensor& x);
Matrix project_tt(const HtModel& model, const DenseTensor& x);
DenseTensor project_tucker(const TuckerModel& model, const DenseTensor& x);

// Multiplies axis `axis` of `t` by u^T (transpose = true) or u.
DenseTensor mode_product(const DenseTensor& t, std::size_t axis, const Matrix& u,
                         bool transpose);

double projection_energy(const Matrix& coefficients);
double projection_energy(const DenseTensor& coefficients);
double projection_energy(const SubspaceModel& model, Scheme scheme, const DenseTensor& x);

// Maps coefficients back into the ambient space.
DenseTensor reconstruct(const HtModel& model, const Matrix& coefficients);
DenseTensor reconstruct(const TuckerModel& model, const DenseTensor& core);

// Orthogonal projection of x onto the model subspace, in the ambient space.
DenseTensor project_onto(const SubspaceModel& model, const DenseTensor& x);

}  // namespace tsm
