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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "tsm/error.hpp"
#include "tsm/linalg.hpp"
#include "tsm/models.hpp"

using namespace tsm;

namespace {

std::set<std::vector<std::size_t>> node_sets(const DimensionTree& t) {
  std::set<std::vector<std::size_t>> out;
  for (const auto& n : t.nodes()) out.insert(n.axes.axes());
  return out;
}

std::vector<std::size_t> uniform_ranks(const DimensionTree& t, std::size_t leaf,
                                       std::size_t internal) {
  std::vector<std::size_t> r(t.node_count(), 0);
  for (std::size_t id = 1; id < t.node_count(); ++id) r[id] = t.is_leaf(id) ? leaf : internal;
  return r;
}

double relative_residual(const SubspaceModel& m, const DenseTensor& x) {
  return frobenius_norm(x - project_onto(m, x)) / frobenius_norm(x);
}

Matrix projector_of(const Matrix& u) { return u * u.transpose(); }

}  // namespace

TEST(DimensionTree, BalancedTrees) {
  using V = std::vector<std::size_t>;
  EXPECT_EQ(node_sets(balanced_tree(4)),
            (std::set<V>{{0, 1, 2, 3}, {0, 1}, {2, 3}, {0}, {1}, {2}, {3}}));
  EXPECT_EQ(node_sets(balanced_tree(2)), (std::set<V>{{0, 1}, {0}, {1}}));
  EXPECT_EQ(node_sets(balanced_tree(3)), (std::set<V>{{0, 1, 2}, {0, 1}, {0}, {1}, {2}}));
  EXPECT_THROW(balanced_tree(1), Error);
}

TEST(DimensionTree, TrainTrees) {
  using V = std::vector<std::size_t>;
  const DimensionTree t4 = tt_tree(4);
  EXPECT_EQ(node_sets(t4), (std::set<V>{{0, 1, 2, 3}, {0, 1, 2}, {0, 1}, {0}, {1}, {2}, {3}}));
  EXPECT_EQ(t4.node(static_cast<std::size_t>(t4.node(0).left)).axes, AxisSet({0, 1, 2}));
  EXPECT_EQ(t4.node(static_cast<std::size_t>(t4.node(0).right)).axes, AxisSet({3}));
  EXPECT_TRUE(t4.is_linear());
  EXPECT_FALSE(balanced_tree(4).is_linear());
  EXPECT_EQ(tt_tree(2), balanced_tree(2));
  EXPECT_EQ(node_sets(tt_tree(5)).count({0, 1, 2, 3}), 1u);
  EXPECT_THROW(tt_tree(1), Error);
}

TEST(DimensionTree, ValidatesStructure) {
  // Children {0,2} and {1} are not contiguous.
  std::vector<TreeNode> nodes{{AxisSet{0, 1, 2}, -1, 1, 4}, {AxisSet{0, 2}, 0, 2, 3},
                              {AxisSet{0}, 1, -1, -1},    {AxisSet{2}, 1, -1, -1},
                              {AxisSet{1}, 0, -1, -1}};
  EXPECT_THROW(DimensionTree(3, nodes), Error);
}

TEST(KronHelpers, MatchDenseKronecker) {
  Rng rng(1);
  const Matrix ul = oracle::random_matrix(3, 2, rng), ur = oracle::random_matrix(4, 3, rng);
  const Matrix b = oracle::random_matrix(6, 5, rng), x = oracle::random_matrix(12, 7, rng);
  const Matrix k = oracle::kron(ul, ur);
  EXPECT_LT((kron_apply(ul, ur, b) - oracle::multiply(k, b)).norm(), 1e-12);
  EXPECT_LT((kron_transpose_apply(ul, ur, x) - oracle::multiply(k.transpose(), x)).norm(), 1e-12);
}

TEST(LearnHierarchical, RecoversPlantedModel) {
  Rng rng(21);
  for (const auto& tree : {balanced_tree(4), tt_tree(4)}) {
    const Shape shape{3, 4, 3, 2};
    const auto ranks = uniform_ranks(tree, 2, 3);
    const HtModel planted = oracle::random_ht(tree, shape, ranks, rng);
    std::vector<DenseTensor> xs;
    for (int i = 0; i < 12; ++i) xs.push_back(oracle::random_member(planted, rng));
    const HtModel learned = learn_hierarchical(xs, tree, ranks);
    for (const auto& x : xs) EXPECT_LT(relative_residual(learned, x), 1e-8);
    EXPECT_LT((projector_of(oracle::full_basis(learned)) -
               projector_of(oracle::full_basis(planted)))
                  .norm(),
              1e-8);
  }
}

TEST(LearnHierarchical, BasesOrthonormalAndNested) {
  Rng rng(22);
  const DimensionTree tree = balanced_tree(4);
  std::vector<DenseTensor> xs;
  for (int i = 0; i < 5; ++i) xs.push_back(oracle::random_tensor({3, 3, 2, 4}, rng));
  const HtModel m = learn_hierarchical(xs, tree, uniform_ranks(tree, 2, 3));
  for (std::size_t id = 1; id < tree.node_count(); ++id) {
    EXPECT_LT(orthonormality_defect(m.bases[id]), 1e-10);
    if (tree.is_leaf(id)) continue;
    EXPECT_LT(orthonormality_defect(m.transfers[id]), 1e-10);
    const auto& n = tree.node(id);
    const Matrix k = oracle::kron(m.bases[n.left], m.bases[n.right]);
    EXPECT_LT((oracle::multiply(k, m.transfers[id]) - m.bases[id]).norm(), 1e-10);
  }
}

TEST(LearnHierarchical, AgreesWithLiteralProjectedSvd) {
  Rng rng(23);
  for (const auto& tree : {balanced_tree(4), tt_tree(4), balanced_tree(3)}) {
    const Shape shape = tree.order() == 4 ? Shape{3, 2, 3, 3} : Shape{3, 4, 2};
    std::vector<DenseTensor> xs;
    for (int i = 0; i < 4; ++i) xs.push_back(oracle::random_tensor(shape, rng));
    const auto ranks = uniform_ranks(tree, 2, 3);
    const HtModel m = learn_hierarchical(xs, tree, ranks);
    const auto literal = oracle::literal_hierarchical_bases(xs, tree, ranks);
    for (std::size_t id = 1; id < tree.node_count(); ++id)
      EXPECT_LT((projector_of(m.bases[id]) - projector_of(literal[id])).norm(), 1e-8)
          << "node " << tree.node(id).axes.to_string();
  }
}

TEST(LearnHierarchical, FullRankReproducesTrainingData) {
  Rng rng(24);
  const Shape shape{2, 3, 2, 2};
  for (const auto& tree : {balanced_tree(4), tt_tree(4)}) {
    std::vector<DenseTensor> xs;
    for (int i = 0; i < 3; ++i) xs.push_back(oracle::random_tensor(shape, rng));
    std::vector<std::size_t> ranks(tree.node_count(), 0);
    for (std::size_t id : tree.leaves_to_root()) {
      if (tree.is_root(id)) continue;
      const auto& n = tree.node(id);
      ranks[id] = full_rank(shape, n.axes, xs.size());
      if (!n.is_leaf()) ranks[id] = std::min(ranks[id], ranks[n.left] * ranks[n.right]);
    }
    const HtModel m = learn_hierarchical(xs, tree, ranks);
    for (const auto& x : xs) EXPECT_LT(relative_residual(m, x), 1e-8);
  }
}

TEST(LearnHierarchical, ElementaryTensorAtRankOne) {
  Rng rng(25);
  const Matrix a = oracle::random_matrix(3, 1, rng), b = oracle::random_matrix(2, 1, rng);
  const Matrix c = oracle::random_matrix(4, 1, rng), d = oracle::random_matrix(2, 1, rng);
  const Vector v = oracle::kron(oracle::kron(a, b), oracle::kron(c, d));
  const DenseTensor x({3, 2, 4, 2}, std::vector<double>(v.data(), v.data() + v.size()));
  const DimensionTree tree = balanced_tree(4);
  const std::vector<DenseTensor> xs{x};
  const HtModel m = learn_hierarchical(xs, tree, uniform_ranks(tree, 1, 1));
  EXPECT_LT(relative_residual(m, x), 1e-10);
}

TEST(LearnHierarchical, RejectsBadInput) {
  const DimensionTree tree = balanced_tree(4);
  std::vector<DenseTensor> none;
  EXPECT_THROW(learn_hierarchical(none, tree, uniform_ranks(tree, 1, 1)), Error);
  std::vector<DenseTensor> xs{DenseTensor({2, 2, 2, 2})};
  try {
    learn_hierarchical(xs, tree, uniform_ranks(tree, 3, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankInfeasible);
  }
  // Internal rank above the product of the child ranks.
  EXPECT_THROW(learn_hierarchical(xs, tree, uniform_ranks(tree, 1, 2)), Error);
  xs.push_back(DenseTensor({2, 2, 2, 3}));
  EXPECT_THROW(learn_hierarchical(xs, tree, uniform_ranks(tree, 1, 1)), Error);
}

TEST(LearnTucker, FullRankIsIdentity) {
  Rng rng(26);
  std::vector<DenseTensor> xs{oracle::random_tensor({3, 2, 4}, rng)};
  const std::vector<std::size_t> r{3, 2, 4};
  const TuckerModel m = learn_tucker(xs, r);
  const DenseTensor y = oracle::random_tensor({3, 2, 4}, rng);
  EXPECT_LT(relative_residual(m, y), 1e-10);
  EXPECT_NEAR(frobenius_norm(project_tucker(m, y)), frobenius_norm(y), 1e-10);
}

TEST(LearnTucker, RecoversPlantedAndSeparable) {
  Rng rng(27);
  const TuckerModel planted = oracle::random_tucker({4, 3, 4, 3}, {2, 2, 3, 1}, rng);
  std::vector<DenseTensor> xs;
  for (int i = 0; i < 6; ++i) xs.push_back(oracle::random_member(planted, rng));
  const std::vector<std::size_t> r{2, 2, 3, 1};
  const TuckerModel m = learn_tucker(xs, r);
  for (const auto& x : xs) EXPECT_LT(relative_residual(m, x), 1e-8);

  const TuckerModel rank1 = oracle::random_tucker({3, 2, 2, 3}, {1, 1, 1, 1}, rng);
  std::vector<DenseTensor> one{oracle::random_member(rank1, rng)};
  const std::vector<std::size_t> ones{1, 1, 1, 1};
  EXPECT_LT(relative_residual(learn_tucker(one, ones), one[0]), 1e-10);
}

TEST(LearnTucker, RejectsBadRanks) {
  std::vector<DenseTensor> xs{DenseTensor({2, 3})};
  const std::vector<std::size_t> zero{0, 1}, big{3, 1};
  EXPECT_THROW(learn_tucker(xs, zero), Error);
  EXPECT_THROW(learn_tucker(xs, big), Error);
}

TEST(Projection, MaterializedEqualsFactored) {
  Rng rng(30);
  for (const auto& tree : {balanced_tree(4), tt_tree(4), balanced_tree(5)}) {
    const Shape shape = tree.order() == 4 ? Shape{3, 4, 2, 3} : Shape{2, 2, 3, 2, 2};
    const HtModel m = oracle::random_ht(tree, shape, uniform_ranks(tree, 2, 3), rng);
    const DenseTensor x = oracle::random_tensor(shape, rng);
    const Matrix a = project_ht_materialized(m, x), b = project_ht_factored(m, x);
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_EQ(project_ht_factored(m, DenseTensor(shape)).norm(), 0.0);
  }
}

TEST(Projection, IsometryOnSubspaceAndZeroOnComplement) {
  Rng rng(31);
  const Shape shape{3, 3, 2, 2};
  const DimensionTree tree = balanced_tree(4);
  const HtModel ht = oracle::random_ht(tree, shape, uniform_ranks(tree, 2, 2), rng);
  const DimensionTree chain = tt_tree(4);
  const HtModel tt = oracle::random_ht(chain, shape, uniform_ranks(chain, 2, 2), rng);
  const TuckerModel tucker = oracle::random_tucker(shape, {2, 2, 1, 2}, rng);
  const std::vector<std::pair<SubspaceModel, Scheme>> cases{
      {ht, Scheme::HtMaterialized}, {ht, Scheme::HtFactored}, {tt, Scheme::TtMaterialized},
      {tt, Scheme::HtFactored}, {tucker, Scheme::TuckerModes}};
  for (const auto& [m, scheme] : cases) {
    const DenseTensor in = oracle::random_member(m, rng);
    EXPECT_NEAR(projection_energy(m, scheme, in), squared_norm(in), 1e-9 * squared_norm(in));
    const DenseTensor out = oracle::complement_part(m, oracle::random_tensor(shape, rng));
    EXPECT_LT(projection_energy(m, scheme, out), 1e-20 * squared_norm(out) + 1e-24);
    EXPECT_EQ(projection_energy(m, scheme, DenseTensor(shape)), 0.0);
  }
}

TEST(Projection, TrainMatchesFactoredChain) {
  Rng rng(32);
  const DimensionTree tree = tt_tree(4);
  const Shape shape{2, 3, 2, 3};
  const HtModel m = oracle::random_ht(tree, shape, uniform_ranks(tree, 2, 3), rng);
  const DenseTensor x = oracle::random_tensor(shape, rng);
  EXPECT_LT((project_tt(m, x) - project_ht_factored(m, x)).cwiseAbs().maxCoeff(), 1e-10);
  const HtModel balanced = oracle::random_ht(balanced_tree(4), shape,
                                             uniform_ranks(balanced_tree(4), 1, 1), rng);
  EXPECT_THROW(project_tt(balanced, x), Error);
}

TEST(Projection, TuckerSeparableAlignment) {
  Rng rng(33);
  const TuckerModel m = oracle::random_tucker({3, 2, 3, 2}, {2, 2, 2, 2}, rng);
  Matrix v = m.factors[0].col(0);
  for (std::size_t i = 1; i < 4; ++i) v = oracle::kron(v, Matrix(m.factors[i].col(0)));
  const DenseTensor x({3, 2, 3, 2}, std::vector<double>(v.data(), v.data() + v.size()));
  const DenseTensor core = project_tucker(m, x);
  EXPECT_NEAR(core.at({0, 0, 0, 0}), frobenius_norm(x), 1e-12);
  EXPECT_NEAR(squared_norm(core), squared_norm(x), 1e-12);
}

TEST(Projection, EnergyMatchesExplicitProjector) {
  Rng rng(34);
  const Shape shape{3, 3, 3, 3};
  const DimensionTree tree = balanced_tree(4), chain = tt_tree(4);
  const std::vector<std::pair<SubspaceModel, Scheme>> cases{
      {oracle::random_tucker(shape, {2, 1, 2, 3}, rng), Scheme::TuckerModes},
      {oracle::random_ht(tree, shape, uniform_ranks(tree, 2, 3), rng), Scheme::HtMaterialized},
      {oracle::random_ht(chain, shape, uniform_ranks(chain, 2, 3), rng), Scheme::TtMaterialized}};
  for (const auto& [m, scheme] : cases) {
    const DenseTensor x = oracle::random_tensor(shape, rng);
    const double expected = oracle::projector_energy(m, x);
    const double e = projection_energy(m, scheme, x);
    EXPECT_NEAR(e, expected, 1e-9 * expected);
    EXPECT_LE(e, squared_norm(x) + 1e-12);
  }
}

TEST(Projection, IdempotentAfterReconstruction) {
  Rng rng(35);
  const Shape shape{3, 2, 2, 3};
  const DimensionTree tree = balanced_tree(4);
  const HtModel m = oracle::random_ht(tree, shape, uniform_ranks(tree, 2, 2), rng);
  const DenseTensor x = oracle::random_tensor(shape, rng);
  const Matrix c1 = project_ht_materialized(m, x);
  const Matrix c2 = project_ht_materialized(m, reconstruct(m, c1));
  EXPECT_LT((c1 - c2).cwiseAbs().maxCoeff(), 1e-10);
  const TuckerModel t = oracle::random_tucker(shape, {2, 1, 2, 2}, rng);
  const DenseTensor k1 = project_tucker(t, x);
  const DenseTensor k2 = project_tucker(t, reconstruct(t, k1));
  EXPECT_LT(frobenius_norm(k1 - k2), 1e-10);
}

TEST(Projection, InternalRankIsMonotone) {
  Rng rng(36);
  const DimensionTree tree = balanced_tree(4);
  const Shape shape{3, 3, 3, 3};
  const HtModel planted = oracle::random_ht(tree, shape, uniform_ranks(tree, 3, 5), rng);
  std::vector<DenseTensor> xs;
  for (int i = 0; i < 6; ++i) xs.push_back(oracle::random_member(planted, rng));
  std::vector<double> prev(xs.size(), 0.0);
  for (std::size_t rp = 1; rp <= 9; ++rp) {
    const HtModel m = learn_hierarchical(xs, tree, uniform_ranks(tree, 3, rp));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double e = projection_energy(project_ht_materialized(m, xs[i]));
      EXPECT_GE(e, prev[i] - 1e-10);
      prev[i] = e;
    }
  }
}

TEST(Projection, RejectsShapeMismatch) {
  Rng rng(37);
  const DimensionTree tree = balanced_tree(4);
  const HtModel m = oracle::random_ht(tree, {2, 2, 2, 2}, uniform_ranks(tree, 1, 1), rng);
  try {
    project_ht_materialized(m, DenseTensor({2, 2, 2, 3}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ShapeMismatch);
  }
  EXPECT_THROW(project_tucker(oracle::random_tucker({2, 2}, {1, 1}, rng), DenseTensor({2, 3})),
               Error);
  EXPECT_THROW(projection_energy(SubspaceModel(m), Scheme::TuckerModes, DenseTensor({2, 2, 2, 2})),
               Error);
}

TEST(Ranks, FullAndFractional) {
  const Shape shape{8, 8, 8, 8};
  EXPECT_EQ(full_rank(shape, {0}, 10), 8u);
  EXPECT_EQ(full_rank(shape, {0, 1, 2}, 10), 80u);
  EXPECT_EQ(full_rank(shape, {0, 1, 2}, 100), 512u);
  EXPECT_EQ(full_rank(shape, {0, 1, 2}, 1), 8u);
  EXPECT_EQ(fraction_rank(0.7, 8), 6u);
  EXPECT_EQ(fraction_rank(0.01, 8), 1u);
  EXPECT_THROW(fraction_rank(0.0, 8), Error);
  EXPECT_THROW(fraction_rank(1.5, 8), Error);
}

TEST(Ranks, TreeResolutionClampsOrThrows) {
  const DimensionTree tree = balanced_tree(4);
  const Shape shape{8, 8, 8, 8};
  // Leaves 0.25 * 8 = 2, internal 1.0 * 64 = 64 > 2 * 2.
  const ResolvedRanks r = resolve_tree_ranks(tree, shape, 10, 0.25, 1.0, RankPolicy::Clamp);
  EXPECT_TRUE(r.clamped);
  for (std::size_t id = 1; id < tree.node_count(); ++id)
    EXPECT_EQ(r.ranks[id], tree.is_leaf(id) ? 2u : 4u);
  EXPECT_THROW(resolve_tree_ranks(tree, shape, 10, 0.25, 1.0, RankPolicy::Strict), Error);
  const ResolvedRanks ok = resolve_tree_ranks(tree, shape, 10, 0.5, 0.25, RankPolicy::Strict);
  EXPECT_FALSE(ok.clamped);
  const ResolvedRanks low = clamp_tree_ranks(tree, {2, 2, 2, 2}, 1, ok.ranks);
  EXPECT_TRUE(low.clamped);
  for (std::size_t id = 1; id < tree.node_count(); ++id)
    EXPECT_EQ(low.ranks[id], tree.is_leaf(id) ? 2u : 4u);
}
