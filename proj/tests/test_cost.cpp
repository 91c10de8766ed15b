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

#include "oracles.hpp"
#include "tsm/cost.hpp"
#include "tsm/error.hpp"

using namespace tsm;

namespace {

ModelLayout tree_layout(const DimensionTree& tree, std::size_t n, std::size_t r, std::size_t rp) {
  ModelLayout l{Shape(tree.order(), n), tree, std::vector<std::size_t>(tree.node_count(), 0)};
  for (std::size_t id = 1; id < tree.node_count(); ++id) l.ranks[id] = tree.is_leaf(id) ? r : rp;
  return l;
}

// Learns a model on random data when the ranks are attainable.
std::optional<SubspaceModel> learned(const ModelLayout& layout, Rng& rng) {
  std::vector<DenseTensor> xs;
  for (int i = 0; i < 3; ++i) xs.push_back(oracle::random_tensor(layout.shape, rng));
  try {
    if (!layout.tree) return SubspaceModel(learn_tucker(xs, layout.ranks));
    return SubspaceModel(learn_hierarchical(xs, *layout.tree, layout.ranks));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::RankInfeasible) return std::nullopt;
    throw;
  }
}

}  // namespace

TEST(CostFormula, TuckerExamples) {
  // 16^4*4 + 16^3*16 + 16^2*64 + 16*256 + 256
  EXPECT_EQ(cost_formula_tucker(16, 4), (FormulaCost{256, 262144 + 65536 + 16384 + 4096 + 256}));
  EXPECT_EQ(cost_formula_tucker(16, 4).projection, 348416u);
  EXPECT_EQ(cost_formula_tucker(1, 1), (FormulaCost{4, 5}));
  EXPECT_THROW(cost_formula_tucker(4, 0), Error);
}

TEST(CostFormula, MaterializedHtExamples) {
  EXPECT_EQ(cost_formula_hier1(4, 2), (FormulaCost{64, 580}));
  EXPECT_EQ(cost_formula_hier1(1, 1), (FormulaCost{2, 3}));
  for (std::uint64_t rp = 1; rp < 10; ++rp) {
    EXPECT_LT(cost_formula_hier1(5, rp).storage, cost_formula_hier1(5, rp + 1).storage);
    EXPECT_LT(cost_formula_hier1(5, rp).projection, cost_formula_hier1(5, rp + 1).projection);
  }
}

TEST(CostFormula, FactoredHtExamples) {
  EXPECT_EQ(cost_formula_hier2(4, 2, 2), (FormulaCost{48, 964}));
  EXPECT_EQ(cost_formula_hier2(1, 1, 1), (FormulaCost{6, 7}));
  EXPECT_LT(cost_formula_hier2(16, 4, 8).storage, cost_formula_hier1(16, 8).storage);
}

TEST(CostFormula, TrainExamples) {
  EXPECT_EQ(cost_formula_tt(2, 1, 1), (FormulaCost{10, 24}));
  EXPECT_EQ(cost_formula_tt(16, 4, 8), (FormulaCost{32832, 393216}));
  for (std::uint64_t n = 2; n <= 8; ++n)
    for (std::uint64_t r = 1; r <= 4; ++r)
      EXPECT_GT(cost_formula_tt(n, r, r).storage, cost_formula_tucker(n, r).storage);
}

TEST(CostLayout, MatchesFormulasOnSymmetricGrid) {
  for (std::size_t n = 2; n <= 4; ++n) {
    for (std::size_t r = 1; r <= 3; ++r) {
      for (std::size_t rp = 1; rp <= 3; ++rp) {
        const ModelLayout tucker{Shape(4, n), std::nullopt, std::vector<std::size_t>(4, r)};
        EXPECT_EQ(cost_layout(tucker, Scheme::TuckerModes).storage_scalars,
                  cost_formula_tucker(n, r).storage);
        EXPECT_EQ(cost_layout(tucker, Scheme::TuckerModes).projection_macs,
                  cost_formula_tucker(n, r).projection);
        const ModelLayout ht = tree_layout(balanced_tree(4), n, r, rp);
        const CostReport h1 = cost_layout(ht, Scheme::HtMaterialized);
        const CostReport h2 = cost_layout(ht, Scheme::HtFactored);
        EXPECT_EQ((FormulaCost{h1.storage_scalars, h1.projection_macs}), cost_formula_hier1(n, rp));
        EXPECT_EQ((FormulaCost{h2.storage_scalars, h2.projection_macs}),
                  cost_formula_hier2(n, r, rp));
        const CostReport tt = cost_layout(tree_layout(tt_tree(4), n, r, rp), Scheme::TtMaterialized);
        EXPECT_EQ((FormulaCost{tt.storage_scalars, tt.projection_macs}), cost_formula_tt(n, r, rp));
      }
    }
  }
}

TEST(CostGeneral, LearnedModelsMatchFormulas) {
  Rng rng(3);
  std::size_t checked = 0;
  for (std::size_t n = 2; n <= 4; ++n) {
    for (std::size_t r = 1; r <= 3; ++r) {
      for (std::size_t rp = 1; rp <= 3; ++rp) {
        const ModelLayout tucker{Shape(4, n), std::nullopt, std::vector<std::size_t>(4, r)};
        if (auto m = learned(tucker, rng)) {
          const CostReport c = cost_general(*m, Scheme::TuckerModes);
          EXPECT_EQ((FormulaCost{c.storage_scalars, c.projection_macs}), cost_formula_tucker(n, r));
          ++checked;
        }
        if (auto m = learned(tree_layout(balanced_tree(4), n, r, rp), rng)) {
          const CostReport c1 = cost_general(*m, Scheme::HtMaterialized);
          const CostReport c2 = cost_general(*m, Scheme::HtFactored);
          EXPECT_EQ((FormulaCost{c1.storage_scalars, c1.projection_macs}),
                    cost_formula_hier1(n, rp));
          EXPECT_EQ((FormulaCost{c2.storage_scalars, c2.projection_macs}),
                    cost_formula_hier2(n, r, rp));
          ++checked;
        }
        if (auto m = learned(tree_layout(tt_tree(4), n, r, rp), rng)) {
          const CostReport c = cost_general(*m, Scheme::TtMaterialized);
          EXPECT_EQ((FormulaCost{c.storage_scalars, c.projection_macs}), cost_formula_tt(n, r, rp));
          ++checked;
        }
      }
    }
  }
  EXPECT_GT(checked, 40u);
}

TEST(CostGeneral, NormalizationAndMinimumStorage) {
  const ModelLayout l{Shape{3, 4, 5}, std::nullopt, {1, 1, 1}};
  const CostReport c = cost_layout(l, Scheme::TuckerModes);
  EXPECT_EQ(c.ambient_dimension, 60u);
  EXPECT_EQ(c.normalized_storage(), static_cast<double>(c.storage_scalars) / 60.0);
  EXPECT_GE(c.storage_scalars, 3u);
  EXPECT_THROW(cost_layout(l, Scheme::HtMaterialized), Error);
  EXPECT_THROW(cost_layout(tree_layout(balanced_tree(4), 2, 1, 1), Scheme::TtMaterialized), Error);
}

TEST(CostGeneral, DependsOnlyOnShapes) {
  Rng rng(4);
  const ModelLayout layout = tree_layout(balanced_tree(4), 3, 2, 3);
  const auto a = learned(layout, rng), b = learned(layout, rng);
  ASSERT_TRUE(a && b);
  for (Scheme s : {Scheme::HtMaterialized, Scheme::HtFactored}) {
    EXPECT_EQ(cost_general(*a, s).projection_macs, cost_general(*b, s).projection_macs);
    EXPECT_EQ(cost_general(*a, s).storage_scalars, cost_layout(layout, s).storage_scalars);
  }
}
