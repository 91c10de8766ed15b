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
#include "tsm/classifier.hpp"
#include "tsm/dataset.hpp"
#include "tsm/error.hpp"

using namespace tsm;

namespace {

std::vector<std::size_t> uniform_ranks(const DimensionTree& t, std::size_t leaf,
                                       std::size_t internal) {
  std::vector<std::size_t> r(t.node_count(), 0);
  for (std::size_t id = 1; id < t.node_count(); ++id) r[id] = t.is_leaf(id) ? leaf : internal;
  return r;
}

LibrarySpec spec_for(Family family, std::size_t order, std::size_t leaf, std::size_t internal,
                     Centering centering) {
  LibrarySpec s;
  s.family = family;
  s.centering = centering;
  switch (family) {
    case Family::Tucker:
      s.scheme = Scheme::TuckerModes;
      s.ranks.assign(order, leaf);
      break;
    case Family::HierarchicalTucker:
      s.scheme = Scheme::HtMaterialized;
      s.tree = balanced_tree(order);
      s.ranks = uniform_ranks(*s.tree, leaf, internal);
      break;
    case Family::TensorTrain:
      s.scheme = Scheme::TtMaterialized;
      s.tree = tt_tree(order);
      s.ranks = uniform_ranks(*s.tree, leaf, internal);
      break;
  }
  return s;
}

// Two classes in mutually orthogonal rank-1 subspaces: the axis-0 factors
// are distinct columns of one orthonormal matrix.
struct OrthogonalPair {
  TuckerModel a, b;
};

OrthogonalPair orthogonal_pair(const Shape& shape, Rng& rng) {
  const Matrix q = oracle::random_orthonormal(shape[0], 2, rng);
  TuckerModel a = oracle::random_tucker(shape, std::vector<std::size_t>(shape.size(), 1), rng);
  TuckerModel b = oracle::random_tucker(shape, std::vector<std::size_t>(shape.size(), 1), rng);
  a.factors[0] = q.col(0);
  b.factors[0] = q.col(1);
  return {a, b};
}

}  // namespace

TEST(Classifier, SingleClassAlwaysWins) {
  Rng rng(1);
  std::vector<LabeledTensor> train;
  for (int i = 0; i < 4; ++i) train.push_back({"only", oracle::random_tensor({2, 3, 2}, rng)});
  const ClassLibrary lib =
      train_library(train, spec_for(Family::Tucker, 3, 1, 1, Centering::Global));
  std::vector<LabeledTensor> test{{"only", oracle::random_tensor({2, 3, 2}, rng)}};
  EXPECT_EQ(evaluate(lib, test).error_rate, 0.0);
}

TEST(Classifier, OrthogonalRankOneClassesAreSeparated) {
  Rng rng(2);
  const Shape shape{4, 3, 3, 2};
  const auto [a, b] = orthogonal_pair(shape, rng);
  std::vector<LabeledTensor> train, test;
  for (int i = 0; i < 6; ++i) {
    train.push_back({"a", oracle::random_member(a, rng)});
    train.push_back({"b", oracle::random_member(b, rng)});
    test.push_back({"a", oracle::random_member(a, rng)});
    test.push_back({"b", oracle::random_member(b, rng)});
  }
  for (Family f : {Family::Tucker, Family::HierarchicalTucker, Family::TensorTrain}) {
    const ClassLibrary lib = train_library(train, spec_for(f, 4, 1, 1, Centering::None));
    EXPECT_EQ(evaluate(lib, test).error_rate, 0.0) << to_string(f);
  }
}

TEST(Classifier, IdenticalClassesTieToLowestLabel) {
  Rng rng(3);
  std::vector<LabeledTensor> train, test;
  std::size_t trials = 0, errors = 0;
  for (int i = 0; i < 4; ++i) {
    const DenseTensor x = oracle::random_tensor({3, 3, 2}, rng);
    train.push_back({"a", x});
    train.push_back({"b", x});
  }
  const ClassLibrary lib =
      train_library(train, spec_for(Family::HierarchicalTucker, 3, 2, 2, Centering::Global));
  for (int i = 0; i < 60; ++i) {
    const DenseTensor x = oracle::random_tensor({3, 3, 2}, rng);
    test.push_back({"a", x});
    test.push_back({"b", x});
    EXPECT_EQ(classify(lib, x), "a");
  }
  const EvaluationResult r = evaluate(lib, test);
  trials = r.total;
  errors = r.misclassified;
  EXPECT_EQ(trials, 120u);
  EXPECT_NEAR(static_cast<double>(errors) / static_cast<double>(trials), 0.5, 0.1);
}

TEST(Classifier, CenteredZeroInputTiesToLowestLabel) {
  Rng rng(4);
  std::vector<LabeledTensor> train;
  for (const char* label : {"b", "a", "c"})
    for (int i = 0; i < 3; ++i) train.push_back({label, oracle::random_tensor({2, 2, 3}, rng)});
  const ClassLibrary lib =
      train_library(train, spec_for(Family::Tucker, 3, 2, 2, Centering::Global));
  EXPECT_EQ(classify(lib, *lib.mean), "a");
}

TEST(Classifier, DominantComponentWins) {
  Rng rng(5);
  const Shape shape{3, 2, 2, 3};
  const auto [a, b] = orthogonal_pair(shape, rng);
  std::vector<LabeledTensor> train;
  for (int i = 0; i < 3; ++i) {
    train.push_back({"a", oracle::random_member(a, rng)});
    train.push_back({"b", oracle::random_member(b, rng)});
  }
  const ClassLibrary lib =
      train_library(train, spec_for(Family::Tucker, 4, 1, 1, Centering::None));
  DenseTensor ua = oracle::random_member(a, rng), ub = oracle::random_member(b, rng);
  ua = (1.0 / frobenius_norm(ua)) * ua;
  ub = (1.0 / frobenius_norm(ub)) * ub;
  const DenseTensor x = 0.9 * ua + 0.1 * ub;
  const auto e = class_energies(lib, x);
  EXPECT_NEAR(e[0].second, 0.81, 1e-10);
  EXPECT_NEAR(e[1].second, 0.01, 1e-10);
  EXPECT_EQ(classify(lib, x), "a");
  EXPECT_EQ(classify(lib, 3.5 * x), "a");
}

TEST(Classifier, PlantedClassesAtPlantedRanksForEveryFamily) {
  for (Family f : {Family::Tucker, Family::HierarchicalTucker, Family::TensorTrain}) {
    SyntheticSpec spec;
    spec.class_count = 3;
    spec.shape = {4, 3, 3, 4};
    spec.family = f;
    spec.samples_per_class = 12;
    spec.orthogonal_classes = true;
    spec.seed = 9;
    if (f == Family::Tucker) {
      spec.ranks = std::vector<std::size_t>{1, 2, 2, 2};
    } else {
      const DimensionTree tree = default_tree(f, 4);
      std::vector<std::size_t> r = uniform_ranks(tree, 2, 2);
      r[tree.leaf_of_axis(0)] = 1;
      spec.ranks = r;
    }
    const Dataset ds = generate_synthetic(spec);
    const auto ranks = planted_ranks(spec);
    std::vector<LabeledTensor> train, test;
    for (std::size_t i = 0; i < ds.samples.size(); ++i)
      (i % 2 ? test : train).push_back(ds.samples[i]);
    LibrarySpec ls;
    ls.family = f;
    ls.scheme = f == Family::Tucker ? Scheme::TuckerModes
                : f == Family::TensorTrain ? Scheme::TtMaterialized
                                           : Scheme::HtFactored;
    ls.ranks = ranks;
    ls.centering = Centering::None;
    EXPECT_EQ(evaluate(train_library(train, ls), test).error_rate, 0.0) << to_string(f);
  }
}

TEST(Classifier, EvaluationBookkeeping) {
  Rng rng(6);
  std::vector<LabeledTensor> train;
  for (const char* label : {"a", "b"})
    for (int i = 0; i < 3; ++i) train.push_back({label, oracle::random_tensor({2, 2, 2}, rng)});
  const ClassLibrary lib = train_library(train, spec_for(Family::Tucker, 3, 1, 1, Centering::None));
  std::vector<LabeledTensor> test;
  for (int i = 0; i < 10; ++i)
    test.push_back({i % 2 ? "a" : "b", oracle::random_tensor({2, 2, 2}, rng)});
  const EvaluationResult r = evaluate(lib, test);
  std::size_t sum = 0, a_row = 0;
  for (const auto& [key, n] : r.confusion) {
    sum += n;
    if (key.first == "a") a_row += n;
  }
  EXPECT_EQ(sum, r.total);
  EXPECT_EQ(a_row, 5u);
  EXPECT_DOUBLE_EQ(r.error_rate, static_cast<double>(r.misclassified) / 10.0);
  EXPECT_GE(r.error_rate, 0.0);
  EXPECT_LE(r.error_rate, 1.0);
  const EvaluationResult again = evaluate(lib, test);
  EXPECT_EQ(again.confusion, r.confusion);

  const std::string predicted = classify(lib, test[0].tensor);
  std::vector<LabeledTensor> wrong{{predicted == "a" ? "b" : "a", test[0].tensor}};
  EXPECT_EQ(evaluate(lib, wrong).error_rate, 1.0);
  std::vector<LabeledTensor> unknown{{"zzz", test[0].tensor}};
  EXPECT_THROW(evaluate(lib, unknown), Error);
  EXPECT_THROW(evaluate(lib, std::vector<LabeledTensor>{}), Error);
  EXPECT_THROW(classify(lib, DenseTensor({2, 2, 3})), Error);
}

TEST(Classifier, InfeasibleRankIsAnErrorNamingTheClass) {
  Rng rng(7);
  std::vector<LabeledTensor> train{{"a", oracle::random_tensor({4, 4}, rng)},
                                   {"a", oracle::random_tensor({4, 4}, rng)},
                                   {"b", oracle::random_tensor({4, 4}, rng)}};
  // Leaf rank 5 exceeds the axis size 4.
  const LibrarySpec s = spec_for(Family::HierarchicalTucker, 2, 5, 1, Centering::None);
  try {
    train_library(train, s);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::RankInfeasible);
    EXPECT_NE(std::string(e.what()).find("class 'a'"), std::string::npos);
  }
}

TEST(Classifier, PerClassCentering) {
  Rng rng(8);
  std::vector<LabeledTensor> train;
  for (const char* label : {"a", "b"})
    for (int i = 0; i < 4; ++i) train.push_back({label, oracle::random_tensor({2, 3, 2}, rng)});
  const ClassLibrary lib =
      train_library(train, spec_for(Family::TensorTrain, 3, 2, 2, Centering::PerClass));
  EXPECT_FALSE(lib.mean.has_value());
  ASSERT_EQ(lib.class_means.size(), 2u);
  const DenseTensor& ma = lib.class_means.at("a");
  EXPECT_EQ(frobenius_norm(lib.centered(ma, "a")), 0.0);
}
