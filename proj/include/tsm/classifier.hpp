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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tsm/models.hpp"

namespace tsm {

struct LabeledTensor {
  std::string label;
  DenseTensor tensor;
};

enum class Centering { Global, PerClass, None };

std::string to_string(Centering c);
Centering centering_from_string(const std::string& s);

struct LibrarySpec {
  Family family = Family::HierarchicalTucker;
  Scheme scheme = Scheme::HtMaterialized;
  // Defaults to balanced_tree for HT and tt_tree for TT; ignored for Tucker.
  std::optional<DimensionTree> tree;
  // Absolute ranks: one per axis for Tucker, one per tree node otherwise.
  std::vector<std::size_t> ranks;
  Centering centering = Centering::Global;
};

// One learned subspace per class, all sharing family, tree and ranks.
struct ClassLibrary {
  Shape shape;
  Family family = Family::Tucker;
  Scheme scheme = Scheme::TuckerModes;
  std::optional<DimensionTree> tree;
  std::vector<std::size_t> ranks;
  Centering centering = Centering::Global;
  std::optional<DenseTensor> mean;                // Centering::Global
  std::map<std::string, DenseTensor> class_means;  // Centering::PerClass
  std::map<std::string, SubspaceModel> models;

  // Tensor subtracted from x before projecting onto `label`'s subspace.
  DenseTensor centered(const DenseTensor& x, const std::string& label) const;
};

struct EvaluationResult {
  double error_rate = 0.0;
  std::size_t total = 0;
  std::size_t misclassified = 0;
  std::map<std::pair<std::string, std::string>, std::size_t> confusion;  // (true, predicted)
  std::vector<double> per_run_rates;
};

DimensionTree default_tree(Family family, std::size_t order);

// Requested ranks exceeding what a class's sample count supports raise
// RankInfeasible; nothing is clamped here.
ClassLibrary train_library(std::span<const LabeledTensor> train, const LibrarySpec& spec);

// Label whose subspace captures the most energy of x; ties go to the lowest
// label.
std::string classify(const ClassLibrary& library, const DenseTensor& x);

// Projection energy per class, in label order.
std::vector<std::pair<std::string, double>> class_energies(const ClassLibrary& library,
                                                           const DenseTensor& x);

EvaluationResult evaluate(const ClassLibrary& library, std::span<const LabeledTensor> test);

}  // namespace tsm
