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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tsm/cost.hpp"
#include "tsm/dataset.hpp"

namespace tsm {

struct DatasetConfig {
  std::string kind = "synthetic";  // "synthetic" or "images"
  std::filesystem::path path;
  std::vector<std::size_t> row_factors;
  std::vector<std::size_t> col_factors;
  SyntheticSpec synthetic;
  bool synthetic_seed_set = false;  // otherwise derived from the master seed
};

struct ExperimentConfig {
  DatasetConfig dataset;
  std::size_t classes_per_run = 4;
  std::size_t pool_size = 18;
  double train_fraction = 0.5;
  std::size_t repetitions = 10;
  std::vector<Family> families{Family::Tucker, Family::HierarchicalTucker, Family::TensorTrain};
  std::string tree = "balanced";  // tree of the "ht" family: "balanced" or "tt"
  std::vector<double> rank_fractions{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  double leaf_fraction = 0.7;
  std::vector<Scheme> schemes;  // empty: per-family defaults
  Centering centering = Centering::Global;
  bool freeze_split = false;             // same split in every repetition
  std::vector<std::size_t> train_sizes;  // learning curve, per class
  std::uint64_t seed = 1;
  std::size_t threads = 1;  // 0: hardware concurrency

  void validate() const;
};

// Accepts a bare config object or a results sidecar (uses its "config").
ExperimentConfig config_from_json(const std::string& text);
std::string config_to_json(const ExperimentConfig& config);

struct ResultRow {
  Family family = Family::Tucker;
  Scheme scheme = Scheme::TuckerModes;
  double rank_fraction = 0.0;
  double leaf_fraction = 0.0;
  std::size_t samples_per_class = 0;
  double norm_storage = 0.0;
  double norm_projection = 0.0;
  double mean_error = 0.0;
  double std_error = 0.0;  // sample standard deviation over repetitions
  std::uint64_t seed = 0;
  std::vector<double> errors;       // one per repetition
  std::vector<std::size_t> ranks;   // resolved ranks of the first repetition
  bool clamped = false;             // any repetition clamped a rank
};

Dataset load_dataset(const DatasetConfig& config, std::uint64_t master_seed);

std::vector<Scheme> schemes_for(const ExperimentConfig& config, Family family);
DimensionTree tree_for(const ExperimentConfig& config, Family family, std::size_t order);

// Classes and train/test split used by one repetition. Indices refer to
// dataset.samples and are ascending within each class.
struct RepetitionPlan {
  std::vector<std::string> labels;
  std::vector<std::size_t> pool_index;  // position of each label in the class pool
  std::vector<std::vector<std::size_t>> train;
  std::vector<std::vector<std::size_t>> test;
  std::size_t min_train = 0;  // smallest per-class training count
};

// The pool is the first pool_size labels in sorted order.
RepetitionPlan plan_repetition(const ExperimentConfig& config, const Dataset& dataset,
                               std::size_t repetition);

// Rank fraction sweep: Tucker sweeps every r_i together; HT and TT keep the
// leaves at leaf_fraction and sweep every internal node.
std::vector<ResultRow> run_rank_sweep(const ExperimentConfig& config);
std::vector<ResultRow> run_learning_curve(const ExperimentConfig& config);
std::vector<ResultRow> run_rank_sweep(const ExperimentConfig& config, const Dataset& dataset);
std::vector<ResultRow> run_learning_curve(const ExperimentConfig& config, const Dataset& dataset);

inline constexpr const char* kResultsHeader =
    "family,scheme,rankFraction,leafFraction,samplesPerClass,normStorage,normProjection,"
    "meanError,stdError,seed";

std::string results_csv(const std::vector<ResultRow>& rows);
std::string results_sidecar(const std::vector<ResultRow>& rows, const ExperimentConfig& config,
                            const std::string& command);

// Writes `csv_path` and the sidecar next to it (same stem, .json).
void emit_results(const std::vector<ResultRow>& rows, const ExperimentConfig& config,
                  const std::string& command, const std::filesystem::path& csv_path);
std::filesystem::path sidecar_path(const std::filesystem::path& csv_path);

// Library spec from a JSON object with "family", optional "scheme", "tree",
// "centering", and either absolute "ranks" or "rank_fraction" (+ "leaf_fraction"
// for HT/TT). Fractions resolve against the smallest class of `dataset`.
LibrarySpec library_spec_from_json(const std::string& text, const Dataset& dataset);

// Costs of every family/scheme for a shape with leaf rank r and internal rank r'.
struct CostRow {
  Family family;
  Scheme scheme;
  CostReport report;
  std::optional<FormulaCost> formula;  // order-4 tensors with equal I_i
};

std::vector<CostRow> cost_table(const Shape& shape, std::size_t leaf_rank,
                                std::size_t internal_rank);
std::string cost_table_csv(const std::vector<CostRow>& rows);

}  // namespace tsm
