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
#include <span>
#include <string>
#include <vector>

#include "tsm/classifier.hpp"

namespace tsm {

class Rng;

struct Dataset {
  Shape shape;
  // Image reshape factors: rows -> row_factors, cols -> col_factors, giving
  // tensor axes (row_factors..., col_factors...).
  std::vector<std::size_t> row_factors;
  std::vector<std::size_t> col_factors;
  std::vector<LabeledTensor> samples;

  std::vector<std::string> labels() const;  // sorted, unique
};

// Binary P5 with maxval <= 255; pixels scaled to [0, 1].
Matrix read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const Matrix& image);
// Comma-separated rows of reals, taken verbatim.
Matrix read_csv_matrix(const std::filesystem::path& path);
void write_csv_matrix(const std::filesystem::path& path, const Matrix& m);

// Reads .pgm or .csv by extension.
Matrix read_image(const std::filesystem::path& path);

DenseTensor image_to_tensor(const Matrix& image, std::span<const std::size_t> row_factors,
                            std::span<const std::size_t> col_factors);
Matrix tensor_to_image(const DenseTensor& t, std::size_t row_axes);

// Layout root/<label>/<file>. Files are visited in lexicographic order.
// Empty factor lists fall back to root/dataset.json when present.
Dataset load_image_dataset(const std::filesystem::path& root,
                           std::span<const std::size_t> row_factors,
                           std::span<const std::size_t> col_factors);

// Writes every sample as a CSV matrix (exact to 17 digits) plus dataset.json
// with the shape and factors, readable by load_image_dataset.
void save_dataset(const Dataset& dataset, const std::filesystem::path& root);

struct SyntheticSpec {
  std::size_t class_count = 4;
  Shape shape{8, 8, 8, 8};
  Family family = Family::TensorTrain;
  // Planted ranks as fractions of prod_{i in s} I_i (leaves) and of the same
  // ambient node size for internal nodes, capped by r_left * r_right.
  double leaf_fraction = 0.75;
  double internal_fraction = 0.25;
  std::optional<std::vector<std::size_t>> ranks;  // absolute override
  std::size_t samples_per_class = 20;
  // Noise norm relative to the signal norm of each sample.
  double noise = 0.0;
  // Axis-0 bases drawn from disjoint blocks of one orthonormal matrix, which
  // makes class subspaces mutually orthogonal.
  bool orthogonal_classes = false;
  std::uint64_t seed = 1;
};

std::string synthetic_label(std::size_t index, std::size_t class_count);

// Resolved planted ranks for `spec` (per axis for Tucker, per node otherwise).
std::vector<std::size_t> planted_ranks(const SyntheticSpec& spec);

TuckerModel random_tucker_model(const Shape& shape, std::span<const std::size_t> ranks, Rng& rng);
HtModel random_ht_model(const DimensionTree& tree, const Shape& shape,
                        std::span<const std::size_t> ranks, Rng& rng);
// Random coefficients mapped through the model.
DenseTensor random_subspace_sample(const SubspaceModel& model, Rng& rng);

Dataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace tsm
