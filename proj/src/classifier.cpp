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

#include "tsm/classifier.hpp"

#include "tsm/error.hpp"

namespace tsm {

namespace {

DenseTensor mean_of(std::span<const DenseTensor* const> samples) {
  DenseTensor sum(samples.front()->shape());
  auto acc = sum.mutable_data();
  for (const DenseTensor* s : samples) {
    const auto d = s->data();
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += d[i];
  }
  const double scale = 1.0 / static_cast<double>(samples.size());
  for (double& v : acc) v *= scale;
  return sum;
}

}  // namespace

std::string to_string(Centering c) {
  switch (c) {
    case Centering::Global: return "global";
    case Centering::PerClass: return "per-class";
    case Centering::None: return "none";
  }
  return "?";
}

Centering centering_from_string(const std::string& s) {
  if (s == "global") return Centering::Global;
  if (s == "per-class") return Centering::PerClass;
  if (s == "none") return Centering::None;
  fail(ErrorCode::InvalidArgument, "unknown centering mode '" + s + "'");
}

DimensionTree default_tree(Family family, std::size_t order) {
  return family == Family::TensorTrain ? tt_tree(order) : balanced_tree(order);
}

DenseTensor ClassLibrary::centered(const DenseTensor& x, const std::string& label) const {
  switch (centering) {
    case Centering::Global: return x - *mean;
    case Centering::PerClass: return x - class_means.at(label);
    case Centering::None: break;
  }
  return x;
}

ClassLibrary train_library(std::span<const LabeledTensor> train, const LibrarySpec& spec) {
  if (train.empty()) fail(ErrorCode::InvalidArgument, "empty training set");
  if (!scheme_supports(spec.family, spec.scheme))
    fail(ErrorCode::InvalidArgument, to_string(spec.scheme) + " cannot project " +
                                         to_string(spec.family) + " models");
  const Shape& shape = train.front().tensor.shape();

  std::map<std::string, std::vector<const DenseTensor*>> by_class;
  std::vector<const DenseTensor*> all;
  for (const auto& s : train) {
    if (s.tensor.shape() != shape)
      fail(ErrorCode::ShapeMismatch, "training tensors have different shapes");
    by_class[s.label].push_back(&s.tensor);
    all.push_back(&s.tensor);
  }

  ClassLibrary lib;
  lib.shape = shape;
  lib.family = spec.family;
  lib.scheme = spec.scheme;
  lib.ranks = spec.ranks;
  lib.centering = spec.centering;
  if (spec.family != Family::Tucker) {
    lib.tree = spec.tree ? *spec.tree : default_tree(spec.family, shape.size());
    if (spec.family == Family::TensorTrain && !lib.tree->is_linear())
      fail(ErrorCode::InvalidArgument, "tensor-train family needs a linear tree");
  }

  if (spec.centering == Centering::Global) lib.mean = mean_of(all);

  for (const auto& [label, members] : by_class) {
    if (spec.centering == Centering::PerClass) lib.class_means.emplace(label, mean_of(members));
    std::vector<DenseTensor> centered;
    centered.reserve(members.size());
    for (const DenseTensor* m : members) centered.push_back(lib.centered(*m, label));
    try {
      if (spec.family == Family::Tucker)
        lib.models.emplace(label, learn_tucker(centered, spec.ranks));
      else
        lib.models.emplace(label, learn_hierarchical(centered, *lib.tree, spec.ranks));
    } catch (const Error& e) {
      throw Error(e.code(), "class '" + label + "': " + e.what());
    }
  }
  return lib;
}

std::vector<std::pair<std::string, double>> class_energies(const ClassLibrary& library,
                                                           const DenseTensor& x) {
  if (x.shape() != library.shape)
    fail(ErrorCode::ShapeMismatch, "input shape " + shape_to_string(x.shape()) +
                                       " does not match library shape " +
                                       shape_to_string(library.shape));
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [label, model] : library.models)
    out.emplace_back(label, projection_energy(model, library.scheme, library.centered(x, label)));
  return out;
}

std::string classify(const ClassLibrary& library, const DenseTensor& x) {
  const auto energies = class_energies(library, x);
  if (energies.empty()) fail(ErrorCode::InvalidArgument, "library has no classes");
  std::size_t best = 0;
  for (std::size_t i = 1; i < energies.size(); ++i)
    if (energies[i].second > energies[best].second) best = i;
  return energies[best].first;
}

EvaluationResult evaluate(const ClassLibrary& library, std::span<const LabeledTensor> test) {
  if (test.empty()) fail(ErrorCode::InvalidArgument, "empty test set");
  EvaluationResult result;
  for (const auto& s : test) {
    if (!library.models.count(s.label))
      fail(ErrorCode::InvalidArgument, "test label '" + s.label + "' is not in the library");
    const std::string predicted = classify(library, s.tensor);
    ++result.confusion[{s.label, predicted}];
    ++result.total;
    if (predicted != s.label) ++result.misclassified;
  }
  result.error_rate =
      static_cast<double>(result.misclassified) / static_cast<double>(result.total);
  result.per_run_rates.push_back(result.error_rate);
  return result;
}

}  // namespace tsm
