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
#include <optional>
#include <vector>

#include "tsm/models.hpp"

namespace tsm {

// Scalars stored and multiply-accumulates spent projecting one test point.
// A product of an m x k matrix with a k x p matrix counts m * k * p; forming
// a Kronecker product counts one multiply per output entry; a projection
// energy counts one multiply per coefficient.
struct CostReport {
  std::uint64_t storage_scalars = 0;
  std::uint64_t projection_macs = 0;
  std::uint64_t ambient_dimension = 1;  // prod I_i

  double normalized_storage() const {
    return static_cast<double>(storage_scalars) / static_cast<double>(ambient_dimension);
  }
  double normalized_projection() const {
    return static_cast<double>(projection_macs) / static_cast<double>(ambient_dimension);
  }
};

// Shapes and ranks only. Tucker layouts have no tree and one rank per axis;
// hierarchical layouts carry one rank per tree node (root ignored).
struct ModelLayout {
  Shape shape;
  std::optional<DimensionTree> tree;
  std::vector<std::size_t> ranks;
};

ModelLayout layout_of(const SubspaceModel& model);

CostReport cost_layout(const ModelLayout& layout, Scheme scheme);
CostReport cost_general(const SubspaceModel& model, Scheme scheme);

// Closed forms for an order-4 tensor with every I_i = n.
struct FormulaCost {
  std::uint64_t storage = 0;
  std::uint64_t projection = 0;

  friend bool operator==(const FormulaCost&, const FormulaCost&) = default;
};

// Leaf bases n x r: storage 4nr, projection n^4 r + n^3 r^2 + n^2 r^3 + n r^4 + r^4.
FormulaCost cost_formula_tucker(std::uint64_t n, std::uint64_t r);
// Stored U_{12}, U_{34} of n^2 x r': storage 2n^2 r',
// projection n^4 r' + n^2 r'^2 + r'^2.
FormulaCost cost_formula_hier1(std::uint64_t n, std::uint64_t rp);
// Leaves n x r and transfers r^2 x r': storage 4nr + 2r^2 r',
// projection n^4 r' + n^2 r'^2 + r'^2 + 2n^2 r^2 + 2n^2 r^2 r'.
FormulaCost cost_formula_hier2(std::uint64_t n, std::uint64_t r, std::uint64_t rp);
// U_{123} of n^3 x r' and U_4 of n x r: storage n^3 r' + nr,
// projection n^4 r + n^3 r r'.
FormulaCost cost_formula_tt(std::uint64_t n, std::uint64_t r, std::uint64_t rp);

}  // namespace tsm
