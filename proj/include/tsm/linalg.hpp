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

#include "tsm/tensor.hpp"

namespace tsm {

class Rng;

struct SvdResult {
  Matrix u;  // left singular vectors, orthonormal columns
  Vector s;  // non-increasing, non-negative
  Matrix v;  // right singular vectors, orthonormal columns
};

// Leading `rank` singular triplets of `m`. Each left singular vector is signed
// so its largest-magnitude entry (earliest on ties) is positive, and the
// matching right vector is flipped with it.
SvdResult truncated_svd(const Matrix& m, std::size_t rank);

// Same as truncated_svd but without forming V. Used by the learners, whose
// unfoldings can be very wide.
SvdResult leading_left_singular_vectors(const Matrix& m, std::size_t rank);

// Applies the sign rule above to every column of `u`, flipping the same
// columns of `companion` when given.
void fix_column_signs(Matrix& u, Matrix* companion = nullptr);

// ||U^T U - I||_F
double orthonormality_defect(const Matrix& u);

// Number of singular values above 1e-12 * s.max().
std::size_t effective_rank(const Vector& s);

// Random rows x cols matrix with orthonormal columns (thin Q of a Gaussian
// matrix). Requires cols <= rows.
Matrix random_orthonormal(std::size_t rows, std::size_t cols, Rng& rng);

}  // namespace tsm
