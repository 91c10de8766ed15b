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

#include "tsm/linalg.hpp"

#include <cmath>
#include <string>

#include "tsm/error.hpp"
#include "tsm/rng.hpp"

namespace tsm {

namespace {

void check_svd_input(const Matrix& m, std::size_t rank) {
  const auto limit = static_cast<std::size_t>(std::min(m.rows(), m.cols()));
  if (rank < 1 || rank > limit)
    fail(ErrorCode::RankInfeasible,
         "rank " + std::to_string(rank) + " outside [1, " + std::to_string(limit) +
             "] for a " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
             " matrix");
  if (!m.allFinite()) fail(ErrorCode::Numeric, "matrix has non-finite entries");
}

}  // namespace

void fix_column_signs(Matrix& u, Matrix* v) {
  for (Eigen::Index k = 0; k < u.cols(); ++k) {
    Eigen::Index best = 0;
    double best_abs = -1.0;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      const double a = std::abs(u(i, k));
      if (a > best_abs) {
        best_abs = a;
        best = i;
      }
    }
    if (u(best, k) < 0.0) {
      u.col(k) = -u.col(k);
      if (v) v->col(k) = -v->col(k);
    }
  }
}

namespace {

SvdResult compute(const Matrix& m, std::size_t rank, bool want_v) {
  check_svd_input(m, rank);
  const auto r = static_cast<Eigen::Index>(rank);
  const unsigned options = want_v ? (Eigen::ComputeThinU | Eigen::ComputeThinV)
                                  : Eigen::ComputeThinU;
  // Wide unfoldings are reduced through an LQ step so the SVD only sees a
  // square rows x rows factor.
  if (!want_v && m.cols() > 2 * m.rows()) {
    Eigen::HouseholderQR<Matrix> qr(m.transpose());
    const Matrix l = qr.matrixQR()
                         .topRows(m.rows())
                         .triangularView<Eigen::Upper>()
                         .toDenseMatrix()
                         .transpose();
    Eigen::BDCSVD<Matrix> svd(l, Eigen::ComputeThinU);
    SvdResult out{svd.matrixU().leftCols(r), svd.singularValues().head(r), Matrix()};
    fix_column_signs(out.u, nullptr);
    return out;
  }
  Eigen::BDCSVD<Matrix> svd(m, options);
  SvdResult out{svd.matrixU().leftCols(r), svd.singularValues().head(r),
                want_v ? Matrix(svd.matrixV().leftCols(r)) : Matrix()};
  fix_column_signs(out.u, want_v ? &out.v : nullptr);
  return out;
}

}  // namespace

SvdResult truncated_svd(const Matrix& m, std::size_t rank) {
  return compute(m, rank, true);
}

SvdResult leading_left_singular_vectors(const Matrix& m, std::size_t rank) {
  return compute(m, rank, false);
}

double orthonormality_defect(const Matrix& u) {
  const Matrix g = u.transpose() * u - Matrix::Identity(u.cols(), u.cols());
  return g.norm();
}

std::size_t effective_rank(const Vector& s) {
  if (s.size() == 0) return 0;
  const double floor = 1e-12 * s.maxCoeff();
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > floor) ++count;
  return count;
}

Matrix random_orthonormal(std::size_t rows, std::size_t cols, Rng& rng) {
  if (cols < 1 || cols > rows)
    fail(ErrorCode::RankInfeasible, "cannot draw " + std::to_string(cols) +
                                        " orthonormal columns in dimension " +
                                        std::to_string(rows));
  Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < g.cols(); ++j)
    for (Eigen::Index i = 0; i < g.rows(); ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(g.rows(), g.cols());
  return q;
}

}  // namespace tsm
