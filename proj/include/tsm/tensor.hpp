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
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tsm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Shape = std::vector<std::size_t>;

std::size_t shape_size(const Shape& shape);
std::string shape_to_string(const Shape& shape);

// Ordered, duplicate-free set of 0-based axis indices.
class AxisSet {
 public:
  AxisSet() = default;
  AxisSet(std::initializer_list<std::size_t> axes);
  explicit AxisSet(std::vector<std::size_t> axes);

  // {first, first + 1, ..., last - 1}
  static AxisSet range(std::size_t first, std::size_t last);

  std::size_t size() const noexcept { return axes_.size(); }
  bool empty() const noexcept { return axes_.empty(); }
  std::size_t front() const { return axes_.front(); }
  std::size_t back() const { return axes_.back(); }
  bool contains(std::size_t axis) const;
  const std::vector<std::size_t>& axes() const noexcept { return axes_; }
  auto begin() const noexcept { return axes_.begin(); }
  auto end() const noexcept { return axes_.end(); }

  // Axes of [0, order) not in this set.
  AxisSet complement(std::size_t order) const;
  AxisSet merged(const AxisSet& other) const;

  std::string to_string() const;

  friend bool operator==(const AxisSet&, const AxisSet&) = default;

 private:
  std::vector<std::size_t> axes_;
};

// Order-n real array. Entries are linearized lexicographically with the first
// axis varying slowest; reshape, unfold and kron all share this convention.
class DenseTensor {
 public:
  explicit DenseTensor(Shape shape);
  DenseTensor(Shape shape, std::vector<double> data);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t order() const noexcept { return shape_.size(); }
  std::size_t dim(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> mutable_data() noexcept { return data_; }

  std::size_t offset(std::span<const std::size_t> index) const;
  double operator()(std::span<const std::size_t> index) const {
    return data_[offset(index)];
  }
  double at(std::initializer_list<std::size_t> index) const;

  friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

// Matricization with the axes in `rows` combined into the row index and the
// remaining axes into the column index, both lexicographic.
Matrix unfold(const DenseTensor& t, const AxisSet& rows);

// Inverse of unfold for a tensor of the given shape.
DenseTensor fold(const Matrix& m, const AxisSet& rows, const Shape& shape);

// Block (i, j) of the result is a(i, j) * b.
Matrix kron(const Matrix& a, const Matrix& b);

DenseTensor reshape(const DenseTensor& t, const Shape& new_shape);

double frobenius_norm(const DenseTensor& t);
double squared_norm(const DenseTensor& t);

DenseTensor operator-(const DenseTensor& a, const DenseTensor& b);
DenseTensor operator+(const DenseTensor& a, const DenseTensor& b);
DenseTensor operator*(double alpha, const DenseTensor& t);

// Flat data as a column vector, first axis slowest.
Vector vectorize(const DenseTensor& t);

}  // namespace tsm
