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

#include "tsm/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tsm/error.hpp"

namespace tsm {

std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                         std::multiplies<>());
}

std::string shape_to_string(const Shape& shape) {
  std::ostringstream os;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  return os.str();
}

AxisSet::AxisSet(std::initializer_list<std::size_t> axes)
    : AxisSet(std::vector<std::size_t>(axes)) {}

AxisSet::AxisSet(std::vector<std::size_t> axes) : axes_(std::move(axes)) {
  std::sort(axes_.begin(), axes_.end());
  if (std::adjacent_find(axes_.begin(), axes_.end()) != axes_.end())
    fail(ErrorCode::InvalidArgument, "axis set contains duplicates");
}

AxisSet AxisSet::range(std::size_t first, std::size_t last) {
  std::vector<std::size_t> axes;
  for (std::size_t a = first; a < last; ++a) axes.push_back(a);
  return AxisSet(std::move(axes));
}

bool AxisSet::contains(std::size_t axis) const {
  return std::binary_search(axes_.begin(), axes_.end(), axis);
}

AxisSet AxisSet::complement(std::size_t order) const {
  std::vector<std::size_t> rest;
  for (std::size_t a = 0; a < order; ++a)
    if (!contains(a)) rest.push_back(a);
  return AxisSet(std::move(rest));
}

AxisSet AxisSet::merged(const AxisSet& other) const {
  std::vector<std::size_t> all = axes_;
  all.insert(all.end(), other.axes_.begin(), other.axes_.end());
  return AxisSet(std::move(all));
}

std::string AxisSet::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < axes_.size(); ++i) {
    if (i) os << ',';
    os << axes_[i];
  }
  os << ')';
  return os.str();
}

namespace {

void check_shape(const Shape& shape) {
  if (shape.empty()) fail(ErrorCode::InvalidArgument, "tensor order must be >= 1");
  for (auto d : shape)
    if (d == 0) fail(ErrorCode::InvalidArgument, "tensor dimensions must be >= 1");
}

// Strides of `axes` inside the lexicographic linearization of that group.
std::vector<std::size_t> group_strides(const Shape& shape, const AxisSet& axes,
                                       std::vector<std::size_t>& stride_of) {
  std::size_t stride = 1;
  std::vector<std::size_t> out(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    out[k] = stride;
    stride_of[axes.axes()[k]] = stride;
    stride *= shape[axes.axes()[k]];
  }
  return out;
}

struct Split {
  std::vector<std::size_t> row_stride;  // per axis, 0 for column axes
  std::vector<std::size_t> col_stride;  // per axis, 0 for row axes
  std::size_t rows = 1;
  std::size_t cols = 1;
};

Split make_split(const Shape& shape, const AxisSet& rows) {
  const std::size_t n = shape.size();
  if (rows.empty()) fail(ErrorCode::InvalidArgument, "unfolding axis set is empty");
  if (rows.back() >= n)
    fail(ErrorCode::InvalidArgument,
         "axis " + std::to_string(rows.back()) + " out of range for order " +
             std::to_string(n));
  if (rows.size() == n)
    fail(ErrorCode::InvalidArgument, "unfolding axis set must be a strict subset");
  const AxisSet cols = rows.complement(n);
  Split s;
  s.row_stride.assign(n, 0);
  s.col_stride.assign(n, 0);
  group_strides(shape, rows, s.row_stride);
  group_strides(shape, cols, s.col_stride);
  for (auto a : rows) s.rows *= shape[a];
  for (auto a : cols) s.cols *= shape[a];
  return s;
}

// Visits every entry in linear order with its (row, col) position.
template <class F>
void for_each_split(const Shape& shape, const Split& split, F&& f) {
  const std::size_t n = shape.size();
  std::vector<std::size_t> idx(n, 0);
  std::size_t row = 0, col = 0;
  const std::size_t total = shape_size(shape);
  for (std::size_t flat = 0; flat < total; ++flat) {
    f(flat, row, col);
    for (std::size_t a = n; a-- > 0;) {
      row += split.row_stride[a];
      col += split.col_stride[a];
      if (++idx[a] < shape[a]) break;
      row -= split.row_stride[a] * shape[a];
      col -= split.col_stride[a] * shape[a];
      idx[a] = 0;
    }
  }
}

}  // namespace

DenseTensor::DenseTensor(Shape shape) : shape_(std::move(shape)) {
  check_shape(shape_);
  data_.assign(shape_size(shape_), 0.0);
}

DenseTensor::DenseTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  check_shape(shape_);
  if (data_.size() != shape_size(shape_))
    fail(ErrorCode::ShapeMismatch,
         "tensor of shape " + shape_to_string(shape_) + " needs " +
             std::to_string(shape_size(shape_)) + " entries, got " +
             std::to_string(data_.size()));
}

std::size_t DenseTensor::offset(std::span<const std::size_t> index) const {
  if (index.size() != shape_.size())
    fail(ErrorCode::ShapeMismatch, "index order does not match tensor order");
  std::size_t off = 0;
  for (std::size_t a = 0; a < shape_.size(); ++a) {
    if (index[a] >= shape_[a]) fail(ErrorCode::InvalidArgument, "index out of range");
    off = off * shape_[a] + index[a];
  }
  return off;
}

double DenseTensor::at(std::initializer_list<std::size_t> index) const {
  return data_[offset(std::span<const std::size_t>(index.begin(), index.size()))];
}

Matrix unfold(const DenseTensor& t, const AxisSet& rows) {
  const Split split = make_split(t.shape(), rows);
  Matrix m(static_cast<Eigen::Index>(split.rows), static_cast<Eigen::Index>(split.cols));
  const auto data = t.data();
  for_each_split(t.shape(), split, [&](std::size_t flat, std::size_t r, std::size_t c) {
    m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = data[flat];
  });
  return m;
}

DenseTensor fold(const Matrix& m, const AxisSet& rows, const Shape& shape) {
  check_shape(shape);
  const Split split = make_split(shape, rows);
  if (static_cast<std::size_t>(m.rows()) != split.rows ||
      static_cast<std::size_t>(m.cols()) != split.cols)
    fail(ErrorCode::ShapeMismatch,
         "matrix " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
             " cannot fold into " + shape_to_string(shape) + " along " +
             rows.to_string());
  DenseTensor t(shape);
  auto data = t.mutable_data();
  for_each_split(shape, split, [&](std::size_t flat, std::size_t r, std::size_t c) {
    data[flat] = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  });
  return t;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DenseTensor reshape(const DenseTensor& t, const Shape& new_shape) {
  check_shape(new_shape);
  if (shape_size(new_shape) != t.size())
    fail(ErrorCode::ShapeMismatch, "cannot reshape " + shape_to_string(t.shape()) +
                                       " into " + shape_to_string(new_shape));
  return DenseTensor(new_shape, std::vector<double>(t.data().begin(), t.data().end()));
}

double squared_norm(const DenseTensor& t) {
  double sum = 0.0;
  for (double v : t.data()) sum += v * v;
  return sum;
}

double frobenius_norm(const DenseTensor& t) { return std::sqrt(squared_norm(t)); }

namespace {

template <class Op>
DenseTensor zip(const DenseTensor& a, const DenseTensor& b, Op op) {
  if (a.shape() != b.shape())
    fail(ErrorCode::ShapeMismatch, "shape " + shape_to_string(a.shape()) +
                                       " does not match " + shape_to_string(b.shape()));
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a.data()[i], b.data()[i]);
  return DenseTensor(a.shape(), std::move(out));
}

}  // namespace

DenseTensor operator-(const DenseTensor& a, const DenseTensor& b) {
  return zip(a, b, std::minus<>());
}

DenseTensor operator+(const DenseTensor& a, const DenseTensor& b) {
  return zip(a, b, std::plus<>());
}

DenseTensor operator*(double alpha, const DenseTensor& t) {
  std::vector<double> out(t.data().begin(), t.data().end());
  for (double& v : out) v *= alpha;
  return DenseTensor(t.shape(), std::move(out));
}

Vector vectorize(const DenseTensor& t) {
  return Eigen::Map<const Vector>(t.data().data(), static_cast<Eigen::Index>(t.size()));
}

}  // namespace tsm
