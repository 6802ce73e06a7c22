// Copyright 2026 The nrqc Authors
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

// Dense complex/real multi-index arrays.
//
// Storage is row-major: for shape (d0, d1, ..., dk) the entry (i0, ..., ik)
// lives at offset ((i0 * d1 + i1) * d2 + i2) ... . Every module that
// reshapes tensors relies on this linearization.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

namespace nrqc {

using Complex = std::complex<double>;
using Shape = std::vector<std::size_t>;
using IndexPairs = std::vector<std::pair<std::size_t, std::size_t>>;

std::size_t shape_volume(const Shape& shape);

template <typename T>
class BasicTensor {
 public:
  using value_type = T;

  /// Rank-0 tensor holding a single zero.
  BasicTensor() : data_(1, T{}) {}
  explicit BasicTensor(Shape shape);
  BasicTensor(Shape shape, std::vector<T> data);

  static BasicTensor zeros(Shape shape) { return BasicTensor(std::move(shape)); }
  static BasicTensor identity(std::size_t n);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t extent(std::size_t axis) const { return shape_.at(axis); }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }
  T* raw() noexcept { return data_.data(); }
  const T* raw() const noexcept { return data_.data(); }

  std::size_t offset(std::span<const std::size_t> index) const;
  T& at(std::span<const std::size_t> index) { return data_[offset(index)]; }
  const T& at(std::span<const std::size_t> index) const { return data_[offset(index)]; }
  T& operator()(std::initializer_list<std::size_t> index) {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }
  const T& operator()(std::initializer_list<std::size_t> index) const {
    return at(std::span<const std::size_t>(index.begin(), index.size()));
  }

  /// Same entries, new shape (volume must match).
  BasicTensor reshaped(Shape shape) const&;
  BasicTensor reshaped(Shape shape) &&;
  /// result.shape()[k] == shape()[perm[k]].
  BasicTensor permuted(std::span<const std::size_t> perm) const;
  BasicTensor permuted(std::initializer_list<std::size_t> perm) const {
    return permuted(std::span<const std::size_t>(perm.begin(), perm.size()));
  }

  BasicTensor& operator*=(T factor);
  double frobenius_norm2() const;

 private:
  Shape shape_;
  std::vector<T> data_;
};

using DenseTensor = BasicTensor<Complex>;
using RealTensor = BasicTensor<double>;

template <typename T>
BasicTensor<T> operator*(T factor, BasicTensor<T> t) {
  t *= factor;
  return t;
}

/// Sum over the paired axes. Result axes: free axes of `a` in order, then
/// free axes of `b` in order. Throws DimensionError on mismatched extents.
template <typename T>
BasicTensor<T> contract(const BasicTensor<T>& a, const BasicTensor<T>& b, const IndexPairs& pairs);

/// Row-major matrix product c = a * b for rank-2 tensors.
template <typename T>
BasicTensor<T> matmul(const BasicTensor<T>& a, const BasicTensor<T>& b);

template <typename T>
struct TruncatedSvd {
  BasicTensor<T> left;                  // m x k, orthonormal columns
  std::vector<double> singular_values;  // k values, descending
  BasicTensor<T> right;                 // k x n, orthonormal rows
  double discarded_weight = 0.0;        // sum of squares of dropped values
};

/// Relative floor below which singular values are treated as exact zeros.
inline constexpr double kSingularValueFloor = 1e-14;

/// Thin SVD of a rank-2 tensor keeping at most `chi_max` values. At least one
/// value is always kept so that the factors have valid shapes.
template <typename T>
TruncatedSvd<T> svd_truncate(const BasicTensor<T>& m, std::size_t chi_max);

/// Singular values only (descending), no truncation.
template <typename T>
std::vector<double> singular_values(const BasicTensor<T>& m);

}  // namespace nrqc
