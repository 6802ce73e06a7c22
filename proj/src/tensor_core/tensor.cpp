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

#include "nrqc/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include <Eigen/Core>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include "nrqc/errors.hpp"

namespace nrqc {

std::size_t shape_volume(const Shape& shape) {
  std::size_t v = 1;
  for (std::size_t e : shape) {
    if (e == 0) throw DimensionError("tensor extents must be >= 1");
    v *= e;
  }
  return v;
}

template <typename T>
BasicTensor<T>::BasicTensor(Shape shape) : shape_(std::move(shape)), data_(shape_volume(shape_), T{}) {}

template <typename T>
BasicTensor<T>::BasicTensor(Shape shape, std::vector<T> data) : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_volume(shape_) != data_.size()) {
    throw DimensionError(fmt::format("shape {} needs {} entries, got {}", shape_, shape_volume(shape_), data_.size()));
  }
}

template <typename T>
BasicTensor<T> BasicTensor<T>::identity(std::size_t n) {
  BasicTensor t({n, n});
  for (std::size_t i = 0; i < n; ++i) t.data_[i * n + i] = T{1};
  return t;
}

template <typename T>
std::size_t BasicTensor<T>::offset(std::span<const std::size_t> index) const {
  if (index.size() != shape_.size()) {
    throw DimensionError(fmt::format("index of rank {} for tensor of rank {}", index.size(), shape_.size()));
  }
  std::size_t off = 0;
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= shape_[k]) throw DimensionError("tensor index out of range");
    off = off * shape_[k] + index[k];
  }
  return off;
}

template <typename T>
BasicTensor<T> BasicTensor<T>::reshaped(Shape shape) const& {
  return BasicTensor(std::move(shape), data_);
}

template <typename T>
BasicTensor<T> BasicTensor<T>::reshaped(Shape shape) && {
  return BasicTensor(std::move(shape), std::move(data_));
}

template <typename T>
BasicTensor<T> BasicTensor<T>::permuted(std::span<const std::size_t> perm) const {
  const std::size_t r = rank();
  if (perm.size() != r) throw DimensionError("permutation rank mismatch");
  std::vector<bool> seen(r, false);
  for (std::size_t p : perm) {
    if (p >= r || seen[p]) throw DimensionError("invalid permutation");
    seen[p] = true;
  }
  Shape new_shape(r);
  for (std::size_t k = 0; k < r; ++k) new_shape[k] = shape_[perm[k]];
  if (std::is_sorted(perm.begin(), perm.end())) return BasicTensor(new_shape, data_);

  // Strides of the source, listed in destination axis order.
  std::vector<std::size_t> src_stride(r);
  {
    std::vector<std::size_t> stride(r, 1);
    for (std::size_t k = r; k-- > 1;) stride[k - 1] = stride[k] * shape_[k];
    for (std::size_t k = 0; k < r; ++k) src_stride[k] = stride[perm[k]];
  }
  BasicTensor out(new_shape);
  std::vector<std::size_t> counter(r, 0);
  std::size_t src = 0;
  for (std::size_t dst = 0; dst < out.data_.size(); ++dst) {
    out.data_[dst] = data_[src];
    for (std::size_t k = r; k-- > 0;) {
      if (++counter[k] < new_shape[k]) {
        src += src_stride[k];
        break;
      }
      src -= src_stride[k] * (new_shape[k] - 1);
      counter[k] = 0;
    }
  }
  return out;
}

template <typename T>
BasicTensor<T>& BasicTensor<T>::operator*=(T factor) {
  for (T& x : data_) x *= factor;
  return *this;
}

template <typename T>
double BasicTensor<T>::frobenius_norm2() const {
  double s = 0.0;
  for (const T& x : data_) s += std::norm(x);
  return s;
}

namespace {

template <typename T>
using RowMatrixT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename T>
void gemm(std::size_t m, std::size_t n, std::size_t k, const T* a, const T* b, T* c) {
  using Map = Eigen::Map<RowMatrixT<T>>;
  using ConstMap = Eigen::Map<const RowMatrixT<T>>;
  const auto im = static_cast<Eigen::Index>(m), in = static_cast<Eigen::Index>(n), ik = static_cast<Eigen::Index>(k);
  Map(c, im, in).noalias() = ConstMap(a, im, ik) * ConstMap(b, ik, in);
}

}  // namespace

template <typename T>
BasicTensor<T> matmul(const BasicTensor<T>& a, const BasicTensor<T>& b) {
  if (a.rank() != 2 || b.rank() != 2) throw DimensionError("matmul needs rank-2 tensors");
  if (a.extent(1) != b.extent(0)) {
    throw DimensionError(fmt::format("matmul inner extents {} vs {}", a.extent(1), b.extent(0)));
  }
  BasicTensor<T> c({a.extent(0), b.extent(1)});
  gemm(a.extent(0), b.extent(1), a.extent(1), a.raw(), b.raw(), c.raw());
  return c;
}

template <typename T>
BasicTensor<T> contract(const BasicTensor<T>& a, const BasicTensor<T>& b, const IndexPairs& pairs) {
  std::vector<bool> a_used(a.rank(), false), b_used(b.rank(), false);
  std::size_t inner = 1;
  for (auto [ia, ib] : pairs) {
    if (ia >= a.rank() || ib >= b.rank() || a_used[ia] || b_used[ib]) {
      throw DimensionError("invalid contraction index pair");
    }
    if (a.extent(ia) != b.extent(ib)) {
      throw DimensionError(fmt::format("contracted extents differ: {} vs {}", a.extent(ia), b.extent(ib)));
    }
    a_used[ia] = b_used[ib] = true;
    inner *= a.extent(ia);
  }
  std::vector<std::size_t> a_perm, b_perm;
  Shape out_shape;
  std::size_t a_free = 1, b_free = 1;
  for (std::size_t k = 0; k < a.rank(); ++k) {
    if (!a_used[k]) {
      a_perm.push_back(k);
      out_shape.push_back(a.extent(k));
      a_free *= a.extent(k);
    }
  }
  for (auto [ia, ib] : pairs) {
    a_perm.push_back(ia);
    b_perm.push_back(ib);
  }
  for (std::size_t k = 0; k < b.rank(); ++k) {
    if (!b_used[k]) {
      b_perm.push_back(k);
      out_shape.push_back(b.extent(k));
      b_free *= b.extent(k);
    }
  }
  const BasicTensor<T> am = a.permuted(a_perm);
  const BasicTensor<T> bm = b.permuted(b_perm);
  BasicTensor<T> out(out_shape);
  gemm(a_free, b_free, inner, am.raw(), bm.raw(), out.raw());
  return out;
}

template class BasicTensor<double>;
template class BasicTensor<Complex>;
template BasicTensor<double> contract(const BasicTensor<double>&, const BasicTensor<double>&, const IndexPairs&);
template BasicTensor<Complex> contract(const BasicTensor<Complex>&, const BasicTensor<Complex>&, const IndexPairs&);
template BasicTensor<double> matmul(const BasicTensor<double>&, const BasicTensor<double>&);
template BasicTensor<Complex> matmul(const BasicTensor<Complex>&, const BasicTensor<Complex>&);

}  // namespace nrqc
