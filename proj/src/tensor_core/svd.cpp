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

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>
#include <fmt/format.h>

#include "nrqc/errors.hpp"
#include "nrqc/tensor.hpp"

namespace nrqc {
namespace {

template <typename T>
using RowMatrixT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using ColMatrixT = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

// Thin divide-and-conquer SVD of a row-major rows x cols block. Fills s
// (descending), u (rows x k, row-major) and vt (k x cols, row-major) when
// vectors are requested.
template <typename T>
void thin_svd(const T* a, std::size_t rows, std::size_t cols, std::vector<double>& s, std::vector<T>* u,
              std::vector<T>* vt) {
  const auto ir = static_cast<Eigen::Index>(rows), ic = static_cast<Eigen::Index>(cols);
  const ColMatrixT<T> m = Eigen::Map<const RowMatrixT<T>>(a, ir, ic);
  const unsigned options = (u != nullptr) ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0U;
  Eigen::BDCSVD<ColMatrixT<T>> svd(m, options);
  if (svd.info() != Eigen::Success) throw NumericError("SVD failed to converge");
  const Eigen::Index k = svd.singularValues().size();
  s.assign(svd.singularValues().data(), svd.singularValues().data() + k);
  if (u != nullptr) {
    u->resize(rows * static_cast<std::size_t>(k));
    vt->resize(static_cast<std::size_t>(k) * cols);
    Eigen::Map<RowMatrixT<T>>(u->data(), ir, k) = svd.matrixU();
    Eigen::Map<RowMatrixT<T>>(vt->data(), k, ic) = svd.matrixV().adjoint();
  }
}

template <typename T>
void check_finite(const BasicTensor<T>& m) {
  for (const T& x : m.data()) {
    if (!std::isfinite(std::abs(x))) throw NumericError("SVD input contains non-finite entries");
  }
}

}  // namespace

template <typename T>
TruncatedSvd<T> svd_truncate(const BasicTensor<T>& m, std::size_t chi_max) {
  if (chi_max < 1) throw ArgumentError("svd_truncate: chi_max must be >= 1");
  if (m.rank() != 2) throw DimensionError(fmt::format("svd_truncate needs a rank-2 tensor, got rank {}", m.rank()));
  check_finite(m);
  const std::size_t rows = m.extent(0);
  const std::size_t cols = m.extent(1);
  const std::size_t k = std::min(rows, cols);

  std::vector<double> s;
  std::vector<T> u;
  std::vector<T> vt;
  thin_svd(m.raw(), rows, cols, s, &u, &vt);

  // The solver already returns descending values; a stable index sort keeps the
  // choice among ties deterministic if that ever changes.
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  if (!std::is_sorted(s.begin(), s.end(), std::greater<>())) {
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return s[x] > s[y]; });
  }

  const double largest = k > 0 ? s[order[0]] : 0.0;
  std::size_t nonzero = 0;
  for (std::size_t j = 0; j < k; ++j) {
    if (s[order[j]] > kSingularValueFloor * largest) ++nonzero;
  }
  const std::size_t kept = std::max<std::size_t>(1, std::min(chi_max, nonzero));

  TruncatedSvd<T> out;
  out.left = BasicTensor<T>({rows, kept});
  out.right = BasicTensor<T>({kept, cols});
  out.singular_values.resize(kept);
  for (std::size_t j = 0; j < kept; ++j) {
    const std::size_t src = order[j];
    out.singular_values[j] = (j < nonzero) ? s[src] : 0.0;
    for (std::size_t r = 0; r < rows; ++r) out.left.raw()[r * kept + j] = u[r * k + src];
    std::copy_n(vt.begin() + static_cast<std::ptrdiff_t>(src * cols), cols, out.right.raw() + j * cols);
  }
  double discarded = 0.0;
  // Values under the floor are exact zeros, so only genuine values count as discarded.
  for (std::size_t j = kept; j < nonzero; ++j) discarded += s[order[j]] * s[order[j]];
  out.discarded_weight = discarded;
  return out;
}

template <typename T>
std::vector<double> singular_values(const BasicTensor<T>& m) {
  if (m.rank() != 2) throw DimensionError("singular_values needs a rank-2 tensor");
  check_finite(m);
  const std::size_t rows = m.extent(0);
  const std::size_t cols = m.extent(1);
  std::vector<double> s;
  thin_svd<T>(m.raw(), rows, cols, s, nullptr, nullptr);
  std::sort(s.begin(), s.end(), std::greater<>());
  return s;
}

template TruncatedSvd<double> svd_truncate(const BasicTensor<double>&, std::size_t);
template TruncatedSvd<Complex> svd_truncate(const BasicTensor<Complex>&, std::size_t);
template std::vector<double> singular_values(const BasicTensor<double>&);
template std::vector<double> singular_values(const BasicTensor<Complex>&);

}  // namespace nrqc
