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

#include "nrqc/density_mps.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>
#include <fmt/format.h>

#include "nrqc/errors.hpp"

namespace nrqc {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMap = Eigen::Map<RowMatrix>;
using ConstRowMap = Eigen::Map<const RowMatrix>;

RealTensor tensor_from(const Eigen::Ref<const RowMatrix>& m, Shape shape) {
  RealTensor t(std::move(shape));
  RowMap(t.raw(), m.rows(), m.cols()) = m;
  return t;
}

}  // namespace

Eigen::Matrix4cd pauli_basis() {
  Eigen::Matrix4cd b;
  for (int k = 0; k < 4; ++k) {
    const Eigen::Matrix2cd p = pauli(k);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) b(2 * i + j, k) = p(i, j) / std::sqrt(2.0);
    }
  }
  return b;
}

TransferMatrix pauli_transfer_matrix(const ChannelSuperOp& op) {
  // Reorder (i_a i_b)(j_a j_b) -> (i_a j_a)(i_b j_b).
  Matrix16cd site_major;
  auto site_index = [](int x) {
    const int ia = (x >> 3) & 1, ib = (x >> 2) & 1, ja = (x >> 1) & 1, jb = x & 1;
    return 4 * (2 * ia + ja) + (2 * ib + jb);
  };
  for (int x = 0; x < 16; ++x) {
    for (int y = 0; y < 16; ++y) site_major(site_index(x), site_index(y)) = op.matrix(x, y);
  }
  const Eigen::Matrix4cd b = pauli_basis();
  Matrix16cd bb;
  for (int va = 0; va < 4; ++va) {
    for (int vb = 0; vb < 4; ++vb) {
      for (int ka = 0; ka < 4; ++ka) {
        for (int kb = 0; kb < 4; ++kb) bb(4 * va + vb, 4 * ka + kb) = b(va, ka) * b(vb, kb);
      }
    }
  }
  const Matrix16cd t = bb.adjoint() * site_major * bb;
  const double scale = std::max(1.0, t.cwiseAbs().maxCoeff());
  if (t.imag().cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw ArgumentError("superoperator does not preserve Hermiticity");
  }
  return t.real();
}

const TransferMatrix& swap_transfer_matrix() {
  static const TransferMatrix swap = [] {
    TransferMatrix s = TransferMatrix::Zero();
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) s(4 * b + a, 4 * a + b) = 1.0;
    }
    return s;
  }();
  return swap;
}

TruncationReport& TruncationReport::operator+=(const TruncationReport& other) {
  discarded_weight += other.discarded_weight;
  max_bond = std::max(max_bond, other.max_bond);
  svd_count += other.svd_count;
  return *this;
}

DensityMps::DensityMps(const LatticeSpec& lattice, std::size_t chi_max)
    : lattice_(lattice), site_map_(lattice), chi_max_(chi_max) {
  if (chi_max < 1) throw ArgumentError("chi_max must be >= 1");
  if (lattice.num_qubits() < 1) throw ArgumentError("lattice has no sites");
}

DensityMps DensityMps::zero_state(const LatticeSpec& lattice, std::size_t chi_max) {
  Eigen::Matrix2cd zero = Eigen::Matrix2cd::Zero();
  zero(0, 0) = 1.0;
  return product_state(lattice, chi_max, std::vector<Eigen::Matrix2cd>(lattice.num_qubits(), zero));
}

DensityMps DensityMps::product_state(const LatticeSpec& lattice, std::size_t chi_max,
                                     const std::vector<Eigen::Matrix2cd>& ops) {
  DensityMps state(lattice, chi_max);
  if (ops.size() != lattice.num_qubits()) throw ArgumentError("product_state: one operator per site required");
  const Eigen::Matrix4cd b = pauli_basis();
  double scale = 1.0;
  for (const Eigen::Matrix2cd& op : ops) {
    Eigen::Vector4cd v;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) v(2 * i + j) = op(i, j);
    }
    const Eigen::Vector4cd coeff = b.adjoint() * v;
    if (coeff.imag().cwiseAbs().maxCoeff() > 1e-12) throw ArgumentError("product_state: operators must be Hermitian");
    const double norm = coeff.real().norm();
    if (norm == 0.0) throw ArgumentError("product_state: zero operator");
    RealTensor site({1, kPhysicalDim, 1});
    for (int k = 0; k < 4; ++k) site.raw()[k] = coeff(k).real() / norm;
    scale *= norm;
    state.sites_.push_back(std::move(site));
  }
  state.sites_[0] *= scale;
  state.center_ = 0;
  return state;
}

DensityMps DensityMps::from_sites(const LatticeSpec& lattice, std::size_t chi_max, std::vector<RealTensor> sites,
                                  std::optional<std::size_t> center, double cum_discarded) {
  DensityMps state(lattice, chi_max);
  if (sites.size() != lattice.num_qubits()) throw DimensionError("from_sites: site count differs from lattice");
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const RealTensor& t = sites[i];
    if (t.rank() != 3 || t.extent(1) != kPhysicalDim) throw DimensionError("from_sites: sites must be (l, 4, r)");
    const std::size_t left_expected = (i == 0) ? 1 : sites[i - 1].extent(2);
    if (t.extent(0) != left_expected) throw DimensionError(fmt::format("from_sites: bond mismatch at site {}", i));
    if (t.extent(2) > chi_max) throw DimensionError(fmt::format("from_sites: bond at site {} exceeds chi_max", i));
  }
  if (sites.back().extent(2) != 1) throw DimensionError("from_sites: right boundary bond must be 1");
  if (center && *center >= sites.size()) throw ArgumentError("from_sites: center out of range");
  state.sites_ = std::move(sites);
  state.center_ = center;
  state.cum_discarded_ = cum_discarded;
  return state;
}

std::size_t DensityMps::bond_dim(std::size_t bond) const {
  if (bond > size()) throw ArgumentError("bond index out of range");
  return bond == size() ? 1 : sites_[bond].extent(0);
}

std::size_t DensityMps::max_bond() const {
  std::size_t m = 1;
  for (const RealTensor& t : sites_) m = std::max(m, t.extent(0));
  return m;
}

void DensityMps::move_center(std::size_t target) {
  if (target >= size()) throw ArgumentError("move_center: target out of range");
  std::size_t from_left = 0;
  std::size_t from_right = size() - 1;
  if (center_) from_left = from_right = *center_;

  // Left-to-right QR: site k = Q, R pushed into site k+1.
  for (std::size_t k = from_left; k < target; ++k) {
    RealTensor& a = sites_[k];
    const std::size_t l = a.extent(0), m = a.extent(2);
    const ConstRowMap mat(a.raw(), static_cast<Eigen::Index>(l * kPhysicalDim), static_cast<Eigen::Index>(m));
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(mat);
    const Eigen::Index kd = std::min<Eigen::Index>(mat.rows(), mat.cols());
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(mat.rows(), kd);
    const RowMatrix r = qr.matrixQR().topRows(kd).triangularView<Eigen::Upper>();
    a = tensor_from(q, {l, kPhysicalDim, static_cast<std::size_t>(kd)});
    RealTensor& next = sites_[k + 1];
    const Shape next_shape = next.shape();
    const RealTensor rt = tensor_from(r, {static_cast<std::size_t>(kd), m});
    next = matmul(rt, std::move(next).reshaped({m, kPhysicalDim * next_shape[2]}))
               .reshaped({static_cast<std::size_t>(kd), kPhysicalDim, next_shape[2]});
  }
  // Right-to-left LQ: site k = Q^T, L pushed into site k-1.
  for (std::size_t k = from_right; k > target; --k) {
    RealTensor& a = sites_[k];
    const std::size_t l = a.extent(0), r = a.extent(2);
    const ConstRowMap mat(a.raw(), static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(kPhysicalDim * r));
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(mat.transpose());
    const Eigen::Index kd = std::min<Eigen::Index>(mat.rows(), mat.cols());
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(mat.cols(), kd);
    const RowMatrix lower = qr.matrixQR().topRows(kd).triangularView<Eigen::Upper>().transpose();
    a = tensor_from(q.transpose(), {static_cast<std::size_t>(kd), kPhysicalDim, r});
    RealTensor& prev = sites_[k - 1];
    const Shape prev_shape = prev.shape();
    const RealTensor lt = tensor_from(lower, {l, static_cast<std::size_t>(kd)});
    prev = matmul(std::move(prev).reshaped({prev_shape[0] * kPhysicalDim, l}), lt)
               .reshaped({prev_shape[0], kPhysicalDim, static_cast<std::size_t>(kd)});
  }
  center_ = target;
}

void DensityMps::check_pair(std::size_t i) const {
  if (i + 1 >= size()) throw ArgumentError(fmt::format("chain position {} has no right neighbour (n = {})", i, size()));
}

void DensityMps::center_on_pair(std::size_t i) {
  if (!center_) {
    move_center(i);
  } else if (*center_ < i) {
    move_center(i);
  } else if (*center_ > i + 1) {
    move_center(i + 1);
  }
}

RealTensor DensityMps::contract_pair(std::size_t i) const {
  const RealTensor& a = sites_[i];
  const RealTensor& b = sites_[i + 1];
  const std::size_t l = a.extent(0), m = a.extent(2), r = b.extent(2);
  return matmul(a.reshaped({l * kPhysicalDim, m}), b.reshaped({m, kPhysicalDim * r}));
}

TruncationReport DensityMps::split_pair(std::size_t i, RealTensor theta, std::size_t left_dim, std::size_t right_dim,
                                        Absorb absorb) {
  TruncatedSvd<double> svd = svd_truncate(theta, chi_max_);
  const std::size_t k = svd.singular_values.size();
  if (absorb == Absorb::Right) {
    for (std::size_t j = 0; j < k; ++j) {
      double* row = svd.right.raw() + j * kPhysicalDim * right_dim;
      for (std::size_t c = 0; c < kPhysicalDim * right_dim; ++c) row[c] *= svd.singular_values[j];
    }
    center_ = i + 1;
  } else {
    for (std::size_t r = 0; r < left_dim * kPhysicalDim; ++r) {
      double* row = svd.left.raw() + r * k;
      for (std::size_t j = 0; j < k; ++j) row[j] *= svd.singular_values[j];
    }
    center_ = i;
  }
  sites_[i] = std::move(svd.left).reshaped({left_dim, kPhysicalDim, k});
  sites_[i + 1] = std::move(svd.right).reshaped({k, kPhysicalDim, right_dim});
  cum_discarded_ += svd.discarded_weight;
  return {svd.discarded_weight, max_bond(), 1};
}

TruncationReport DensityMps::apply_adjacent_transfer(std::size_t i, const TransferMatrix& t, Absorb absorb) {
  check_pair(i);
  center_on_pair(i);
  const std::size_t l = sites_[i].extent(0), r = sites_[i + 1].extent(2);
  RealTensor theta = contract_pair(i);
  RealTensor out({l * kPhysicalDim, kPhysicalDim * r});
  const auto ir = static_cast<Eigen::Index>(r);
  for (std::size_t x = 0; x < l; ++x) {
    RowMap(out.raw() + x * 16 * r, 16, ir).noalias() = t * ConstRowMap(theta.raw() + x * 16 * r, 16, ir);
  }
  return split_pair(i, std::move(out), l, r, absorb);
}

TruncationReport DensityMps::apply_adjacent_channel(std::size_t i, const ChannelSuperOp& op, Absorb absorb) {
  return apply_adjacent_transfer(i, pauli_transfer_matrix(op), absorb);
}

TruncationReport DensityMps::swap_adjacent(std::size_t i, Absorb absorb) {
  check_pair(i);
  center_on_pair(i);
  const std::size_t l = sites_[i].extent(0), r = sites_[i + 1].extent(2);
  RealTensor theta = contract_pair(i);
  RealTensor out({l * kPhysicalDim, kPhysicalDim * r});
  for (std::size_t x = 0; x < l; ++x) {
    for (std::size_t s = 0; s < kPhysicalDim; ++s) {
      for (std::size_t u = 0; u < kPhysicalDim; ++u) {
        const double* src = theta.raw() + ((x * kPhysicalDim + s) * kPhysicalDim + u) * r;
        double* dst = out.raw() + ((x * kPhysicalDim + u) * kPhysicalDim + s) * r;
        std::copy_n(src, r, dst);
      }
    }
  }
  return split_pair(i, std::move(out), l, r, absorb);
}

TruncationReport DensityMps::apply_long_range_transfer(std::size_t i, std::size_t j, const TransferMatrix& t) {
  if (j <= i) throw ArgumentError("apply_long_range: need i < j");
  if (j >= size()) throw ArgumentError("apply_long_range: position out of range");
  if (j == i + 1) return apply_adjacent_transfer(i, t, Absorb::Right);
  TruncationReport report;
  for (std::size_t k = j - 1; k > i; --k) report += swap_adjacent(k, Absorb::Left);
  report += apply_adjacent_transfer(i, t, Absorb::Right);
  for (std::size_t k = i + 1; k < j; ++k) report += swap_adjacent(k, Absorb::Right);
  return report;
}

TruncationReport DensityMps::apply_long_range_channel(std::size_t i, std::size_t j, const ChannelSuperOp& op) {
  return apply_long_range_transfer(i, j, pauli_transfer_matrix(op));
}

std::vector<double> DensityMps::bond_schmidt_values(std::size_t bond) {
  if (bond < 1 || bond >= size()) throw ArgumentError(fmt::format("bond {} is not an internal bond", bond));
  move_center(bond - 1);
  RealTensor& a = sites_[bond - 1];
  const std::size_t l = a.extent(0), m = a.extent(2);
  const ConstRowMap mat(a.raw(), static_cast<Eigen::Index>(l * kPhysicalDim), static_cast<Eigen::Index>(m));
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(mat);
  const Eigen::Index kd = std::min<Eigen::Index>(mat.rows(), mat.cols());
  const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(mat.rows(), kd);
  const RowMatrix r = qr.matrixQR().topRows(kd).triangularView<Eigen::Upper>();
  const RealTensor rt = tensor_from(r, {static_cast<std::size_t>(kd), m});
  std::vector<double> values = singular_values(rt);
  a = tensor_from(q, {l, kPhysicalDim, static_cast<std::size_t>(kd)});
  RealTensor& next = sites_[bond];
  const std::size_t nr = next.extent(2);
  next = matmul(rt, std::move(next).reshaped({m, kPhysicalDim * nr}))
             .reshaped({static_cast<std::size_t>(kd), kPhysicalDim, nr});
  center_ = bond;
  return values;
}

double DensityMps::norm2() const {
  if (center_) return sites_[*center_].frobenius_norm2();
  // Left environment E <- sum_s A_s^T E A_s.
  Eigen::MatrixXd env = Eigen::MatrixXd::Ones(1, 1);
  for (const RealTensor& t : sites_) {
    const std::size_t l = t.extent(0), r = t.extent(2);
    Eigen::MatrixXd next = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
    for (std::size_t s = 0; s < kPhysicalDim; ++s) {
      Eigen::MatrixXd slice(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(r));
      for (std::size_t x = 0; x < l; ++x) {
        for (std::size_t y = 0; y < r; ++y) slice(x, y) = t.raw()[(x * kPhysicalDim + s) * r + y];
      }
      next += slice.transpose() * env * slice;
    }
    env = std::move(next);
  }
  return env(0, 0);
}

double DensityMps::trace() const {
  // <<I| is sqrt(2) on the Pauli-I component of every site.
  std::vector<double> v{1.0};
  const double root2 = std::sqrt(2.0);
  for (const RealTensor& t : sites_) {
    const std::size_t l = t.extent(0), r = t.extent(2);
    std::vector<double> next(r, 0.0);
    for (std::size_t x = 0; x < l; ++x) {
      const double w = v[x] * root2;
      if (w == 0.0) continue;
      const double* row = t.raw() + (x * kPhysicalDim) * r;
      for (std::size_t y = 0; y < r; ++y) next[y] += w * row[y];
    }
    v = std::move(next);
  }
  return v[0];
}

Eigen::MatrixXcd DensityMps::to_dense() const {
  const std::size_t n = size();
  if (n > 10) throw SizeCapError(fmt::format("to_dense supports n <= 10 (got {})", n));
  const Eigen::Matrix4cd b = pauli_basis();
  DenseTensor psi({1, 1}, {Complex(1.0, 0.0)});
  for (const RealTensor& t : sites_) {
    const std::size_t l = t.extent(0), r = t.extent(2);
    DenseTensor c({l, kPhysicalDim * r});
    for (std::size_t x = 0; x < l; ++x) {
      for (std::size_t v = 0; v < kPhysicalDim; ++v) {
        for (std::size_t y = 0; y < r; ++y) {
          Complex acc{};
          for (std::size_t k = 0; k < kPhysicalDim; ++k) {
            acc += b(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(k)) * t.raw()[(x * kPhysicalDim + k) * r + y];
          }
          c.raw()[x * kPhysicalDim * r + v * r + y] = acc;
        }
      }
    }
    const std::size_t d = psi.extent(0);
    psi = matmul(psi, c).reshaped({d * kPhysicalDim, r});
  }
  const std::size_t dim = std::size_t{1} << n;
  Eigen::MatrixXcd rho(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t vec = 0; vec < psi.size(); ++vec) {
    std::size_t i = 0, j = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t v = (vec >> (2 * (n - 1 - k))) & 3;
      i = (i << 1) | (v >> 1);
      j = (j << 1) | (v & 1);
    }
    rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = psi.raw()[vec];
  }
  return rho;
}

}  // namespace nrqc
