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

#include "nrqc/channels.hpp"

#include <fmt/format.h>
#include <unsupported/Eigen/KroneckerProduct>

#include "nrqc/circuit.hpp"
#include "nrqc/errors.hpp"

namespace nrqc {

Vector16cd vectorize(const Eigen::Matrix4cd& rho) {
  Vector16cd v;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) v(4 * i + j) = rho(i, j);
  }
  return v;
}

Eigen::Matrix4cd unvectorize(const Vector16cd& v) {
  Eigen::Matrix4cd rho;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) rho(i, j) = v(4 * i + j);
  }
  return rho;
}

Eigen::Matrix<std::complex<double>, 1, 16> trace_covector() {
  return vectorize(Eigen::Matrix4cd::Identity()).transpose();
}

Eigen::Matrix2cd pauli(int k) {
  using C = std::complex<double>;
  Eigen::Matrix2cd m;
  switch (k) {
    case 0:
      m << 1, 0, 0, 1;
      break;
    case 1:
      m << 0, 1, 1, 0;
      break;
    case 2:
      m << 0, C(0, -1), C(0, 1), 0;
      break;
    case 3:
      m << 1, 0, 0, -1;
      break;
    default:
      throw ArgumentError("pauli index must be 0..3");
  }
  return m;
}

std::array<Eigen::Matrix4cd, 15> nontrivial_two_qubit_paulis() {
  std::array<Eigen::Matrix4cd, 15> out;
  std::size_t k = 0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      if (a == 0 && b == 0) continue;
      out[k++] = Eigen::kroneckerProduct(pauli(a), pauli(b));
    }
  }
  return out;
}

namespace {

Matrix16cd kron_conj(const Eigen::Matrix4cd& a) {
  Matrix16cd m;
  const Eigen::Matrix4cd ac = a.conjugate();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) m.block<4, 4>(4 * i, 4 * j) = a(i, j) * ac;
  }
  return m;
}

}  // namespace

ChannelSuperOp unitary_superop(const Eigen::Matrix4cd& u) {
  const double defect = unitarity_defect(u);
  if (!(defect <= 1e-12)) throw ArgumentError(fmt::format("gate is not unitary (defect {:.3g})", defect));
  return {kron_conj(u), 0.0, "unitary"};
}

ChannelSuperOp depolarizing_superop(NoiseParams noise) {
  if (!(noise.p >= 0.0 && noise.p <= 1.0)) {
    throw ArgumentError(fmt::format("noise rate p = {} outside [0, 1]", noise.p));
  }
  Matrix16cd m = (1.0 - noise.p) * Matrix16cd::Identity();
  for (const Eigen::Matrix4cd& e : nontrivial_two_qubit_paulis()) m += (noise.p / 15.0) * kron_conj(e);
  return {m, noise.p, fmt::format("depolarizing(p={})", noise.p)};
}

ChannelSuperOp noisy_gate_superop(const Eigen::Matrix4cd& u, NoiseParams noise) {
  const ChannelSuperOp gate = unitary_superop(u);
  const ChannelSuperOp dep = depolarizing_superop(noise);
  return {dep.matrix * gate.matrix, noise.p, fmt::format("noisy_gate(p={})", noise.p)};
}

Eigen::Matrix4cd swap_qubit_order(const Eigen::Matrix4cd& u) {
  // SWAP exchanges basis states 1 = |01> and 2 = |10>.
  constexpr std::array<int, 4> perm = {0, 2, 1, 3};
  Eigen::Matrix4cd out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out(i, j) = u(perm[i], perm[j]);
  }
  return out;
}

Matrix16cd choi_matrix(const ChannelSuperOp& op) {
  Matrix16cd choi;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        for (int l = 0; l < 4; ++l) choi(4 * i + k, 4 * j + l) = op.matrix(4 * k + l, 4 * i + j);
      }
    }
  }
  return choi;
}

}  // namespace nrqc
