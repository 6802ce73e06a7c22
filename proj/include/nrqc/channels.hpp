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

// Two-qubit channels as explicit 16x16 superoperators.
//
// Vectorization: a 4x4 operator rho maps to |rho>> = sum_ij rho_ij |i>|j>,
// i.e. vec index 4*i + j with the ket (row) index first. Under this
// convention vec(A rho B) = (A (x) B^T) vec(rho), so a unitary U acts as
// U (x) conj(U) and the trace functional is <<I| = vec(I)^T.

#include <array>
#include <string>

#include <Eigen/Core>

namespace nrqc {

using Matrix16cd = Eigen::Matrix<std::complex<double>, 16, 16>;
using Vector16cd = Eigen::Matrix<std::complex<double>, 16, 1>;

struct NoiseParams {
  double p = 0.0;  // depolarizing rate in [0, 1]
};

struct ChannelSuperOp {
  Matrix16cd matrix = Matrix16cd::Identity();
  double p = 0.0;
  std::string descriptor;
};

Vector16cd vectorize(const Eigen::Matrix4cd& rho);
Eigen::Matrix4cd unvectorize(const Vector16cd& v);
/// Row vector <<I| with <<I|rho>> = Tr(rho).
Eigen::Matrix<std::complex<double>, 1, 16> trace_covector();

/// Single-qubit Paulis I, X, Y, Z for k = 0..3.
Eigen::Matrix2cd pauli(int k);
/// P_a (x) P_b for (a, b) != (0, 0): the 15 non-identity two-qubit Paulis,
/// ordered by 4*a + b.
std::array<Eigen::Matrix4cd, 15> nontrivial_two_qubit_paulis();

/// U (x) conj(U). Throws ArgumentError if U is not unitary to 1e-12.
ChannelSuperOp unitary_superop(const Eigen::Matrix4cd& u);

/// (1-p) I + (p/15) sum_E E (x) conj(E). Throws ArgumentError for p outside [0,1].
ChannelSuperOp depolarizing_superop(NoiseParams noise);

/// Depolarizing noise after the gate: depolarizing_superop(p) * unitary_superop(U).
ChannelSuperOp noisy_gate_superop(const Eigen::Matrix4cd& u, NoiseParams noise);

/// SWAP * U * SWAP: the same gate with the roles of the two qubits exchanged.
Eigen::Matrix4cd swap_qubit_order(const Eigen::Matrix4cd& u);

/// Choi matrix sum_ij |i><j| (x) N(|i><j|), 16x16 Hermitian for
/// Hermiticity-preserving maps.
Matrix16cd choi_matrix(const ChannelSuperOp& op);

}  // namespace nrqc
