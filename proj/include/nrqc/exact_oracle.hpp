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

// Dense reference simulator for small lattices. The density matrix is held
// as a full 2^n x 2^n matrix with qubits in chain order (chain position 0 is
// the most significant bit), matching DensityMps::to_dense. Gates are applied
// in Kraus form, independently of the superoperator path used by the chain.

#include <cstddef>
#include <functional>

#include <Eigen/Core>

#include "nrqc/channels.hpp"
#include "nrqc/circuit.hpp"
#include "nrqc/lattice.hpp"

namespace nrqc {

inline constexpr std::size_t kOracleMaxQubits = 12;
/// Operator entanglement needs the 4^n vectorized state.
inline constexpr std::size_t kOracleMaxVectorizedQubits = 10;
/// Eigenvalues at or above -kPsdTolerance are treated as zero.
inline constexpr double kPsdTolerance = 1e-10;

struct DenseState {
  Eigen::MatrixXcd rho;
  LatticeSpec lattice;

  std::size_t num_qubits() const noexcept { return lattice.num_qubits(); }
};

/// |0...0><0...0|. Throws SizeCapError above kOracleMaxQubits.
DenseState dense_zero_state(const LatticeSpec& lattice);

/// In-place m <- K m with K acting on qubits (qa, qb) of an n-qubit register,
/// qa being the more significant factor of K.
void apply_two_qubit_left(Eigen::MatrixXcd& m, const Eigen::Matrix4cd& k, std::size_t qa, std::size_t qb,
                          std::size_t n);
/// In-place m <- K m with K acting on qubit q.
void apply_one_qubit_left(Eigen::MatrixXcd& m, const Eigen::Matrix2cd& k, std::size_t q, std::size_t n);

/// rho <- (1-p) U rho U^dagger + (p/15) sum_E E U rho U^dagger E^dagger with
/// U on chain positions (qa, qb).
void apply_noisy_gate_exact(DenseState& state, std::size_t qa, std::size_t qb, const Eigen::Matrix4cd& u,
                            NoiseParams noise);

/// Called with depth 0 and after every layer.
using ExactObserver = std::function<void(std::size_t depth, const DenseState& state)>;

/// Evolve |0...0><0...0| through every layer of the circuit.
DenseState evolve_exact(const CircuitInstance& circuit, NoiseParams noise, const ExactObserver& observer = {});

/// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)). Both inputs must be
/// Hermitian and PSD to kPsdTolerance; throws NumericError otherwise.
double fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma);
double fidelity(const DenseState& rho, const DenseState& sigma);

/// Fidelity of an approximate operator against a PSD reference, computed as
/// Tr sqrt(sqrt(reference) approx sqrt(reference)) with negative eigenvalues
/// of the inner matrix clipped. Accepts truncated, slightly non-PSD
/// approximations.
double fidelity_against_reference(const Eigen::MatrixXcd& reference, const Eigen::MatrixXcd& approx);

double exact_trace(const Eigen::MatrixXcd& rho);
/// Tr(rho^2) / Tr(rho)^2.
double exact_purity(const Eigen::MatrixXcd& rho);
double exact_second_renyi(const Eigen::MatrixXcd& rho);

/// Operator entanglement entropy in bits across column cut ell, from the
/// Schmidt decomposition of vec(rho) over chain positions [0, ell*L1).
/// Throws SizeCapError above kOracleMaxVectorizedQubits.
double exact_operator_ee(const DenseState& state, std::size_t ell);

/// Von Neumann entropy in bits of the normalized reduced state on columns
/// [0, ell).
double exact_von_neumann_entropy(const DenseState& state, std::size_t ell);

}  // namespace nrqc
