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

#include "nrqc/exact_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <fmt/format.h>

#include "nrqc/errors.hpp"
#include "nrqc/site_map.hpp"

namespace nrqc {
namespace {

using Complex = std::complex<double>;

void check_size(const LatticeSpec& lattice, std::size_t cap) {
  if (lattice.num_qubits() > cap) {
    throw SizeCapError(fmt::format("dense oracle is limited to {} qubits, lattice {} has {}", cap, lattice.label(),
                                   lattice.num_qubits()));
  }
}

constexpr double kEigenRoundoff = 4.0 * std::numeric_limits<double>::epsilon();

void check_square(const Eigen::MatrixXcd& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) throw DimensionError(fmt::format("{} must be a non-empty square matrix", what));
}

// m <- k m k^dagger for a k acting on the listed qubits.
template <typename Apply>
void conjugate(Eigen::MatrixXcd& m, Apply&& apply_left) {
  apply_left(m);
  m = m.adjoint().eval();
  apply_left(m);
  m = m.adjoint().eval();
}

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  const Eigen::VectorXd& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& m, const char* what) {
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  if ((m - h).cwiseAbs().maxCoeff() > kPsdTolerance) throw NumericError(fmt::format("{} is not Hermitian", what));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) throw NumericError("eigendecomposition failed");
  Eigen::VectorXd ev = solver.eigenvalues();
  if (ev.minCoeff() < -kPsdTolerance) {
    throw NumericError(fmt::format("{} has eigenvalue {} below the PSD floor", what, ev.minCoeff()));
  }
  // Eigenvalues at round-off level are exact zeros; their square roots would
  // otherwise inject errors of order sqrt(eps).
  const double floor = kEigenRoundoff * static_cast<double>(ev.size()) * std::max(ev.maxCoeff(), 0.0);
  for (Eigen::Index k = 0; k < ev.size(); ++k) ev[k] = ev[k] > floor ? std::sqrt(ev[k]) : 0.0;
  const Eigen::MatrixXcd& v = solver.eigenvectors();
  return v * ev.asDiagonal() * v.adjoint();
}

double trace_sqrt_clipped(const Eigen::MatrixXcd& m) {
  double total = 0.0;
  for (double x : hermitian_eigenvalues(m)) {
    if (x > 0.0) total += std::sqrt(x);
  }
  return total;
}

double entropy_of_weights(const std::vector<double>& w) {
  double sum = 0.0;
  for (double x : w) sum += std::max(x, 0.0);
  if (!(sum > 0.0)) throw NumericError("entropy of a zero spectrum");
  double h = 0.0;
  for (double x : w) {
    const double q = std::max(x, 0.0) / sum;
    if (q > 0.0) h -= q * std::log2(q);
  }
  return h;
}

// Site-major (ket, bra) pair index of `bits` qubits: sum_k (2 i_k + j_k) 4^(bits-1-k).
std::vector<std::size_t> interleave_table(std::size_t bits) {
  const std::size_t dim = std::size_t{1} << bits;
  std::vector<std::size_t> table(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      std::size_t index = 0;
      for (std::size_t k = 0; k < bits; ++k) {
        const std::size_t shift = bits - 1 - k;
        index = 4 * index + 2 * ((i >> shift) & 1U) + ((j >> shift) & 1U);
      }
      table[i * dim + j] = index;
    }
  }
  return table;
}

}  // namespace

DenseState dense_zero_state(const LatticeSpec& lattice) {
  validate_circuit_lattice(lattice);
  check_size(lattice, kOracleMaxQubits);
  const Eigen::Index dim = Eigen::Index{1} << lattice.num_qubits();
  DenseState state{Eigen::MatrixXcd::Zero(dim, dim), lattice};
  state.rho(0, 0) = 1.0;
  return state;
}

void apply_two_qubit_left(Eigen::MatrixXcd& m, const Eigen::Matrix4cd& k, std::size_t qa, std::size_t qb,
                          std::size_t n) {
  if (qa == qb || qa >= n || qb >= n) throw ArgumentError("invalid qubit pair");
  const std::size_t dim = std::size_t{1} << n;
  if (static_cast<std::size_t>(m.rows()) != dim) throw DimensionError("operand does not match the register size");
  const std::size_t ma = std::size_t{1} << (n - 1 - qa);
  const std::size_t mb = std::size_t{1} << (n - 1 - qb);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    Complex* col = m.col(c).data();
    for (std::size_t base = 0; base < dim; ++base) {
      if ((base & ma) != 0 || (base & mb) != 0) continue;
      const std::size_t r[4] = {base, base | mb, base | ma, base | ma | mb};
      const Complex v[4] = {col[r[0]], col[r[1]], col[r[2]], col[r[3]]};
      for (int i = 0; i < 4; ++i) {
        col[r[i]] = k(i, 0) * v[0] + k(i, 1) * v[1] + k(i, 2) * v[2] + k(i, 3) * v[3];
      }
    }
  }
}

void apply_one_qubit_left(Eigen::MatrixXcd& m, const Eigen::Matrix2cd& k, std::size_t q, std::size_t n) {
  if (q >= n) throw ArgumentError("invalid qubit");
  const std::size_t dim = std::size_t{1} << n;
  if (static_cast<std::size_t>(m.rows()) != dim) throw DimensionError("operand does not match the register size");
  const std::size_t mq = std::size_t{1} << (n - 1 - q);
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    Complex* col = m.col(c).data();
    for (std::size_t base = 0; base < dim; ++base) {
      if ((base & mq) != 0) continue;
      const Complex v0 = col[base];
      const Complex v1 = col[base | mq];
      col[base] = k(0, 0) * v0 + k(0, 1) * v1;
      col[base | mq] = k(1, 0) * v0 + k(1, 1) * v1;
    }
  }
}

void apply_noisy_gate_exact(DenseState& state, std::size_t qa, std::size_t qb, const Eigen::Matrix4cd& u,
                            NoiseParams noise) {
  if (!(noise.p >= 0.0 && noise.p <= 1.0)) throw ArgumentError(fmt::format("noise rate {} outside [0, 1]", noise.p));
  if (unitarity_defect(u) > 1e-12) throw ArgumentError("gate is not unitary");
  const std::size_t n = state.num_qubits();
  conjugate(state.rho, [&](Eigen::MatrixXcd& m) { apply_two_qubit_left(m, u, qa, qb, n); });
  if (noise.p == 0.0) return;

  const Eigen::MatrixXcd x = state.rho;
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(x.rows(), x.cols());
  for (int b = 0; b < 4; ++b) {
    Eigen::MatrixXcd xb = x;
    if (b != 0) conjugate(xb, [&](Eigen::MatrixXcd& m) { apply_one_qubit_left(m, pauli(b), qb, n); });
    for (int a = 0; a < 4; ++a) {
      if (a == 0 && b == 0) continue;
      if (a == 0) {
        sum += xb;
        continue;
      }
      Eigen::MatrixXcd term = xb;
      conjugate(term, [&](Eigen::MatrixXcd& m) { apply_one_qubit_left(m, pauli(a), qa, n); });
      sum += term;
    }
  }
  state.rho = (1.0 - noise.p) * x + (noise.p / 15.0) * sum;
}

DenseState evolve_exact(const CircuitInstance& circuit, NoiseParams noise, const ExactObserver& observer) {
  DenseState state = dense_zero_state(circuit.lattice);
  const SiteMap map(circuit.lattice);
  if (observer) observer(0, state);
  for (std::size_t layer = 0; layer < circuit.layers.size(); ++layer) {
    for (const Gate& gate : circuit.layers[layer]) {
      apply_noisy_gate_exact(state, map.position(gate.edge.a), map.position(gate.edge.b), gate.unitary, noise);
    }
    if (observer) observer(layer + 1, state);
  }
  return state;
}

double fidelity(const Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& sigma) {
  check_square(rho, "rho");
  check_square(sigma, "sigma");
  if (rho.rows() != sigma.rows()) throw DimensionError("fidelity of operators with different dimensions");
  // F = Tr sqrt(sqrt(rho) sigma sqrt(rho)) = || sqrt(rho) sqrt(sigma) ||_1, and the
  // singular values of the product are stable where the eigenvalue route is not.
  const Eigen::MatrixXcd product = psd_sqrt(rho, "rho") * psd_sqrt(sigma, "sigma");
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(product);
  if (svd.info() != Eigen::Success) throw NumericError("SVD failed in fidelity");
  return svd.singularValues().sum();
}

double fidelity(const DenseState& rho, const DenseState& sigma) { return fidelity(rho.rho, sigma.rho); }

double fidelity_against_reference(const Eigen::MatrixXcd& reference, const Eigen::MatrixXcd& approx) {
  check_square(reference, "reference");
  check_square(approx, "approximation");
  if (reference.rows() != approx.rows()) throw DimensionError("fidelity of operators with different dimensions");
  const Eigen::MatrixXcd root = psd_sqrt(reference, "reference");
  return trace_sqrt_clipped(root * approx * root);
}

double exact_trace(const Eigen::MatrixXcd& rho) {
  check_square(rho, "rho");
  return rho.trace().real();
}

double exact_purity(const Eigen::MatrixXcd& rho) {
  const double tr = exact_trace(rho);
  if (!(tr > 0.0)) throw NumericError(fmt::format("purity of an operator with trace {}", tr));
  return rho.cwiseAbs2().sum() / (tr * tr);
}

double exact_second_renyi(const Eigen::MatrixXcd& rho) { return -std::log2(exact_purity(rho)); }

double exact_operator_ee(const DenseState& state, std::size_t ell) {
  check_size(state.lattice, kOracleMaxVectorizedQubits);
  const std::size_t n = state.num_qubits();
  const std::size_t left_bits = SiteMap(state.lattice).cut_bond(ell);
  const std::size_t right_bits = n - left_bits;
  const std::size_t right_dim = std::size_t{1} << right_bits;
  const std::size_t left_dim = std::size_t{1} << left_bits;
  const std::vector<std::size_t> left_index = interleave_table(left_bits);
  const std::vector<std::size_t> right_index = interleave_table(right_bits);

  Eigen::MatrixXcd reshaped(Eigen::Index(left_dim * left_dim), Eigen::Index(right_dim * right_dim));
  for (std::size_t i = 0; i < (left_dim << right_bits); ++i) {
    for (std::size_t j = 0; j < (left_dim << right_bits); ++j) {
      const std::size_t row = left_index[(i >> right_bits) * left_dim + (j >> right_bits)];
      const std::size_t col = right_index[(i & (right_dim - 1)) * right_dim + (j & (right_dim - 1))];
      reshaped(Eigen::Index(row), Eigen::Index(col)) = state.rho(Eigen::Index(i), Eigen::Index(j));
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(reshaped);
  const Eigen::VectorXd& s = svd.singularValues();
  std::vector<double> weights(static_cast<std::size_t>(s.size()));
  for (Eigen::Index k = 0; k < s.size(); ++k) weights[std::size_t(k)] = s[k] * s[k];
  return entropy_of_weights(weights);
}

double exact_von_neumann_entropy(const DenseState& state, std::size_t ell) {
  check_size(state.lattice, kOracleMaxQubits);
  const std::size_t n = state.num_qubits();
  const std::size_t left_bits = SiteMap(state.lattice).cut_bond(ell);
  const std::size_t right_dim = std::size_t{1} << (n - left_bits);
  const std::size_t left_dim = std::size_t{1} << left_bits;
  Eigen::MatrixXcd reduced = Eigen::MatrixXcd::Zero(Eigen::Index(left_dim), Eigen::Index(left_dim));
  for (std::size_t a = 0; a < left_dim; ++a) {
    for (std::size_t b = 0; b < left_dim; ++b) {
      Complex acc = 0.0;
      for (std::size_t r = 0; r < right_dim; ++r) {
        acc += state.rho(Eigen::Index(a * right_dim + r), Eigen::Index(b * right_dim + r));
      }
      reduced(Eigen::Index(a), Eigen::Index(b)) = acc;
    }
  }
  return entropy_of_weights(hermitian_eigenvalues(reduced));
}

}  // namespace nrqc
