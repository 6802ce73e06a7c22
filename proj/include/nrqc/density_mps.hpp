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

// Density operator of an L1 x L2 qubit lattice stored as a matrix-product
// chain over the vectorized operator |rho>>, one rank-3 tensor
// (left bond, physical = 4, right bond) per chain site (see SiteMap).
//
// Local basis. The physical index of every site is expressed in the
// normalized Pauli basis {I, X, Y, Z} / sqrt(2) rather than in the raw
// (ket, bra) pair basis. The change of basis is the same 4x4 unitary on
// every site, so Schmidt values at every bond, <<rho|rho>> and the trace
// are exactly those of the (ket, bra) chain; truncating in either basis
// keeps the same singular values. In this basis a Hermitian rho has real
// coefficients and a Hermiticity-preserving channel is a real 16x16
// transfer matrix, so the chain is stored with real entries.
//
// Gauge. When `ortho_center()` is set, tensors to its left are left
// isometries and tensors to its right are right isometries. All two-site
// updates first move the center onto the pair. States are not normalized:
// the trace drifts below one when truncation discards weight.

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json_fwd.hpp>

#include "nrqc/channels.hpp"
#include "nrqc/circuit.hpp"
#include "nrqc/lattice.hpp"
#include "nrqc/site_map.hpp"
#include "nrqc/tensor.hpp"

namespace nrqc {

inline constexpr std::size_t kPhysicalDim = 4;

using TransferMatrix = Eigen::Matrix<double, 16, 16>;

/// Column k holds vec(P_k) / sqrt(2) in (ket, bra) order 2*i + j.
Eigen::Matrix4cd pauli_basis();

/// Real transfer matrix of a two-qubit superoperator in the site-major Pauli
/// basis: row/column index 4*k_a + k_b with k_a the Pauli label of the first
/// qubit. Throws ArgumentError if the map is not Hermiticity preserving.
TransferMatrix pauli_transfer_matrix(const ChannelSuperOp& op);

/// Transfer matrix of the SWAP of the two physical indices.
const TransferMatrix& swap_transfer_matrix();

struct TruncationReport {
  double discarded_weight = 0.0;  // sum of squared discarded singular values
  std::size_t max_bond = 0;
  std::size_t svd_count = 0;

  TruncationReport& operator+=(const TruncationReport& other);
};

/// Which side of a two-site split receives the singular values.
enum class Absorb { Left, Right };

class DensityMps {
 public:
  /// |0...0><0...0| as a bond-1 product chain.
  static DensityMps zero_state(const LatticeSpec& lattice, std::size_t chi_max);

  /// Product of arbitrary single-qubit operators, `ops` indexed by chain
  /// position.
  static DensityMps product_state(const LatticeSpec& lattice, std::size_t chi_max,
                                  const std::vector<Eigen::Matrix2cd>& ops);

  /// Adopt raw Pauli-basis tensors (checkpoint restore). Validates shapes;
  /// the gauge is restored by re-canonicalization when `center` is empty.
  static DensityMps from_sites(const LatticeSpec& lattice, std::size_t chi_max, std::vector<RealTensor> sites,
                               std::optional<std::size_t> center, double cum_discarded);

  std::size_t size() const noexcept { return sites_.size(); }
  std::size_t chi_max() const noexcept { return chi_max_; }
  const LatticeSpec& lattice() const noexcept { return lattice_; }
  const SiteMap& site_map() const noexcept { return site_map_; }
  std::optional<std::size_t> ortho_center() const noexcept { return center_; }
  double cum_discarded() const noexcept { return cum_discarded_; }
  const RealTensor& site(std::size_t i) const { return sites_.at(i); }

  /// Extent of bond b (between sites b-1 and b), b in 0..n. Bonds 0 and n
  /// are the trivial boundary bonds.
  std::size_t bond_dim(std::size_t bond) const;
  std::size_t max_bond() const;

  /// Exact gauge move by QR/LQ sweeps.
  void move_center(std::size_t target);

  /// Contract sites (i, i+1), apply the 16x16 channel with its first qubit on
  /// site i, and split again with at most chi_max singular values.
  TruncationReport apply_adjacent_channel(std::size_t i, const ChannelSuperOp& op, Absorb absorb = Absorb::Right);
  TruncationReport apply_adjacent_transfer(std::size_t i, const TransferMatrix& t, Absorb absorb = Absorb::Right);

  /// Exchange the physical indices of sites i and i+1 and re-split.
  TruncationReport swap_adjacent(std::size_t i, Absorb absorb = Absorb::Right);

  /// Channel on chain sites i < j (first qubit on i): site j is swapped
  /// down to i+1, the gate is applied on (i, i+1), and the site is swapped
  /// back. Every swap truncates at chi_max.
  TruncationReport apply_long_range_channel(std::size_t i, std::size_t j, const ChannelSuperOp& op);
  TruncationReport apply_long_range_transfer(std::size_t i, std::size_t j, const TransferMatrix& t);

  /// Unnormalized Schmidt values across bond b (1..n-1), descending. Moves
  /// the gauge center to site b.
  std::vector<double> bond_schmidt_values(std::size_t bond);

  /// <<rho|rho>> = Tr(rho^dagger rho).
  double norm2() const;
  /// <<I|rho>> = Tr(rho).
  double trace() const;

  /// Dense 2^n x 2^n matrix, qubits ordered by chain position (position 0 is
  /// the most significant bit). n <= 10.
  Eigen::MatrixXcd to_dense() const;

 private:
  DensityMps(const LatticeSpec& lattice, std::size_t chi_max);
  void check_pair(std::size_t i) const;
  void center_on_pair(std::size_t i);
  TruncationReport split_pair(std::size_t i, RealTensor theta, std::size_t left_dim, std::size_t right_dim,
                              Absorb absorb);
  RealTensor contract_pair(std::size_t i) const;

  LatticeSpec lattice_;
  SiteMap site_map_;
  std::size_t chi_max_;
  std::vector<RealTensor> sites_;
  std::optional<std::size_t> center_;
  double cum_discarded_ = 0.0;
};

/// Metadata stored alongside a checkpointed chain.
struct CheckpointInfo {
  std::uint64_t master_seed = 0;
  std::size_t depth_reached = 0;
  double p = 0.0;
};

/// Versioned JSON container: shapes and entries of every site, gauge,
/// cum_discarded and the CheckpointInfo. Doubles round-trip exactly.
nlohmann::json checkpoint_to_json(const DensityMps& state, const CheckpointInfo& info);
DensityMps checkpoint_from_json(const nlohmann::json& doc, CheckpointInfo* info = nullptr);

struct EvolutionOptions {
  std::size_t observe_every = 2;  // observe at depths that are multiples of this
  double trace_floor = 0.5;       // abort when Tr(rho) drops below
  std::size_t first_layer = 0;    // resume point; depth `first_layer` is not re-observed unless 0
};

/// Called with the depth reached (number of layers applied).
using DepthObserver = std::function<void(std::size_t depth, DensityMps& state)>;

/// Apply layers [options.first_layer, circuit.depth) of noisy gates. Gates
/// within a layer run in ascending order of their lower chain position; the
/// observer sees depth 0 (for a fresh run), every multiple of observe_every,
/// and the final depth. Returns one aggregated report per applied layer.
/// Throws TraceFloorError if the trace falls below the floor.
std::vector<TruncationReport> run_circuit(DensityMps& state, const CircuitInstance& circuit, NoiseParams noise,
                                          const EvolutionOptions& options, const DepthObserver& observer);

/// Convenience overload starting from |0...0><0...0|.
std::vector<TruncationReport> run_circuit(const CircuitInstance& circuit, NoiseParams noise, std::size_t chi_max,
                                          const EvolutionOptions& options, const DepthObserver& observer);

/// Gates of one layer as (lower chain position, higher chain position,
/// unitary oriented so its first qubit is the lower position), in
/// application order.
struct OrientedGate {
  std::size_t lo = 0;
  std::size_t hi = 0;
  Eigen::Matrix4cd unitary;
};
std::vector<OrientedGate> oriented_layer(const GateLayer& layer, const SiteMap& map);

}  // namespace nrqc
