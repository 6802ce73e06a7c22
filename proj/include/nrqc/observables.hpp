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

// Per-depth observables of a DensityMps. Entropies are in bits.
//
// The operator entanglement entropy across a column cut is the Shannon
// entropy of the normalized squared Schmidt values of |rho>> at the
// corresponding chain bond, which is -Tr rho_R log2 rho_R for
// rho_R = Tr_{R^c} |rho>><<rho| / <<rho|rho>>. Functions taking a
// non-const state move its gauge center; no function changes the state.

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "nrqc/density_mps.hpp"

namespace nrqc {

/// Column bipartition: columns [0, ell) versus [ell, L2), ell in 1..L2-1.
struct CutIndex {
  std::size_t ell = 1;
  std::size_t bond = 0;  // chain bond ell * L1
};

CutIndex column_cut(const LatticeSpec& lattice, std::size_t ell);

/// -sum q log2 q with q_k = s_k^2 / sum s^2. Throws NumericError when every
/// value is zero.
double schmidt_entropy_bits(std::span<const double> schmidt_values);

double operator_ee_at_cut(DensityMps& state, std::size_t ell);

struct MaxOperatorEe {
  double bits = 0.0;
  std::size_t ell = 1;  // ties resolve to the smaller cut
};
/// Throws ArgumentError when L2 < 2.
MaxOperatorEe max_operator_ee(DensityMps& state);

double trace_of(const DensityMps& state);
/// Tr(rho^2) / Tr(rho)^2. Throws NumericError when Tr(rho) <= 0.
double purity_of(const DensityMps& state);
/// -log2 purity_of.
double second_renyi(const DensityMps& state);

/// Normalized Schmidt values at the cut (squares sum to one), descending,
/// without zero padding.
std::vector<double> singular_spectrum(DensityMps& state, std::size_t ell);

struct DepthRecord {
  std::size_t depth = 0;
  std::vector<double> ee_per_cut;  // index ell - 1
  double s_max = 0.0;
  std::size_t argmax_cut = 1;
  double second_renyi = 0.0;
  double trace = 0.0;
  double purity = 0.0;
  std::size_t max_bond = 0;
  double cum_discarded = 0.0;
};

/// All observables in a single left-to-right gauge sweep.
DepthRecord observe(DensityMps& state, std::size_t depth);

/// Identifies the run a record belongs to in CSV output.
struct RecordContext {
  std::string run_id;
  std::uint64_t seed = 0;
  LatticeSpec lattice;
  double p = 0.0;
  std::size_t chi = 0;
};

/// run_id,seed,L1,L2,p,chi,depth,trace,purity,s2,s_max,argmax_cut,
/// ee_cut_1..ee_cut_{L2-1},max_bond,cum_discarded
void write_record_header(std::ostream& os, const LatticeSpec& lattice);
void write_record_row(std::ostream& os, const RecordContext& context, const DepthRecord& record);

/// Shortest text that reads back to the same double; negative zero prints as 0.
std::string format_double(double x);

}  // namespace nrqc
