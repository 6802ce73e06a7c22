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

#include "nrqc/observables.hpp"

#include <cmath>

#include <fmt/format.h>

#include "nrqc/errors.hpp"

namespace nrqc {

CutIndex column_cut(const LatticeSpec& lattice, std::size_t ell) {
  return {ell, SiteMap(lattice).cut_bond(ell)};
}

double schmidt_entropy_bits(std::span<const double> schmidt_values) {
  double total = 0.0;
  for (double s : schmidt_values) total += s * s;
  if (!(total > 0.0)) throw NumericError("entropy of an all-zero spectrum");
  double h = 0.0;
  for (double s : schmidt_values) {
    const double q = s * s / total;
    if (q > 0.0) h -= q * std::log2(q);
  }
  return h;
}

double operator_ee_at_cut(DensityMps& state, std::size_t ell) {
  const CutIndex cut = column_cut(state.lattice(), ell);
  const std::vector<double> s = state.bond_schmidt_values(cut.bond);
  return schmidt_entropy_bits(s);
}

MaxOperatorEe max_operator_ee(DensityMps& state) {
  if (state.lattice().cols < 2) throw ArgumentError("max_operator_ee needs L2 >= 2");
  MaxOperatorEe best{-1.0, 1};
  for (std::size_t ell = 1; ell < state.lattice().cols; ++ell) {
    const double s = operator_ee_at_cut(state, ell);
    if (s > best.bits) best = {s, ell};
  }
  return best;
}

double trace_of(const DensityMps& state) { return state.trace(); }

double purity_of(const DensityMps& state) {
  const double tr = state.trace();
  if (!(tr > 0.0)) throw NumericError(fmt::format("purity of a state with trace {}", tr));
  return state.norm2() / (tr * tr);
}

double second_renyi(const DensityMps& state) { return -std::log2(purity_of(state)); }

std::vector<double> singular_spectrum(DensityMps& state, std::size_t ell) {
  const CutIndex cut = column_cut(state.lattice(), ell);
  std::vector<double> s = state.bond_schmidt_values(cut.bond);
  double total = 0.0;
  for (double x : s) total += x * x;
  if (!(total > 0.0)) throw NumericError("spectrum of an all-zero state");
  const double norm = std::sqrt(total);
  for (double& x : s) x /= norm;
  return s;
}

DepthRecord observe(DensityMps& state, std::size_t depth) {
  DepthRecord rec;
  rec.depth = depth;
  const std::size_t cuts = state.lattice().cols > 0 ? state.lattice().cols - 1 : 0;
  rec.ee_per_cut.reserve(cuts);
  rec.s_max = 0.0;
  rec.argmax_cut = 1;
  for (std::size_t ell = 1; ell <= cuts; ++ell) {
    const double s = operator_ee_at_cut(state, ell);
    rec.ee_per_cut.push_back(s);
    if (ell == 1 || s > rec.s_max) {
      rec.s_max = s;
      rec.argmax_cut = ell;
    }
  }
  rec.trace = state.trace();
  rec.purity = purity_of(state);
  rec.second_renyi = -std::log2(rec.purity);
  rec.max_bond = state.max_bond();
  rec.cum_discarded = state.cum_discarded();
  return rec;
}

std::string format_double(double x) { return fmt::format("{}", x == 0.0 ? 0.0 : x); }

void write_record_header(std::ostream& os, const LatticeSpec& lattice) {
  os << "run_id,seed,L1,L2,p,chi,depth,trace,purity,s2,s_max,argmax_cut";
  for (std::size_t ell = 1; ell < lattice.cols; ++ell) os << ",ee_cut_" << ell;
  os << ",max_bond,cum_discarded\n";
}

void write_record_row(std::ostream& os, const RecordContext& context, const DepthRecord& r) {
  os << context.run_id << ',' << context.seed << ',' << context.lattice.rows << ',' << context.lattice.cols << ','
     << format_double(context.p) << ',' << context.chi << ',' << r.depth << ',' << format_double(r.trace) << ','
     << format_double(r.purity) << ',' << format_double(r.second_renyi) << ',' << format_double(r.s_max) << ','
     << r.argmax_cut;
  for (double s : r.ee_per_cut) os << ',' << format_double(s);
  os << ',' << r.max_bond << ',' << format_double(r.cum_discarded) << '\n';
}

}  // namespace nrqc
