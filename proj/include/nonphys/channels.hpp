// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0
//
// Hermiticity-preserving linear maps L(A) -> L(B) in the Choi representation
//
//   J = sum_ij |i><j| (x) Phi(|i><j|),   Phi(X) = Tr_A[(X^T (x) 1) J],
//
// with Choi index a * dB + b.  Composition and inversion go through the
// natural (transfer) matrix T with vec(Phi(X)) = T vec(X), vec row-major.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nonphys/linalg.hpp"

namespace nonphys::channels {

using linalg::ComplexMatrix;
using linalg::HermitianOperator;

class LinearMap {
 public:
  LinearMap() = default;
  // Throws DimensionError unless choi is (d_in*d_out) square.
  LinearMap(int d_in, int d_out, HermitianOperator choi);

  int d_in() const { return d_in_; }
  int d_out() const { return d_out_; }
  const HermitianOperator& choi() const { return choi_; }

  LinearMap operator+(const LinearMap& o) const;
  LinearMap operator-(const LinearMap& o) const;
  LinearMap operator*(double s) const;

 private:
  int d_in_ = 0;
  int d_out_ = 0;
  HermitianOperator choi_;
};

inline LinearMap operator*(double s, const LinearMap& m) { return m * s; }

LinearMap from_kraus(const std::vector<ComplexMatrix>& kraus);
LinearMap from_transfer(const ComplexMatrix& t, int d_in, int d_out);
ComplexMatrix transfer_matrix(const LinearMap& m);

ComplexMatrix apply(const LinearMap& m, const ComplexMatrix& x);
HermitianOperator apply(const LinearMap& m, const HermitianOperator& x);

// outer o inner
LinearMap compose(const LinearMap& outer, const LinearMap& inner);
// Throws SingularMapError if the transfer matrix condition number exceeds
// cond_limit, DimensionError if d_in != d_out.
LinearMap inverse(const LinearMap& m, double cond_limit = 1e12);
double transfer_condition_number(const LinearMap& m);
// a (x) b acting on A1 A2 -> B1 B2.
LinearMap tensor(const LinearMap& a, const LinearMap& b);

// Tr_B J, the operator whose comparison with 1 decides trace preservation.
HermitianOperator choi_marginal(const LinearMap& m);

struct Classification {
  bool hermiticity_preserving = true;
  bool completely_positive = false;
  bool trace_preserving = false;
  bool trace_non_increasing = false;
  bool proportional_tp = false;  // Tr_B J = t 1
  double tp_factor = 0.0;        // t when proportional_tp
  double lambda_min_choi = 0.0;
};
Classification classify(const LinearMap& m, double tol = 1e-8);

// --- constructors -------------------------------------------------------------

LinearMap identity(int d);
LinearMap completely_depolarizing(int d);
LinearMap depolarizing(double p, int d);
LinearMap depolarizing_inverse(double p, int d);
// Generalized dephasing with Schur multiplier S_jk = sum_i p_i w^{i(j-k)},
// w = exp(2 pi i / d), d = p.size().
LinearMap dephasing_general(const std::vector<double>& p);
LinearMap dephasing_general_inverse(const std::vector<double>& p);
ComplexMatrix dephasing_multiplier(const std::vector<double>& p);
LinearMap dephasing(double p);  // qubit, p = (1 - p, p)
LinearMap dephasing_inverse(double p);
LinearMap amplitude_damping(double gamma);
LinearMap amplitude_damping_inverse(double gamma);
LinearMap leakage(double p);
LinearMap leakage_inverse(double p);
LinearMap transpose_map(int d);
// The d = 3 positive but not completely positive map
//   X -> [[X11+X22, -X12, -X13], [-X21, X22+X33, -X23], [-X31, -X32, X33+X11]].
// It doubles traces; `normalized` divides by 2 to give a trace-preserving map.
LinearMap choi_map(bool normalized = false);
// X -> <0|X|0> |0><0| - <1|X|1> |1><1| on a qubit.
LinearMap extreme_disparity();
// Functional X -> Tr(P X) viewed as a map into a 1-dimensional output.
LinearMap trace_functional(const HermitianOperator& p);

LinearMap random_tp_map(std::uint64_t seed, int d);
LinearMap random_channel(std::uint64_t seed, int d);
LinearMap random_cp_map(std::uint64_t seed, int d);
LinearMap random_hermitian_map(std::uint64_t seed, int d);

// --- serialization ------------------------------------------------------------

// {"d_in", "d_out", and exactly one of "kraus" or "choi"}; complex entries
// are [re, im] pairs.
LinearMap channel_from_json(const std::string& text);
std::string channel_to_json(const LinearMap& m);

// "name?k=v&k=v", e.g. "depolarizing_inverse?p=0.3&d=2".  Vector-valued
// parameters use commas: "dephasing_general_inverse?p=0.7,0.2,0.1".
LinearMap builtin_from_spec(const std::string& spec);
std::vector<std::string> builtin_names();
// "builtin:<spec>" or a path to a channel JSON file.
LinearMap load_channel(const std::string& source);

}  // namespace nonphys::channels
