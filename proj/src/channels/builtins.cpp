// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <sstream>

#include "nonphys/channels.hpp"

namespace nonphys::channels {

using linalg::ComplexVector;
using linalg::cplx;
using linalg::Rng;

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

void require_dim(int d) { require(d >= 1, "dimension must be >= 1"); }

HermitianOperator omega_projector(int d) {
  ComplexVector v = ComplexVector::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0;
  return HermitianOperator::projector(v);
}

LinearMap schur_multiplier_map(const ComplexMatrix& s) {
  const int d = static_cast<int>(s.rows());
  ComplexMatrix j = ComplexMatrix::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) j(a * d + a, b * d + b) = s(a, b);
  return LinearMap(d, d, HermitianOperator(j, 1e-10));
}

ComplexMatrix diag2(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

LinearMap identity(int d) {
  require_dim(d);
  return LinearMap(d, d, omega_projector(d));
}

LinearMap completely_depolarizing(int d) {
  require_dim(d);
  return LinearMap(d, d, HermitianOperator::identity(d * d) * (1.0 / d));
}

LinearMap depolarizing(double p, int d) {
  require_dim(d);
  require(p >= 0.0 && p <= 1.0, "depolarizing: p must lie in [0, 1]");
  return LinearMap(d, d, omega_projector(d) * (1.0 - p) +
                             HermitianOperator::identity(d * d) * (p / d));
}

LinearMap depolarizing_inverse(double p, int d) {
  require_dim(d);
  require(p >= 0.0 && p < 1.0, "depolarizing_inverse: p must lie in [0, 1)");
  return LinearMap(d, d, omega_projector(d) * (1.0 / (1.0 - p)) -
                             HermitianOperator::identity(d * d) * (p / ((1.0 - p) * d)));
}

ComplexMatrix dephasing_multiplier(const std::vector<double>& p) {
  const int d = static_cast<int>(p.size());
  require(d >= 1, "dephasing: empty probability vector");
  bool any = false;
  for (double x : p) {
    require(x >= 0.0 && std::isfinite(x), "dephasing: p_i must be nonnegative");
    any = any || x > 0.0;
  }
  require(any, "dephasing: at least one p_i must be positive");
  ComplexMatrix s(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) {
      cplx v = 0.0;
      for (int i = 0; i < d; ++i) {
        const double ang = 2.0 * std::numbers::pi * i * (j - k) / d;
        v += p[i] * cplx(std::cos(ang), std::sin(ang));
      }
      s(j, k) = v;
    }
  return s;
}

LinearMap dephasing_general(const std::vector<double>& p) {
  return schur_multiplier_map(dephasing_multiplier(p));
}

LinearMap dephasing_general_inverse(const std::vector<double>& p) {
  const ComplexMatrix s = dephasing_multiplier(p);
  ComplexMatrix inv(s.rows(), s.cols());
  for (Eigen::Index j = 0; j < s.rows(); ++j)
    for (Eigen::Index k = 0; k < s.cols(); ++k) {
      if (std::abs(s(j, k)) < 1e-12) {
        std::ostringstream os;
        os << "dephasing_general_inverse: multiplier entry (" << j << "," << k
           << ") vanishes, map is not invertible";
        throw SingularMapError(os.str());
      }
      inv(j, k) = 1.0 / s(j, k);
    }
  return schur_multiplier_map(inv);
}

LinearMap dephasing(double p) {
  require(p >= 0.0 && p <= 1.0, "dephasing: p must lie in [0, 1]");
  return dephasing_general({1.0 - p, p});
}

LinearMap dephasing_inverse(double p) {
  require(p >= 0.0 && p <= 1.0, "dephasing_inverse: p must lie in [0, 1]");
  return dephasing_general_inverse({1.0 - p, p});
}

LinearMap amplitude_damping(double gamma) {
  require(gamma >= 0.0 && gamma <= 1.0, "amplitude_damping: gamma must lie in [0, 1]");
  ComplexMatrix a0 = diag2(1.0, std::sqrt(1.0 - gamma));
  ComplexMatrix a1 = ComplexMatrix::Zero(2, 2);
  a1(0, 1) = std::sqrt(gamma);
  return from_kraus({a0, a1});
}

LinearMap amplitude_damping_inverse(double gamma) {
  require(gamma >= 0.0 && gamma < 1.0,
          "amplitude_damping_inverse: gamma must lie in [0, 1)");
  // |0><0| -> |0><0|, |1><1| -> (|1><1| - gamma |0><0|) / (1 - gamma),
  // coherences scaled by 1 / sqrt(1 - gamma).
  ComplexMatrix j = ComplexMatrix::Zero(4, 4);
  j(0, 0) = 1.0;
  j(2, 2) = -gamma / (1.0 - gamma);
  j(3, 3) = 1.0 / (1.0 - gamma);
  j(0, 3) = j(3, 0) = 1.0 / std::sqrt(1.0 - gamma);
  return LinearMap(2, 2, HermitianOperator(j));
}

LinearMap leakage(double p) {
  require(p >= 0.0 && p <= 1.0, "leakage: p must lie in [0, 1]");
  return from_kraus({diag2(1.0, std::sqrt(1.0 - p))});
}

LinearMap leakage_inverse(double p) {
  require(p >= 0.0 && p < 1.0, "leakage_inverse: p must lie in [0, 1)");
  return from_kraus({diag2(1.0, 1.0 / std::sqrt(1.0 - p))});
}

LinearMap transpose_map(int d) {
  require_dim(d);
  ComplexMatrix j = ComplexMatrix::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) j(a * d + b, b * d + a) = 1.0;
  return LinearMap(d, d, HermitianOperator(j));
}

LinearMap choi_map(bool normalized) {
  const int d = 3;
  ComplexMatrix j = ComplexMatrix::Zero(9, 9);
  for (int i = 0; i < d; ++i) {
    // C(|i><i|) has ones at positions i and i-1 (cyclically).
    j(i * d + i, i * d + i) = 1.0;
    const int prev = (i + d - 1) % d;
    j(i * d + prev, i * d + prev) = 1.0;
    for (int k = 0; k < d; ++k)
      if (k != i) j(i * d + i, k * d + k) = -1.0;
  }
  if (normalized) j *= 0.5;
  return LinearMap(d, d, HermitianOperator(j));
}

LinearMap extreme_disparity() {
  ComplexMatrix j = ComplexMatrix::Zero(4, 4);
  j(0, 0) = 1.0;
  j(3, 3) = -1.0;
  return LinearMap(2, 2, HermitianOperator(j));
}

LinearMap trace_functional(const HermitianOperator& p) {
  return LinearMap(p.dim(), 1, linalg::transpose(p));
}

LinearMap random_hermitian_map(std::uint64_t seed, int d) {
  require_dim(d);
  Rng rng(seed);
  return LinearMap(d, d, linalg::random_hermitian(rng, d * d));
}

LinearMap random_tp_map(std::uint64_t seed, int d) {
  const LinearMap raw = random_hermitian_map(seed, d);
  const HermitianOperator defect = HermitianOperator::identity(d) - choi_marginal(raw);
  const HermitianOperator fix =
      linalg::kron(defect, HermitianOperator::identity(d)) * (1.0 / d);
  return LinearMap(d, d, raw.choi() + fix);
}

LinearMap random_cp_map(std::uint64_t seed, int d) {
  require_dim(d);
  Rng rng(seed);
  std::vector<ComplexMatrix> kraus;
  for (int k = 0; k < d; ++k) kraus.push_back(linalg::random_ginibre(rng, d, d) / d);
  return from_kraus(kraus);
}

LinearMap random_channel(std::uint64_t seed, int d) {
  require_dim(d);
  Rng rng(seed);
  std::vector<ComplexMatrix> kraus;
  ComplexMatrix s = ComplexMatrix::Zero(d, d);
  for (int k = 0; k < d; ++k) {
    kraus.push_back(linalg::random_ginibre(rng, d, d));
    s += kraus.back().adjoint() * kraus.back();
  }
  // K_k S^{-1/2} makes sum K^dagger K = 1.
  const linalg::Spectrum sp = linalg::eigh(HermitianOperator::symmetrized(s));
  const ComplexMatrix isqrt = sp.vectors *
                              sp.values.cwiseSqrt().cwiseInverse().cast<cplx>().asDiagonal() *
                              sp.vectors.adjoint();
  for (ComplexMatrix& k : kraus) k = k * isqrt;
  return from_kraus(kraus);
}

}  // namespace nonphys::channels
