// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0
//
// Complex Hermitian operators on finite-dimensional spaces and the handful of
// tensor operations the rest of the library needs.  Bipartite operators are
// ordered A (x) B with basis index a * dB + b.

#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nonphys/errors.hpp"

namespace nonphys::linalg {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermiticityTol = 1e-10;

enum class Subsystem { kA, kB };

class HermitianOperator {
 public:
  HermitianOperator() = default;

  // Rejects input whose anti-Hermitian part exceeds tol * max(1, max|m_ij|).
  explicit HermitianOperator(ComplexMatrix m, double tol = kHermiticityTol);

  // Projects onto the Hermitian part.  Only for values that are Hermitian by
  // construction and carry rounding noise.
  static HermitianOperator symmetrized(const ComplexMatrix& m);
  static HermitianOperator zero(int d);
  static HermitianOperator identity(int d);
  static HermitianOperator from_real(const RealMatrix& m);
  // |v><v|
  static HermitianOperator projector(const ComplexVector& v);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  cplx operator()(int i, int j) const { return m_(i, j); }
  double trace() const { return m_.trace().real(); }

  HermitianOperator operator+(const HermitianOperator& o) const;
  HermitianOperator operator-(const HermitianOperator& o) const;
  HermitianOperator operator-() const;
  HermitianOperator operator*(double s) const;
  HermitianOperator& operator+=(const HermitianOperator& o);
  HermitianOperator& operator-=(const HermitianOperator& o);

 private:
  ComplexMatrix m_;
};

inline HermitianOperator operator*(double s, const HermitianOperator& h) {
  return h * s;
}

// Eigenvalues ascending, eigenvectors as columns.
struct Spectrum {
  RealVector values;
  ComplexMatrix vectors;
};

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
HermitianOperator kron(const HermitianOperator& a, const HermitianOperator& b);

// Traces out `traced` and returns the operator on the remaining factor.
ComplexMatrix partial_trace(const ComplexMatrix& m, int dA, int dB,
                            Subsystem traced);
HermitianOperator partial_trace(const HermitianOperator& h, int dA, int dB,
                                Subsystem traced);

ComplexMatrix partial_transpose(const ComplexMatrix& m, int dA, int dB,
                                Subsystem which);
HermitianOperator partial_transpose(const HermitianOperator& h, int dA, int dB,
                                    Subsystem which);

HermitianOperator transpose(const HermitianOperator& h);

Spectrum eigh(const HermitianOperator& h);
RealVector eigenvalues(const HermitianOperator& h);
double lambda_min(const HermitianOperator& h);
double lambda_max(const HermitianOperator& h);

double trace_norm(const HermitianOperator& h);
// Trace norm of a general matrix via singular values.
double trace_norm(const ComplexMatrix& m);
double operator_norm(const HermitianOperator& h);

struct PosNegParts {
  HermitianOperator positive;
  HermitianOperator negative;  // h = positive - negative, both PSD
};
PosNegParts positive_negative_parts(const HermitianOperator& h);

// Tr(a b) for Hermitian a, b (always real).
double hs_inner(const HermitianOperator& a, const HermitianOperator& b);

bool is_psd(const HermitianOperator& h, double tol);

// Principal square root of a PSD operator (negative eigenvalues clipped).
HermitianOperator sqrt_psd(const HermitianOperator& h);
// Nearest PSD operator in Frobenius norm.
HermitianOperator project_psd(const HermitianOperator& h);

// --- real symmetric embedding of complex Hermitian matrices ---------------

// [[Re H, -Im H], [Im H, Re H]], a 2d x 2d real symmetric matrix.
RealMatrix realify(const ComplexMatrix& h);
// Inverse of realify on the structured subspace; averages the redundant
// copies so that it is also the orthogonal projection onto that subspace.
ComplexMatrix derealify(const RealMatrix& x);

// --- reference bases ----------------------------------------------------------

// Real-linear basis of Hermitian d x d matrices: d diagonal units, then for
// each k < l the pair |k><l|+|l><k| and i(|k><l| - |l><k|).  Not normalized.
std::vector<HermitianOperator> hermitian_basis(int d);

// d^2 pure states spanning Herm(d): |k><k|, then for k < l the projectors
// onto (|k>+|l>)/sqrt2 and (|k>+i|l>)/sqrt2.
std::vector<HermitianOperator> tomographic_states(int d);

// Real coordinates of h: the d diagonal entries, then Re h_kl and Im h_kl for
// each k < l.  Bijective onto R^(d*d).
RealVector hermitian_coordinates(const HermitianOperator& h);
HermitianOperator from_hermitian_coordinates(const RealVector& c, int d);

// --- random sampling ----------------------------------------------------------

using Rng = std::mt19937_64;
ComplexMatrix random_ginibre(Rng& rng, int rows, int cols);
HermitianOperator random_hermitian(Rng& rng, int d);
HermitianOperator random_density(Rng& rng, int d);
ComplexVector random_pure_state(Rng& rng, int d);

}  // namespace nonphys::linalg
