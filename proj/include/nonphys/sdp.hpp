// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0
//
// Primal-dual interior-point solver for real conic programs
//
//   min  <c, x>   s.t.  A x = b,  x in K
//   max  <b, y>   s.t.  c - A^T y = s in K*
//
// where K is a product of real symmetric PSD cones, nonnegative orthants and
// free blocks.  PSD blocks are stored in full as n*n column-major entries; the
// inner product of a coefficient block with X is sum_pq a_pq X_pq.

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nonphys/linalg.hpp"

namespace nonphys::sdp {

using linalg::RealMatrix;
using linalg::RealVector;

enum class BlockKind { kPsd, kNonneg, kFree };

struct Block {
  BlockKind kind;
  int size;  // matrix order for PSD blocks, vector length otherwise
  int length() const { return kind == BlockKind::kPsd ? size * size : size; }
};

struct SparseRow {
  std::vector<std::pair<int, double>> entries;  // (variable index, value)
};

class ConeProgram {
 public:
  int add_block(BlockKind kind, int size);

  const std::vector<Block>& blocks() const { return blocks_; }
  int offset(int block) const { return offsets_.at(block); }
  int num_vars() const { return num_vars_; }
  int num_constraints() const { return static_cast<int>(rows_.size()); }

  int psd_index(int block, int i, int j) const;
  int vec_index(int block, int k) const;

  void add_objective(int var, double v);
  // Adds <s, X_block> for a symmetric s.
  void add_objective_matrix(int block, const RealMatrix& s);
  void add_objective_constant(double v) { objective_constant_ += v; }

  int add_row(double rhs);
  void add_coefficient(int row, int var, double v);
  void add_row_matrix(int row, int block, const RealMatrix& s);

  // Sorts row entries and merges duplicates.  Called by the solver on a copy;
  // calling it explicitly only makes dumps canonical.
  void canonicalize();

  const RealVector& c() const { return c_; }
  const RealVector& b() const { return b_; }
  const std::vector<SparseRow>& rows() const { return rows_; }
  double objective_constant() const { return objective_constant_; }

  // Sign flip so a maximization can be posed as minimization.
  void negate_objective();

  RealVector apply_A(const RealVector& x) const;
  RealVector apply_At(const RealVector& y) const;

  // Extracts a PSD block of x (or s) as an n x n matrix.
  RealMatrix block_matrix(const RealVector& v, int block) const;

 private:
  std::vector<Block> blocks_;
  std::vector<int> offsets_;
  int num_vars_ = 0;
  RealVector c_;
  RealVector b_;
  std::vector<SparseRow> rows_;
  double objective_constant_ = 0.0;
};

enum class Status { kOptimal, kPrimalInfeasible, kDualInfeasible, kMaxIterations };
std::string to_string(Status s);

struct SolverConfig {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iterations = 100;
  double step_fraction = 0.98;
  double divergence_threshold = 1e10;
  int stagnation_window = 30;
  bool presolve = true;
  bool record_log = false;
};

struct IterationLog {
  int iteration;
  double primal_objective;
  double dual_objective;
  double primal_infeasibility;
  double dual_infeasibility;
  double mu;
  double complementarity;           // <X,S> summed over cones
  double residual_duality_term;     // -y'r_p + <R_d, X>
  double alpha_primal;
  double alpha_dual;
};

struct Solution {
  Status status = Status::kMaxIterations;
  RealVector x;
  RealVector y;
  RealVector s;
  double primal_objective = 0.0;  // includes the objective constant
  double dual_objective = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double relative_gap = 0.0;
  int iterations = 0;
  std::vector<int> dropped_rows;  // removed by presolve; y is zero there
  std::vector<IterationLog> log;
};

Solution solve(const ConeProgram& program, const SolverConfig& config = {});

struct PresolveResult {
  ConeProgram program;          // with dependent rows removed
  std::vector<int> kept_rows;   // indices into the original rows
  bool inconsistent = false;    // dropped rows disagree with b
};

// Drops linearly dependent rows found by column-pivoted QR at threshold tol.
PresolveResult presolve(const ConeProgram& program, double tol = 1e-10);

struct CertificateReport {
  bool ok = false;
  double primal_residual = 0.0;   // ||b - Ax|| / (1 + ||b||)
  double dual_residual = 0.0;     // ||c - A^T y - s|| / (1 + ||c||)
  double relative_gap = 0.0;      // |pobj - dobj| / max(1, |pobj|)
  double min_primal_eig = 0.0;    // smallest cone eigenvalue of x
  double min_dual_eig = 0.0;      // smallest cone eigenvalue of s
  std::string message;
};

// Recomputes residuals, gap and cone membership from scratch.
CertificateReport verify_certificate(const ConeProgram& program,
                                     const Solution& solution, double tol);

// Debug dump: {"blocks": [[kind, size]...], "c": [...], "A": [[...]...],
// "b": [...], "objective_constant": v}.  A is dense row-major.
std::string to_json(const ConeProgram& program);
ConeProgram program_from_json(const std::string& text);

// Builder for programs over complex Hermitian PSD variables.  Each d x d
// variable is stored as a real 2d x 2d PSD block holding realify(V); linear
// functionals Tr(H V) become <realify(H)/2, realify(V)>.
class HermitianProgram {
 public:
  struct Var {
    int block = -1;
    int dim = 0;
  };
  struct Scalar {
    int block = -1;
  };

  enum class Map {
    kIdentity,       // V
    kTraceB,         // Tr_B V, V on dA*dB
    kKronIdentityB,  // V (x) 1_B, V on dA
  };
  struct Term {
    Var var;
    double coeff = 1.0;
    Map map = Map::kIdentity;
    int dA = 0;
    int dB = 0;
  };
  struct ScalarTerm {
    Scalar s;
    double coeff = 1.0;
  };
  struct TraceTerm {
    Var var;
    linalg::HermitianOperator weight;  // contributes Tr(weight V)
  };

  Var add_psd(int dim);
  Scalar add_nonneg();

  void add_objective(Var v, const linalg::HermitianOperator& h);
  void add_objective(Scalar s, double c);
  void add_objective_constant(double c);

  // sum_t coeff_t L_t(V_t) + sum_s coeff_s s 1 = rhs, one real row per
  // element of hermitian_basis(rhs.dim()).
  void add_equality(const std::vector<Term>& terms,
                    const std::vector<ScalarTerm>& scalars,
                    const linalg::HermitianOperator& rhs);

  void add_scalar_equality(const std::vector<TraceTerm>& terms,
                           const std::vector<ScalarTerm>& scalars, double rhs);

  const ConeProgram& program() const { return program_; }
  ConeProgram& mutable_program() { return program_; }

  linalg::HermitianOperator value(const RealVector& x, Var v) const;
  double value(const RealVector& x, Scalar s) const;

 private:
  void add_var_coefficient(int row, const Term& t,
                           const linalg::HermitianOperator& e);
  ConeProgram program_;
};

}  // namespace nonphys::sdp
