// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>

#include "nonphys/kernels.hpp"
#include "nonphys/sdp.hpp"
#include "test_util.hpp"

namespace nonphys::sdp {
namespace {

using linalg::HermitianOperator;
using linalg::Rng;

TEST(ConeProgram, IndexLayout) {
  ConeProgram p;
  const int a = p.add_block(BlockKind::kPsd, 3);
  const int b = p.add_block(BlockKind::kNonneg, 2);
  EXPECT_EQ(p.num_vars(), 11);
  EXPECT_EQ(p.psd_index(a, 1, 2), 7);
  EXPECT_EQ(p.vec_index(b, 1), 10);
  EXPECT_THROW(p.psd_index(b, 0, 0), DimensionError);
  EXPECT_THROW(p.add_block(BlockKind::kPsd, 0), DimensionError);
}

TEST(Solver, TrivialLp) {
  // min x1  s.t.  x1 - x2 = 3,  x >= 0
  ConeProgram p;
  const int blk = p.add_block(BlockKind::kNonneg, 2);
  p.add_objective(p.vec_index(blk, 0), 1.0);
  const int r = p.add_row(3.0);
  p.add_coefficient(r, p.vec_index(blk, 0), 1.0);
  p.add_coefficient(r, p.vec_index(blk, 1), -1.0);
  const Solution s = solve(p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.primal_objective, 3.0, 1e-7);
  EXPECT_NEAR(s.dual_objective, 3.0, 1e-7);
  EXPECT_TRUE(verify_certificate(p, s, 1e-7).ok);
}

TEST(Solver, SmallestTSuchThatTMinusPauliXIsPsd) {
  // min t  s.t.  Z - t I = -sigma_x,  Z psd, t >= 0
  ConeProgram p;
  const int z = p.add_block(BlockKind::kPsd, 2);
  const int t = p.add_block(BlockKind::kNonneg, 1);
  p.add_objective(p.vec_index(t, 0), 1.0);
  const double target[2][2] = {{0.0, -1.0}, {-1.0, 0.0}};
  for (int i = 0; i < 2; ++i)
    for (int j = i; j < 2; ++j) {
      const int r = p.add_row(target[i][j]);
      p.add_coefficient(r, p.psd_index(z, i, j), 1.0);
      if (i == j) p.add_coefficient(r, p.vec_index(t, 0), -1.0);
    }
  const Solution s = solve(p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.primal_objective, 1.0, 1e-7);
}

// Brute-force LP oracle: enumerate basic feasible solutions.
double lp_vertex_oracle(const linalg::RealMatrix& A, const linalg::RealVector& b,
                        const linalg::RealVector& c) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> idx(m);
  std::vector<bool> mask(n, false);
  std::fill(mask.begin(), mask.begin() + m, true);
  do {
    int t = 0;
    for (int j = 0; j < n; ++j)
      if (mask[j]) idx[t++] = j;
    linalg::RealMatrix B(m, m);
    for (int k = 0; k < m; ++k) B.col(k) = A.col(idx[k]);
    Eigen::FullPivLU<linalg::RealMatrix> lu(B);
    if (lu.rank() < m) continue;
    const linalg::RealVector xb = lu.solve(b);
    if (xb.minCoeff() < -1e-12) continue;
    double v = 0.0;
    for (int k = 0; k < m; ++k) v += c(idx[k]) * xb(k);
    best = std::min(best, v);
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return best;
}

TEST(Solver, RandomLpsMatchVertexEnumeration) {
  Rng rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int solved = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int m = 3, n = 7;
    linalg::RealMatrix A(m, n);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) A(i, j) = u(rng);
    // Feasible by construction, bounded because c > 0.
    linalg::RealVector x0(n);
    for (int j = 0; j < n; ++j) x0(j) = 0.5 + 0.5 * u(rng);
    const linalg::RealVector b = A * x0;
    linalg::RealVector c(n);
    for (int j = 0; j < n; ++j) c(j) = 1.1 + u(rng);
    ConeProgram p;
    const int blk = p.add_block(BlockKind::kNonneg, n);
    for (int j = 0; j < n; ++j) p.add_objective(p.vec_index(blk, j), c(j));
    for (int i = 0; i < m; ++i) {
      const int r = p.add_row(b(i));
      for (int j = 0; j < n; ++j) p.add_coefficient(r, p.vec_index(blk, j), A(i, j));
    }
    const Solution s = solve(p);
    ASSERT_EQ(s.status, Status::kOptimal);
    EXPECT_NEAR(s.primal_objective, lp_vertex_oracle(A, b, c), 1e-6);
    ++solved;
  }
  EXPECT_EQ(solved, 30);
}

TEST(Solver, HermitianMinEigenvalueProgram) {
  // min Tr(H X) s.t. Tr X = 1, X psd has value lambda_min(H).
  Rng rng(22);
  for (int d : {1, 2, 3, 4, 6}) {
    const HermitianOperator h = linalg::random_hermitian(rng, d);
    HermitianProgram hp;
    const auto x = hp.add_psd(d);
    hp.add_objective(x, h);
    hp.add_scalar_equality({{x, HermitianOperator::identity(d)}}, {}, 1.0);
    const Solution s = solve(hp.program());
    ASSERT_EQ(s.status, Status::kOptimal);
    EXPECT_NEAR(s.primal_objective, linalg::lambda_min(h), 1e-7);
    EXPECT_NEAR(s.dual_objective, linalg::lambda_min(h), 1e-7);
    const HermitianOperator xv = hp.value(s.x, x);
    EXPECT_NEAR(xv.trace(), 1.0, 1e-8);
    EXPECT_NEAR(linalg::hs_inner(h, xv), linalg::lambda_min(h), 1e-7);
  }
}

TEST(Solver, HermitianEqualityWithPartialTrace) {
  // min Tr(H M) s.t. Tr_B M = 1_A / 2, M psd.
  Rng rng(23);
  const HermitianOperator h = linalg::random_hermitian(rng, 4);
  HermitianProgram hp;
  const auto m = hp.add_psd(4);
  hp.add_objective(m, h);
  hp.add_equality({{m, 1.0, HermitianProgram::Map::kTraceB, 2, 2}}, {},
                  HermitianOperator::identity(2) * 0.5);
  const Solution s = solve(hp.program());
  ASSERT_EQ(s.status, Status::kOptimal);
  const HermitianOperator mv = hp.value(s.x, m);
  EXPECT_LT(testing::max_abs_diff(
                linalg::partial_trace(mv, 2, 2, linalg::Subsystem::kB).matrix(),
                0.5 * linalg::ComplexMatrix::Identity(2, 2)),
            1e-7);
  // The product state 1/4 is feasible, so the optimum is no larger than Tr(H)/4,
  // and at least lambda_min(H) since Tr M = 1.
  EXPECT_LE(s.primal_objective, h.trace() / 4 + 1e-8);
  EXPECT_GE(s.primal_objective, linalg::lambda_min(h) - 1e-8);
  EXPECT_LT(std::abs(s.primal_objective - s.dual_objective), 1e-7);
}

TEST(Solver, FreeVariable) {
  // min x + z  s.t.  x = -2 (free),  z - x = 5, z >= 0
  ConeProgram p;
  const int f = p.add_block(BlockKind::kFree, 1);
  const int z = p.add_block(BlockKind::kNonneg, 1);
  p.add_objective(p.vec_index(f, 0), 1.0);
  p.add_objective(p.vec_index(z, 0), 1.0);
  int r = p.add_row(-2.0);
  p.add_coefficient(r, p.vec_index(f, 0), 1.0);
  r = p.add_row(5.0);
  p.add_coefficient(r, p.vec_index(z, 0), 1.0);
  p.add_coefficient(r, p.vec_index(f, 0), -1.0);
  const Solution s = solve(p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.x(p.vec_index(f, 0)), -2.0, 1e-6);
  EXPECT_NEAR(s.primal_objective, 1.0, 1e-6);
}

TEST(Solver, DetectsPrimalInfeasibility) {
  ConeProgram p;
  const int blk = p.add_block(BlockKind::kNonneg, 1);
  p.add_objective(p.vec_index(blk, 0), 1.0);
  const int r = p.add_row(-1.0);
  p.add_coefficient(r, p.vec_index(blk, 0), 1.0);
  EXPECT_EQ(solve(p).status, Status::kPrimalInfeasible);
}

TEST(Solver, DetectsDualInfeasibility) {
  // min -x1  s.t.  x1 - x2 = 0, x >= 0  (unbounded below)
  ConeProgram p;
  const int blk = p.add_block(BlockKind::kNonneg, 2);
  p.add_objective(p.vec_index(blk, 0), -1.0);
  const int r = p.add_row(0.0);
  p.add_coefficient(r, p.vec_index(blk, 0), 1.0);
  p.add_coefficient(r, p.vec_index(blk, 1), -1.0);
  EXPECT_EQ(solve(p).status, Status::kDualInfeasible);
}

TEST(Presolve, DropsDuplicateRows) {
  ConeProgram p;
  const int blk = p.add_block(BlockKind::kNonneg, 2);
  p.add_objective(p.vec_index(blk, 0), 1.0);
  for (int rep = 0; rep < 2; ++rep) {
    const int r = p.add_row(3.0);
    p.add_coefficient(r, p.vec_index(blk, 0), 1.0);
    p.add_coefficient(r, p.vec_index(blk, 1), -1.0);
  }
  const PresolveResult pre = presolve(p);
  EXPECT_EQ(pre.program.num_constraints(), 1);
  EXPECT_FALSE(pre.inconsistent);
  const Solution s = solve(p);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_EQ(s.dropped_rows.size(), 1u);
  EXPECT_NEAR(s.primal_objective, 3.0, 1e-7);
}

TEST(Presolve, InconsistentDuplicateIsInfeasible) {
  ConeProgram p;
  const int blk = p.add_block(BlockKind::kNonneg, 1);
  int r = p.add_row(1.0);
  p.add_coefficient(r, p.vec_index(blk, 0), 1.0);
  r = p.add_row(2.0);
  p.add_coefficient(r, p.vec_index(blk, 0), 2.0);
  EXPECT_FALSE(presolve(p).inconsistent);
  r = p.add_row(5.0);
  p.add_coefficient(r, p.vec_index(blk, 0), 1.0);
  EXPECT_TRUE(presolve(p).inconsistent);
  EXPECT_EQ(solve(p).status, Status::kPrimalInfeasible);
}

HermitianProgram random_min_eig_program(std::uint64_t seed, int d) {
  Rng rng(seed);
  const HermitianOperator h = linalg::random_hermitian(rng, d);
  HermitianProgram hp;
  const auto x = hp.add_psd(d);
  hp.add_objective(x, h);
  hp.add_scalar_equality({{x, HermitianOperator::identity(d)}}, {}, 1.0);
  return hp;
}

TEST(Solver, WeakDualityIdentityOnIterates) {
  const HermitianProgram hp = random_min_eig_program(24, 4);
  SolverConfig cfg;
  cfg.record_log = true;
  const Solution s = solve(hp.program(), cfg);
  ASSERT_EQ(s.status, Status::kOptimal);
  ASSERT_FALSE(s.log.empty());
  for (const IterationLog& it : s.log) {
    const double scale = 1.0 + std::abs(it.primal_objective) + std::abs(it.dual_objective);
    // pobj - dobj = <X,S> - y'r_p + <R_d,X>
    EXPECT_NEAR(it.primal_objective - it.dual_objective,
                it.complementarity + it.residual_duality_term, 1e-9 * scale);
    EXPECT_GE(it.complementarity, 0.0);
    if (it.primal_infeasibility <= 1e-8 && it.dual_infeasibility <= 1e-8)
      EXPECT_GE(it.primal_objective - it.dual_objective, -1e-7 * scale);
  }
}

TEST(Solver, Deterministic) {
  const HermitianProgram hp = random_min_eig_program(25, 3);
  const Solution a = solve(hp.program());
  const Solution b = solve(hp.program());
  EXPECT_EQ(a.iterations, b.iterations);
  EXPECT_EQ(a.primal_objective, b.primal_objective);
  EXPECT_TRUE(a.x == b.x);
  EXPECT_TRUE(a.y == b.y);
}

TEST(Solver, KernelBackendsAgree) {
  if (!kernels::backend_supported(kernels::Backend::kAvx2)) GTEST_SKIP();
  const HermitianProgram hp = random_min_eig_program(26, 5);
  const kernels::Backend before = kernels::active_backend();
  kernels::set_backend(kernels::Backend::kScalar);
  const Solution a = solve(hp.program());
  kernels::set_backend(kernels::Backend::kAvx2);
  const Solution b = solve(hp.program());
  kernels::set_backend(before);
  ASSERT_EQ(a.status, Status::kOptimal);
  ASSERT_EQ(b.status, Status::kOptimal);
  EXPECT_NEAR(a.primal_objective, b.primal_objective, 1e-8);
}

TEST(Certificate, DetectsTamperedSolution) {
  const HermitianProgram hp = random_min_eig_program(27, 3);
  Solution s = solve(hp.program());
  ASSERT_TRUE(verify_certificate(hp.program(), s, 1e-7).ok);
  s.y *= 1.1;
  EXPECT_FALSE(verify_certificate(hp.program(), s, 1e-7).ok);
}

TEST(Io, JsonRoundTrip) {
  const HermitianProgram hp = random_min_eig_program(28, 2);
  const ConeProgram back = program_from_json(to_json(hp.program()));
  EXPECT_EQ(back.num_vars(), hp.program().num_vars());
  EXPECT_EQ(back.num_constraints(), hp.program().num_constraints());
  EXPECT_TRUE(back.c() == hp.program().c());
  const Solution a = solve(hp.program());
  const Solution b = solve(back);
  EXPECT_NEAR(a.primal_objective, b.primal_objective, 1e-10);
  EXPECT_THROW(program_from_json("{\"blocks\": 3}"), ParseError);
}

}  // namespace
}  // namespace nonphys::sdp
