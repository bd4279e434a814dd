// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "nonphys/measures.hpp"
#include "test_util.hpp"

namespace nonphys::measures {
namespace {

using channels::LinearMap;
using testing::basis_projector;

double best(const BoundsReport& r, Measure q, Side s) {
  const auto b = r.best(q, s);
  EXPECT_TRUE(b.has_value()) << measure_name(q);
  return b ? b->value : std::nan("");
}

double value_from(const BoundsReport& r, Measure q, Side s, const std::string& source) {
  for (const auto& b : r.bounds)
    if (b.quantity == q && b.side == s && b.source == source) return b.value;
  ADD_FAILURE() << "no bound from " << source;
  return std::nan("");
}

// SWAP on C^d (x) C^d built entry by entry.
HermitianOperator swap_operator(int d) {
  linalg::ComplexMatrix s = linalg::ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) s(i * d + j, j * d + i) = 1.0;
  return HermitianOperator(s);
}

TEST(TraceNormBounds, TransposeQubit) {
  // SWAP has eigenvalues +1 (x3) and -1 (x1).
  const auto spec = linalg::eigenvalues(swap_operator(2));
  const double expected_norm = spec.cwiseAbs().sum();
  ASSERT_NEAR(expected_norm, 4.0, 1e-12);
  const auto r = bounds_trace_norm(channels::transpose_map(2));
  EXPECT_NEAR(best(r, Measure::kCptniNorm, Side::kUpper), expected_norm, 1e-9);
  EXPECT_NEAR(best(r, Measure::kCptniNorm, Side::kLower), expected_norm / 2, 1e-9);
}

TEST(TraceNormBounds, CpMapHasZeroNegativePart) {
  const auto r = bounds_trace_norm(channels::random_cp_map(3, 2));
  EXPECT_NEAR(best(r, Measure::kRdoubleprime, Side::kUpper), 0.0, 1e-9);
  EXPECT_NEAR(best(r, Measure::kRdoubleprime, Side::kLower), 0.0, 1e-9);
}

TEST(TraceNormBounds, DepolarizingInverseLowerBoundIsTight) {
  for (double p : {0.3, 0.5}) {
    const double closed = (1.0 + 0.5 * p) / (1.0 - p);
    const auto r = bounds_trace_norm(channels::depolarizing_inverse(p, 2));
    EXPECT_NEAR(value_from(r, Measure::kDiamond, Side::kLower, "trace_norm"), closed, 1e-9);
    const auto u = bounds_upper(channels::depolarizing_inverse(p, 2));
    EXPECT_NEAR(best(u, Measure::kDiamond, Side::kUpper), closed, 1e-9);
  }
}

TEST(UpperBounds, ExtremeDisparityDiamond) {
  const auto r = bounds_upper(channels::extreme_disparity());
  EXPECT_NEAR(best(r, Measure::kDiamond, Side::kUpper), 1.0, 1e-9);
}

TEST(UpperBounds, TransposeRobustnessIsTight) {
  for (int d : {2, 3, 4}) {
    const auto r = bounds_upper(channels::transpose_map(d));
    EXPECT_NEAR(best(r, Measure::kR, Side::kUpper), 0.5 * (d - 1), 1e-9) << d;
  }
}

TEST(UpperBounds, CpMapRdoubleprimeIsZero) {
  const auto r = bounds_upper(channels::random_channel(4, 3));
  EXPECT_NEAR(best(r, Measure::kRdoubleprime, Side::kUpper), 0.0, 1e-9);
}

TEST(LowerBounds, AmplitudeDampingInverseProbe) {
  for (double g : {0.2, 0.5}) {
    const auto r = bounds_lower(channels::amplitude_damping_inverse(g));
    EXPECT_NEAR(value_from(r, Measure::kDiamond, Side::kLower, "probe:basis:1"),
                (1.0 + g) / (1.0 - g), 1e-9);
  }
}

TEST(LowerBounds, DephasingInverseUniformProbe) {
  for (double p : {0.1, 0.25}) {
    const auto r = bounds_lower(channels::dephasing_inverse(p));
    const auto b = r.best(Measure::kDiamond, Side::kLower);
    ASSERT_TRUE(b);
    EXPECT_EQ(b->source, "probe:uniform_superposition");
    EXPECT_NEAR(b->value, 1.0 / (1.0 - 2.0 * p), 1e-9);
  }
}

TEST(LowerBounds, ExtremeDisparityBaseNorm) {
  const auto r = bounds_lower(channels::extreme_disparity());
  EXPECT_NEAR(best(r, Measure::kCptniNorm, Side::kLower), 2.0, 1e-9);
}

TEST(LowerBounds, ChannelDiamondBoundsAreOne) {
  const LinearMap m = channels::random_channel(9, 3);
  const auto r = all_bounds(m);
  for (const auto& b : r.bounds) {
    if (b.quantity != Measure::kDiamond) continue;
    if (b.side == Side::kLower) {
      EXPECT_LE(b.value, 1.0 + 1e-9) << b.source;
    }
    if (b.side == Side::kUpper) {
      EXPECT_NEAR(b.value, 1.0, 1e-9) << b.source;
    }
  }
}

TEST(LowerBounds, UserProbesAreUsed) {
  Probe p{"custom", basis_projector(2, 1)};
  const auto r = bounds_lower(channels::amplitude_damping_inverse(0.5), {p});
  EXPECT_NEAR(value_from(r, Measure::kDiamond, Side::kLower, "probe:basis:1"), 3.0, 1e-9);
}

TEST(Sandwich, CertifiedValuesLieInsideBounds) {
  for (int seed = 0; seed < 10; ++seed) {
    const LinearMap m = channels::random_hermitian_map(seed, 2);
    BoundsReport r = all_bounds(m);
    for (Measure q : all_measures()) r.certified[q] = evaluate(q, m).value;
    const auto v = r.violations(1e-6);
    EXPECT_TRUE(v.empty()) << seed << ": " << (v.empty() ? "" : v.front());
  }
}

TEST(Sandwich, ViolationsAreReported) {
  BoundsReport r;
  r.add(Measure::kDiamond, Side::kLower, 2.0, "a");
  r.add(Measure::kDiamond, Side::kUpper, 1.0, "b");
  EXPECT_EQ(r.violations().size(), 1u);
  BoundsReport c;
  c.add(Measure::kR, Side::kUpper, 0.5, "u");
  c.certified[Measure::kR] = 0.7;
  EXPECT_EQ(c.violations().size(), 1u);
}

TEST(ApproxInverse, ExactInverseMatchesProbeBounds) {
  const LinearMap fwd = channels::depolarizing(0.3, 2);
  const LinearMap inv = channels::depolarizing_inverse(0.3, 2);
  const auto a = approx_inverse_bounds(fwd, inv, 0.0);
  const auto l = bounds_lower(inv);
  for (Measure q : {Measure::kDiamond, Measure::kRprime, Measure::kRdoubleprime}) {
    const auto al = a.best(q, Side::kLower);
    ASSERT_TRUE(al);
    EXPECT_NEAR(al->value, value_from(l, q, Side::kLower, "probe:" + al->source.substr(15)),
                1e-9);
  }
}

TEST(ApproxInverse, AmplitudeDampingExcitedProbe) {
  const LinearMap fwd = channels::amplitude_damping(0.5);
  const LinearMap inv = channels::amplitude_damping_inverse(0.5);
  const Probe excited{"excited", basis_projector(2, 1)};
  const auto r0 = approx_inverse_bounds(fwd, inv, 0.0, {excited});
  // basis:1 is the same state and is listed first, so it carries the label.
  EXPECT_NEAR(best(r0, Measure::kDiamond, Side::kLower), 3.0, 1e-9);
  const auto r1 = approx_inverse_bounds(fwd, inv, 0.1, {excited});
  EXPECT_NEAR(best(r1, Measure::kDiamond, Side::kLower), 2.7, 1e-9);
}

TEST(ApproxInverse, ForwardImageOfExcitedStateIsNotTheWitness) {
  // sigma = A(|1><1|) pulls back to Z = |1><1|, whose trace norm is only 1.
  const LinearMap fwd = channels::amplitude_damping(0.5);
  const Probe image{"image", channels::apply(fwd, basis_projector(2, 1))};
  const auto z = channels::apply(channels::inverse(fwd), image.state);
  EXPECT_NEAR(linalg::trace_norm(z), 1.0, 1e-9);
}

TEST(ApproxInverse, RejectsTooSmallEps) {
  const LinearMap fwd = channels::depolarizing(0.2, 2);
  const LinearMap cand = channels::depolarizing_inverse(0.3, 2);
  EXPECT_THROW(approx_inverse_bounds(fwd, cand, 0.0), DomainError);
  EXPECT_NO_THROW(approx_inverse_bounds(fwd, cand, 0.5));
}

TEST(ApproxInverse, BoundsHoldForApproximateInverse) {
  const LinearMap fwd = channels::depolarizing(0.2, 2);
  const LinearMap cand = channels::depolarizing_inverse(0.25, 2);
  const auto r = approx_inverse_bounds(fwd, cand, 0.2);
  const double dia = evaluate(Measure::kDiamond, cand).value;
  EXPECT_LE(best(r, Measure::kDiamond, Side::kLower), dia + 1e-7);
}

}  // namespace
}  // namespace nonphys::measures
