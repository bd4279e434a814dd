// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>

#include "nonphys/errors.hpp"
#include "nonphys/measures.hpp"

namespace nonphys::measures {

namespace {

HermitianOperator ancilla_projector(int k) {
  linalg::ComplexVector e = linalg::ComplexVector::Zero(2);
  e(k) = 1.0;
  return HermitianOperator::projector(e);
}

}  // namespace

SimulationPlan build_simulation(const LinearMap& m, const MeasureOptions& opt) {
  const MeasureResult r = robustness_R(m, opt);
  return build_simulation(m, r);
}

SimulationPlan build_simulation(const LinearMap& m, const MeasureResult& r) {
  if (!r.optimal()) throw SolverError("build_simulation: robustness R is " + sdp::to_string(r.status));
  const auto it = r.primal_witness.operators.find("M_minus");
  if (it == r.primal_witness.operators.end())
    throw DomainError("build_simulation: result carries no decomposition witness");

  const double R = std::max(0.0, r.value);
  const int dA = m.d_in();
  const int dB = m.d_out();
  // Rebuild M+ from M- so that (1 + R) L+ - R L- reproduces J exactly.
  const bool trivial = R < 1e-12;
  const HermitianOperator m_minus = trivial ? HermitianOperator::zero(dA * dB) : it->second;
  const HermitianOperator m_plus = m.choi() + m_minus;

  const LinearMap l_plus(dA, dB, m_plus * (1.0 / (1.0 + R)));
  const LinearMap l_minus(dA, dB, trivial ? m_minus : m_minus * (1.0 / R));

  SimulationPlan plan;
  plan.mu_plus = 1.0 + R;
  plan.mu_minus = R;
  plan.omega_plus = ancilla_projector(0);
  plan.omega_minus = ancilla_projector(1);
  plan.x = plan.omega_plus * plan.mu_plus - plan.omega_minus * plan.mu_minus;
  plan.lambda = channels::tensor(l_plus, channels::trace_functional(plan.omega_plus)) +
                channels::tensor(l_minus, channels::trace_functional(plan.omega_minus));
  return plan;
}

double verify_simulation(const SimulationPlan& plan, const LinearMap& m, int probe_count,
                         std::uint64_t seed) {
  const int dA = m.d_in();
  const int dX = plan.x.dim();
  if (plan.lambda.d_in() != dA * dX || plan.lambda.d_out() != m.d_out())
    throw DimensionError("verify_simulation: plan dimensions do not match the map");

  std::vector<HermitianOperator> inputs = linalg::hermitian_basis(dA);
  linalg::Rng rng(seed);
  for (int i = 0; i < probe_count; ++i) inputs.push_back(linalg::random_density(rng, dA));

  double worst = 0.0;
  for (const auto& rho : inputs) {
    const auto simulated = channels::apply(plan.lambda, linalg::kron(rho, plan.x));
    worst = std::max(worst, linalg::trace_norm(simulated - channels::apply(m, rho)));
  }
  return worst;
}

}  // namespace nonphys::measures
