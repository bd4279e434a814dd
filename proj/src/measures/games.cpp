// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "nonphys/errors.hpp"
#include "nonphys/measures.hpp"
#include "programs.hpp"

namespace nonphys::measures {

using linalg::Subsystem;
using sdp::HermitianProgram;

void validate_game(const Game& g) {
  const std::size_t n = g.p.size();
  if (g.states.size() != n)
    throw DimensionError("game: p and states have different lengths");
  if (g.weights.rows() != static_cast<Eigen::Index>(n) ||
      g.weights.cols() != static_cast<Eigen::Index>(g.povm.size()))
    throw DimensionError("game: weights must be |states| x |povm|");
  for (const auto& s : g.states)
    if (s.dim() != g.dA) throw DimensionError("game: state dimension differs from dA");
  for (const auto& m : g.povm)
    if (m.dim() != g.dB) throw DimensionError("game: POVM element dimension differs from dB");

  const double psum = std::accumulate(g.p.begin(), g.p.end(), 0.0);
  if (std::abs(psum - 1.0) > 1e-9) throw DomainError("game: probabilities do not sum to 1");
  for (double p : g.p)
    if (p < 0.0) throw DomainError("game: negative probability");

  HermitianOperator total = HermitianOperator::zero(g.dB);
  for (const auto& m : g.povm) {
    if (linalg::lambda_min(m) < -1e-10) throw DomainError("game: POVM element is not PSD");
    total += m;
  }
  if ((total - HermitianOperator::identity(g.dB)).matrix().cwiseAbs().maxCoeff() > 1e-9)
    throw DomainError("game: POVM elements do not sum to the identity");
}

Game game_from_witness(const HermitianOperator& w, int dA, int dB) {
  if (w.dim() != dA * dB) throw DimensionError("game_from_witness: witness dimension mismatch");
  const auto sigmas = linalg::tomographic_states(dA);
  const auto etas = linalg::tomographic_states(dB);
  const int n = static_cast<int>(sigmas.size() * etas.size());

  // W^{T_A} = sum_{ab} x_ab sigma_a (x) eta_b, solved in Hermitian coordinates.
  linalg::RealMatrix basis(n, n);
  int col = 0;
  for (const auto& s : sigmas)
    for (const auto& e : etas) basis.col(col++) = linalg::hermitian_coordinates(linalg::kron(s, e));
  const linalg::RealVector rhs =
      linalg::hermitian_coordinates(linalg::partial_transpose(w, dA, dB, Subsystem::kA));
  const Eigen::FullPivLU<linalg::RealMatrix> lu(basis);
  if (!lu.isInvertible()) throw SingularMapError("game_from_witness: product basis is singular");
  const linalg::RealVector x = lu.solve(rhs);

  HermitianOperator eta_sum = HermitianOperator::zero(dB);
  for (int i = 0; i < n; ++i) eta_sum += etas[i % etas.size()];
  const double norm = linalg::operator_norm(eta_sum);

  Game g;
  g.dA = dA;
  g.dB = dB;
  g.p.assign(n + 1, 1.0 / n);
  g.p[n] = 0.0;
  g.weights = linalg::RealMatrix::Zero(n + 1, n + 1);
  HermitianOperator rest = HermitianOperator::identity(dB);
  for (int i = 0; i < n; ++i) {
    g.states.push_back(sigmas[i / etas.size()]);
    g.povm.push_back(etas[i % etas.size()] * (1.0 / norm));
    rest -= g.povm.back();
    g.weights(i, i) = x(i) * n * norm;
  }
  g.states.push_back(HermitianOperator::identity(dA) * (1.0 / dA));
  g.povm.push_back(rest);
  return g;
}

double payoff(const LinearMap& m, const Game& g) {
  if (m.d_in() != g.dA || m.d_out() != g.dB)
    throw DimensionError("payoff: map and game dimensions differ");
  double total = 0.0;
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    if (g.p[i] == 0.0) continue;
    const HermitianOperator out = channels::apply(m, g.states[i]);
    for (std::size_t j = 0; j < g.povm.size(); ++j) {
      const double w = g.weights(i, j);
      if (w != 0.0) total += g.p[i] * w * linalg::hs_inner(g.povm[j], out);
    }
  }
  return total;
}

HermitianOperator game_operator(const Game& g) {
  HermitianOperator w = HermitianOperator::zero(g.dA * g.dB);
  for (std::size_t i = 0; i < g.states.size(); ++i) {
    const HermitianOperator st = linalg::transpose(g.states[i]);
    for (std::size_t j = 0; j < g.povm.size(); ++j) {
      const double c = g.p[i] * g.weights(i, j);
      if (c != 0.0) w += linalg::kron(st, g.povm[j]) * c;
    }
  }
  return w;
}

MeasureResult best_cptp_payoff(const Game& g, const MeasureOptions& opt) {
  validate_game(g);
  const int dA = g.dA;
  const int dB = g.dB;
  const HermitianOperator wg = game_operator(g);
  const HermitianOperator one_a = HermitianOperator::identity(dA);
  using Map = HermitianProgram::Map;

  // max <W_G, J> over Choi operators of channels.
  detail::Compiled primal;
  primal.name = "cptp_payoff/primal";
  primal.maximize = true;
  const auto j = primal.hp.add_psd(dA * dB);
  primal.hp.add_equality({{j, 1.0, Map::kTraceB, dA, dB}}, {}, one_a);
  primal.hp.add_objective(j, -wg);
  primal.vars = {{"J", j}};

  // min Tr Y over Y (x) 1 >= W_G, with Y = Y' - c 1 and Y' >= 0.
  const double c = linalg::operator_norm(wg);
  detail::Compiled dual;
  dual.name = "cptp_payoff/dual";
  const auto yp = dual.hp.add_psd(dA);
  const auto s = dual.hp.add_psd(dA * dB);
  dual.hp.add_equality({{yp, 1.0, Map::kKronIdentityB, dA, dB}, {s, -1.0}}, {},
                       wg + HermitianOperator::identity(dA * dB) * c);
  dual.hp.add_objective(yp, one_a);
  dual.hp.add_objective_constant(-c * dA);
  dual.vars = {{"Y_shifted", yp}};

  const auto ps = detail::solve_compiled(primal, opt);
  const auto ds = detail::solve_compiled(dual, opt);

  MeasureResult r;
  r.measure = "cptp_payoff";
  r.value = ps.value;
  r.dual_value = ds.value;
  r.gap = std::abs(r.value - r.dual_value);
  r.status = ps.solution.status != sdp::Status::kOptimal ? ps.solution.status : ds.solution.status;
  r.iterations = ps.solution.iterations + ds.solution.iterations;
  r.primal_witness = ps.witness;
  r.dual_witness = ds.witness;
  const HermitianOperator& jv = r.primal_witness.operators.at("J");
  const HermitianOperator y = r.dual_witness.operators.at("Y_shifted") - one_a * c;
  r.dual_witness.operators["Y"] = y;
  r.primal_violation =
      std::max(detail::psd_violation(jv),
               (linalg::partial_trace(jv, dA, dB, Subsystem::kB) - one_a).matrix().norm());
  r.dual_violation = detail::psd_violation(
      linalg::kron(y, HermitianOperator::identity(dB)) - wg);
  if (r.optimal()) {
    const double limit = opt.witness_tol * (1.0 + wg.matrix().norm());
    if (r.primal_violation > limit || r.dual_violation > limit)
      throw SolverError("cptp_payoff: witness check failed");
  }
  return r;
}

}  // namespace nonphys::measures
