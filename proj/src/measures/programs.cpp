// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include "programs.hpp"

#include <algorithm>

namespace nonphys::measures::detail {

using linalg::Subsystem;
using sdp::HermitianProgram;
using Map = HermitianProgram::Map;

namespace {

struct Dims {
  int a;
  int b;
  int ab() const { return a * b; }
};

Dims dims_of(const LinearMap& m) { return {m.d_in(), m.d_out()}; }

HermitianOperator one(int d) { return HermitianOperator::identity(d); }

HermitianOperator marginal(const LinearMap& m) { return channels::choi_marginal(m); }

// M+ - M- = J, shared by the decomposition programs.
void decomposition(Compiled& c, const LinearMap& m, HermitianProgram::Var* mp,
                   HermitianProgram::Var* mm) {
  const Dims d = dims_of(m);
  *mp = c.hp.add_psd(d.ab());
  *mm = c.hp.add_psd(d.ab());
  c.hp.add_equality({{*mp, 1.0}, {*mm, -1.0}}, {}, m.choi());
  c.vars.emplace_back("M_plus", *mp);
  c.vars.emplace_back("M_minus", *mm);
}

Compiled primal_diamond(const LinearMap& m) {
  const Dims d = dims_of(m);
  Compiled c;
  HermitianProgram::Var mp, mm;
  decomposition(c, m, &mp, &mm);
  const auto s = c.hp.add_psd(d.a);
  const auto mu = c.hp.add_nonneg();
  // Tr_B(M+ + M-) + S = mu 1
  c.hp.add_equality({{mp, 1.0, Map::kTraceB, d.a, d.b},
                     {mm, 1.0, Map::kTraceB, d.a, d.b},
                     {s, 1.0}},
                    {{mu, -1.0}}, HermitianOperator::zero(d.a));
  c.hp.add_objective(mu, 1.0);
  c.scalars.emplace_back("mu", mu);
  return c;
}

Compiled primal_cptni(const LinearMap& m) {
  const Dims d = dims_of(m);
  Compiled c;
  HermitianProgram::Var mp, mm;
  decomposition(c, m, &mp, &mm);
  const auto sp = c.hp.add_psd(d.a);
  const auto sm = c.hp.add_psd(d.a);
  const auto lp = c.hp.add_nonneg();
  const auto lm = c.hp.add_nonneg();
  c.hp.add_equality({{mp, 1.0, Map::kTraceB, d.a, d.b}, {sp, 1.0}}, {{lp, -1.0}},
                    HermitianOperator::zero(d.a));
  c.hp.add_equality({{mm, 1.0, Map::kTraceB, d.a, d.b}, {sm, 1.0}}, {{lm, -1.0}},
                    HermitianOperator::zero(d.a));
  c.hp.add_objective(lp, 1.0);
  c.hp.add_objective(lm, 1.0);
  c.scalars.emplace_back("lambda_plus", lp);
  c.scalars.emplace_back("lambda_minus", lm);
  return c;
}

Compiled primal_R(const LinearMap& m) {
  const Dims d = dims_of(m);
  Compiled c;
  HermitianProgram::Var mp, mm;
  decomposition(c, m, &mp, &mm);
  const auto sp = c.hp.add_psd(d.a);
  const auto sm = c.hp.add_psd(d.a);
  const auto lam = c.hp.add_nonneg();
  // Tr_B M+ + S+ - lambda 1 = 1,  Tr_B M- + S- - lambda 1 = 0
  c.hp.add_equality({{mp, 1.0, Map::kTraceB, d.a, d.b}, {sp, 1.0}}, {{lam, -1.0}}, one(d.a));
  c.hp.add_equality({{mm, 1.0, Map::kTraceB, d.a, d.b}, {sm, 1.0}}, {{lam, -1.0}},
                    HermitianOperator::zero(d.a));
  c.hp.add_objective(lam, 1.0);
  c.scalars.emplace_back("lambda", lam);
  return c;
}

Compiled primal_Rprime(const LinearMap& m) {
  const Dims d = dims_of(m);
  Compiled c;
  const auto mv = c.hp.add_psd(d.ab());
  const auto z = c.hp.add_psd(d.ab());
  const auto kappa = c.hp.add_nonneg();  // 1 + lambda
  c.hp.add_equality({{mv, 1.0}, {z, -1.0}}, {}, m.choi());
  c.hp.add_equality({{mv, 1.0, Map::kTraceB, d.a, d.b}}, {{kappa, -1.0}},
                    HermitianOperator::zero(d.a));
  c.hp.add_objective(kappa, 1.0);
  c.hp.add_objective_constant(-1.0);
  c.vars.emplace_back("M", mv);
  c.scalars.emplace_back("kappa", kappa);
  return c;
}

Compiled primal_Rdoubleprime(const LinearMap& m) {
  const Dims d = dims_of(m);
  Compiled c;
  const auto mv = c.hp.add_psd(d.ab());
  const auto z = c.hp.add_psd(d.ab());  // J + M
  const auto lam = c.hp.add_nonneg();
  c.hp.add_equality({{z, 1.0}, {mv, -1.0}}, {}, m.choi());
  c.hp.add_equality({{mv, 1.0, Map::kTraceB, d.a, d.b}}, {{lam, -1.0}},
                    HermitianOperator::zero(d.a));
  c.hp.add_objective(lam, 1.0);
  c.vars.emplace_back("M", mv);
  c.scalars.emplace_back("lambda", lam);
  return c;
}

// The maximization programs are posed over P = W + L (x) 1 >= 0 and
// Q = U (x) 1 - W >= 0 so that no free variables appear; W = P - L (x) 1.
Compiled dual_diamond(const LinearMap& m) {
  const Dims d = dims_of(m);
  Compiled c;
  c.maximize = true;
  const auto p = c.hp.add_psd(d.ab());
  const auto q = c.hp.add_psd(d.ab());
  const auto rho = c.hp.add_psd(d.a);
  c.hp.add_equality({{p, 1.0}, {q, 1.0}, {rho, -2.0, Map::kKronIdentityB, d.a, d.b}}, {},
                    HermitianOperator::zero(d.ab()));
  c.hp.add_scalar_equality({{rho, one(d.a)}}, {}, 1.0);
  c.hp.add_objective(p, -m.choi());
  c.hp.add_objective(rho, marginal(m));
  c.vars = {{"P", p}, {"Q", q}, {"rho", rho}};
  return c;
}

Compiled dual_cptni(const LinearMap& m) {
  const Dims d = dims_of(m);
  Compiled c;
  c.maximize = true;
  const auto p = c.hp.add_psd(d.ab());
  const auto q = c.hp.add_psd(d.ab());
  const auto rho = c.hp.add_psd(d.a);
  const auto sigma = c.hp.add_psd(d.a);
  c.hp.add_equality({{p, 1.0},
                     {q, 1.0},
                     {rho, -1.0, Map::kKronIdentityB, d.a, d.b},
                     {sigma, -1.0, Map::kKronIdentityB, d.a, d.b}},
                    {}, HermitianOperator::zero(d.ab()));
  c.hp.add_scalar_equality({{rho, one(d.a)}}, {}, 1.0);
  c.hp.add_scalar_equality({{sigma, one(d.a)}}, {}, 1.0);
  c.hp.add_objective(p, -m.choi());
  c.hp.add_objective(rho, marginal(m));
  c.vars = {{"P", p}, {"Q", q}, {"rho", rho}, {"sigma", sigma}};
  return c;
}

Compiled dual_R(const LinearMap& m) {
  const Dims d = dims_of(m);
  Compiled c;
  c.maximize = true;
  const auto p = c.hp.add_psd(d.ab());
  const auto q = c.hp.add_psd(d.ab());
  const auto x = c.hp.add_psd(d.a);
  const auto y = c.hp.add_psd(d.a);
  c.hp.add_equality({{p, 1.0},
                     {q, 1.0},
                     {x, -1.0, Map::kKronIdentityB, d.a, d.b},
                     {y, -1.0, Map::kKronIdentityB, d.a, d.b}},
                    {}, HermitianOperator::zero(d.ab()));
  c.hp.add_scalar_equality({{x, one(d.a)}, {y, one(d.a)}}, {}, 1.0);
  c.hp.add_objective(p, -m.choi());
  c.hp.add_objective(x, marginal(m));
  c.hp.add_objective(y, one(d.a));
  c.vars = {{"P", p}, {"Q", q}, {"X", x}, {"Y", y}};
  return c;
}

Compiled dual_Rprime_like(const LinearMap& m, bool subtract_marginal) {
  const Dims d = dims_of(m);
  Compiled c;
  c.maximize = true;
  const auto w = c.hp.add_psd(d.ab());
  const auto q = c.hp.add_psd(d.ab());
  const auto rho = c.hp.add_psd(d.a);
  c.hp.add_equality({{w, 1.0}, {q, 1.0}, {rho, -1.0, Map::kKronIdentityB, d.a, d.b}}, {},
                    HermitianOperator::zero(d.ab()));
  c.hp.add_scalar_equality({{rho, one(d.a)}}, {}, 1.0);
  c.hp.add_objective(w, -m.choi());
  if (subtract_marginal)
    c.hp.add_objective(rho, marginal(m));
  else
    c.hp.add_objective_constant(1.0);
  c.vars = {{"W", w}, {"Q", q}, {"rho", rho}};
  return c;
}

}  // namespace

Compiled compile_primal(Measure which, const LinearMap& m) {
  Compiled c;
  switch (which) {
    case Measure::kDiamond: c = primal_diamond(m); break;
    case Measure::kCptniNorm: c = primal_cptni(m); break;
    case Measure::kR: c = primal_R(m); break;
    case Measure::kRprime: c = primal_Rprime(m); break;
    case Measure::kRdoubleprime: c = primal_Rdoubleprime(m); break;
  }
  c.name = std::string(measure_name(which)) + "/primal";
  return c;
}

Compiled compile_dual(Measure which, const LinearMap& m) {
  Compiled c;
  switch (which) {
    case Measure::kDiamond: c = dual_diamond(m); break;
    case Measure::kCptniNorm: c = dual_cptni(m); break;
    case Measure::kR: c = dual_R(m); break;
    case Measure::kRprime: c = dual_Rprime_like(m, false); break;
    case Measure::kRdoubleprime: c = dual_Rprime_like(m, true); break;
  }
  c.name = std::string(measure_name(which)) + "/dual";
  return c;
}

Solved solve_compiled(const Compiled& c, const MeasureOptions& opt) {
  if (opt.program_sink) opt.program_sink(c.name, c.hp.program());
  Solved out;
  out.solution = sdp::solve(c.hp.program(), opt.solver);
  out.value = c.maximize ? -out.solution.primal_objective : out.solution.primal_objective;
  for (const auto& [name, v] : c.vars)
    out.witness.operators[name] = c.hp.value(out.solution.x, v);
  for (const auto& [name, s] : c.scalars)
    out.witness.scalars[name] = c.hp.value(out.solution.x, s);
  return out;
}

double psd_violation(const HermitianOperator& h) {
  if (h.dim() == 0) return 0.0;
  return std::max(0.0, -linalg::lambda_min(h));
}

}  // namespace nonphys::measures::detail
