// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "nonphys/errors.hpp"
#include "nonphys/measures.hpp"
#include "programs.hpp"

namespace nonphys::measures {

using detail::psd_violation;
using linalg::Subsystem;

std::string_view measure_name(Measure m) {
  switch (m) {
    case Measure::kDiamond: return "diamond";
    case Measure::kCptniNorm: return "cptni";
    case Measure::kR: return "R";
    case Measure::kRprime: return "R_prime";
    case Measure::kRdoubleprime: return "R_doubleprime";
  }
  return "";
}

Measure measure_from_name(std::string_view name) {
  if (name == "diamond") return Measure::kDiamond;
  if (name == "cptni" || name == "base_norm") return Measure::kCptniNorm;
  if (name == "R") return Measure::kR;
  if (name == "R_prime" || name == "R'") return Measure::kRprime;
  if (name == "R_doubleprime" || name == "R''") return Measure::kRdoubleprime;
  throw ParseError("unknown measure '" + std::string(name) + "'");
}

std::vector<Measure> all_measures() {
  return {Measure::kDiamond, Measure::kCptniNorm, Measure::kR, Measure::kRprime,
          Measure::kRdoubleprime};
}

namespace {

const HermitianOperator& get(const WitnessSet& w, const std::string& key) {
  return w.operators.at(key);
}

double scalar(const WitnessSet& w, const std::string& key) { return w.scalars.at(key); }

double frob(const HermitianOperator& h) { return h.matrix().norm(); }

HermitianOperator lift(const HermitianOperator& rho, int dB) {
  return linalg::kron(rho, HermitianOperator::identity(dB));
}

HermitianOperator trace_b(const HermitianOperator& h, int dA, int dB) {
  return linalg::partial_trace(h, dA, dB, Subsystem::kB);
}

// Independent re-check of the minimization witnesses against the original
// (un-slacked) constraints.
double primal_violation(Measure which, const LinearMap& m, const WitnessSet& w) {
  const int dA = m.d_in();
  const int dB = m.d_out();
  const HermitianOperator one = HermitianOperator::identity(dA);
  const HermitianOperator& J = m.choi();
  switch (which) {
    case Measure::kDiamond: {
      const auto& mp = get(w, "M_plus");
      const auto& mm = get(w, "M_minus");
      const double mu = scalar(w, "mu");
      return std::max({psd_violation(mp), psd_violation(mm), frob(mp - mm - J),
                       psd_violation(one * mu - trace_b(mp + mm, dA, dB))});
    }
    case Measure::kCptniNorm: {
      const auto& mp = get(w, "M_plus");
      const auto& mm = get(w, "M_minus");
      return std::max({psd_violation(mp), psd_violation(mm), frob(mp - mm - J),
                       psd_violation(one * scalar(w, "lambda_plus") - trace_b(mp, dA, dB)),
                       psd_violation(one * scalar(w, "lambda_minus") - trace_b(mm, dA, dB))});
    }
    case Measure::kR: {
      const auto& mp = get(w, "M_plus");
      const auto& mm = get(w, "M_minus");
      const double lam = scalar(w, "lambda");
      return std::max({psd_violation(mp), psd_violation(mm), frob(mp - mm - J),
                       psd_violation(one * (1.0 + lam) - trace_b(mp, dA, dB)),
                       psd_violation(one * lam - trace_b(mm, dA, dB))});
    }
    case Measure::kRprime: {
      const auto& mv = get(w, "M");
      return std::max({psd_violation(mv), psd_violation(mv - J),
                       frob(trace_b(mv, dA, dB) - one * scalar(w, "kappa"))});
    }
    case Measure::kRdoubleprime: {
      const auto& mv = get(w, "M");
      return std::max({psd_violation(mv), psd_violation(J + mv),
                       frob(trace_b(mv, dA, dB) - one * scalar(w, "lambda"))});
    }
  }
  return 0.0;
}

// Rewrites the maximization variables into the witness W and the bounding
// states, then checks the operator sandwich directly.
double dual_violation(Measure which, const LinearMap& m, WitnessSet& w) {
  const int dB = m.d_out();
  auto trace_gap = [](const HermitianOperator& h, double target) {
    return std::abs(h.matrix().trace().real() - target);
  };
  switch (which) {
    case Measure::kDiamond: {
      const auto& rho = get(w, "rho");
      const HermitianOperator W = get(w, "P") - lift(rho, dB);
      w.operators["W"] = W;
      return std::max({psd_violation(rho), trace_gap(rho, 1.0),
                       psd_violation(lift(rho, dB) + W), psd_violation(lift(rho, dB) - W)});
    }
    case Measure::kCptniNorm: {
      const auto& rho = get(w, "rho");
      const auto& sigma = get(w, "sigma");
      const HermitianOperator W = get(w, "P") - lift(rho, dB);
      w.operators["W"] = W;
      return std::max({psd_violation(rho), psd_violation(sigma), trace_gap(rho, 1.0),
                       trace_gap(sigma, 1.0), psd_violation(lift(rho, dB) + W),
                       psd_violation(lift(sigma, dB) - W)});
    }
    case Measure::kR: {
      const auto& x = get(w, "X");
      const auto& y = get(w, "Y");
      const HermitianOperator W = get(w, "P") - lift(x, dB);
      w.operators["W"] = W;
      return std::max({psd_violation(x), psd_violation(y),
                       trace_gap(x + y, 1.0), psd_violation(lift(x, dB) + W),
                       psd_violation(lift(y, dB) - W)});
    }
    case Measure::kRprime:
    case Measure::kRdoubleprime: {
      const auto& rho = get(w, "rho");
      const auto& W = get(w, "W");
      return std::max({psd_violation(rho), trace_gap(rho, 1.0), psd_violation(W),
                       psd_violation(lift(rho, dB) - W)});
    }
  }
  return 0.0;
}

sdp::Status combine(sdp::Status a, sdp::Status b) {
  if (a != sdp::Status::kOptimal) return a;
  return b;
}

}  // namespace

MeasureResult evaluate(Measure which, const LinearMap& m, const MeasureOptions& opt) {
  const auto primal = detail::solve_compiled(detail::compile_primal(which, m), opt);
  const auto dual = detail::solve_compiled(detail::compile_dual(which, m), opt);

  MeasureResult r;
  r.measure = std::string(measure_name(which));
  r.value = primal.value;
  r.dual_value = dual.value;
  r.gap = std::abs(r.value - r.dual_value);
  r.status = combine(primal.solution.status, dual.solution.status);
  r.iterations = primal.solution.iterations + dual.solution.iterations;
  r.primal_witness = primal.witness;
  r.dual_witness = dual.witness;
  r.primal_violation = primal_violation(which, m, r.primal_witness);
  r.dual_violation = dual_violation(which, m, r.dual_witness);

  if (r.optimal()) {
    const double limit = opt.witness_tol * (1.0 + frob(m.choi()));
    if (r.primal_violation > limit || r.dual_violation > limit) {
      std::ostringstream msg;
      msg << r.measure << ": witness check failed (primal violation " << r.primal_violation
          << ", dual violation " << r.dual_violation << ", limit " << limit << ")";
      throw SolverError(msg.str());
    }
  }
  return r;
}

MeasureResult diamond_norm(const LinearMap& m, const MeasureOptions& opt) {
  return evaluate(Measure::kDiamond, m, opt);
}
MeasureResult base_norm_cptni(const LinearMap& m, const MeasureOptions& opt) {
  return evaluate(Measure::kCptniNorm, m, opt);
}
MeasureResult robustness_R(const LinearMap& m, const MeasureOptions& opt) {
  return evaluate(Measure::kR, m, opt);
}
MeasureResult robustness_Rprime(const LinearMap& m, const MeasureOptions& opt) {
  return evaluate(Measure::kRprime, m, opt);
}
MeasureResult robustness_Rdoubleprime(const LinearMap& m, const MeasureOptions& opt) {
  return evaluate(Measure::kRdoubleprime, m, opt);
}

double simulation_cost(const LinearMap& m, const MeasureOptions& opt) {
  const MeasureResult r = robustness_R(m, opt);
  if (!r.optimal()) throw SolverError("robustness R: " + sdp::to_string(r.status));
  return 2.0 * r.value + 1.0;
}

MeasureResult game_advantage(const LinearMap& m, const MeasureOptions& opt) {
  MeasureResult r = robustness_Rprime(m, opt);
  r.measure = "game_advantage";
  r.value += 1.0;
  r.dual_value += 1.0;
  return r;
}

}  // namespace nonphys::measures
