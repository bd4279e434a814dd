// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.  Reference values are closed forms or brute-force oracles computed
// here without going through the measure programs.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "nonphys/channels.hpp"
#include "nonphys/errors.hpp"
#include "nonphys/measures.hpp"
#include "nonphys/nonmarkov.hpp"
#include "oracles.hpp"

namespace {

using namespace nonphys;
using channels::LinearMap;
using linalg::ComplexMatrix;
using linalg::HermitianOperator;
using measures::MeasureResult;
using cplx = std::complex<double>;

// Tracks the worst deviation seen by a criterion and any failure messages.
class Tally {
 public:
  void near(const std::string& what, double got, double want, double tol) {
    const double err = std::abs(got - want);
    worst_ = std::max(worst_, err);
    if (!(err <= tol)) fail(what + ": got " + fmt(got) + ", want " + fmt(want));
  }
  void le(const std::string& what, double lhs, double rhs, double slack) {
    if (!(lhs <= rhs + slack)) fail(what + ": " + fmt(lhs) + " > " + fmt(rhs));
  }
  void ok(const std::string& what, bool cond) {
    if (!cond) fail(what);
  }
  void fail(const std::string& msg) {
    if (failures_.empty()) first_ = msg;
    failures_.push_back(msg);
  }
  bool passed() const { return failures_.empty(); }
  std::string summary() const {
    std::ostringstream os;
    if (passed()) {
      os << "worst |err| " << fmt(worst_);
    } else {
      os << failures_.size() << " failure(s), first: " << first_;
    }
    return os.str();
  }
  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
  }

 private:
  std::vector<std::string> failures_;
  std::string first_;
  double worst_ = 0.0;
};

double solved(const MeasureResult& r, Tally& t, const std::string& what) {
  if (!r.optimal()) t.fail(what + ": solver status " + sdp::to_string(r.status));
  return r.value;
}

// --- independent linear algebra --------------------------------------------------

// Tr_B of an operator on A (x) B with index a * dB + b.
ComplexMatrix ptrace_b(const ComplexMatrix& m, int dA, int dB) {
  ComplexMatrix out = ComplexMatrix::Zero(dA, dA);
  for (int a = 0; a < dA; ++a)
    for (int c = 0; c < dA; ++c)
      for (int b = 0; b < dB; ++b) out(a, c) += m(a * dB + b, c * dB + b);
  return out;
}

ComplexMatrix lift_b(const ComplexMatrix& rho, int dB) {
  const int dA = static_cast<int>(rho.rows());
  ComplexMatrix out = ComplexMatrix::Zero(dA * dB, dA * dB);
  for (int a = 0; a < dA; ++a)
    for (int c = 0; c < dA; ++c)
      for (int b = 0; b < dB; ++b) out(a * dB + b, c * dB + b) = rho(a, c);
  return out;
}

Eigen::VectorXd eigenvalues(const ComplexMatrix& m) {
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
}
double lmin(const ComplexMatrix& m) { return eigenvalues(m).minCoeff(); }
double lmax(const ComplexMatrix& m) { return eigenvalues(m).maxCoeff(); }
double tr(const ComplexMatrix& m) { return m.trace().real(); }
double inner(const ComplexMatrix& a, const ComplexMatrix& b) { return (a * b).trace().real(); }

// --- criteria ------------------------------------------------------------------

constexpr double kTol = 1e-6;

Tally transpose_values() {
  Tally t;
  for (int d : {2, 3, 4}) {
    const LinearMap m = channels::transpose_map(d);
    const std::string tag = "d=" + std::to_string(d);
    t.near(tag + " cptni", solved(measures::base_norm_cptni(m), t, "cptni"), d, kTol);
    t.near(tag + " R", solved(measures::robustness_R(m), t, "R"), 0.5 * (d - 1), kTol);
    t.near(tag + " SPA", measures::spa(m), d, kTol);
    t.near(tag + " SPA'", measures::spa_prime(m), 0.5 * (d - 1), kTol);
  }
  return t;
}

Tally choi_map_values() {
  Tally t;
  const LinearMap m = channels::choi_map(true);
  t.near("R", solved(measures::robustness_R(m), t, "R"), 1.0 / 6.0, kTol);
  t.near("SPA", measures::spa(m), 1.5, kTol);
  t.near("SPA'", measures::spa_prime(m), 2.0 / 3.0, kTol);
  return t;
}

Tally depolarizing_inverse_values() {
  Tally t;
  for (int d : {2, 3})
    for (double p : {0.1, 0.3, 0.5}) {
      const double want = (1.0 + (1.0 - 2.0 / (d * d)) * p) / (1.0 - p);
      const auto r = measures::diamond_norm(channels::depolarizing_inverse(p, d));
      t.near("d=" + std::to_string(d) + " p=" + Tally::fmt(p), solved(r, t, "diamond"), want,
             kTol);
    }
  return t;
}

// (1/d) ||S_bar||_1 with S_bar_jk = 1 / S_jk, S_jk = sum_i p_i w^{i(j-k)}.  S_bar
// is circulant, so its eigenvalues are the DFT of its first column.
double circulant_closed_form(const std::vector<double>& p) {
  const int d = static_cast<int>(p.size());
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<cplx> col(d);
  for (int k = 0; k < d; ++k) {
    cplx s = 0.0;
    for (int i = 0; i < d; ++i) s += p[i] * std::polar(1.0, two_pi * i * k / d);
    col[k] = 1.0 / s;
  }
  double norm = 0.0;
  for (int m = 0; m < d; ++m) {
    cplx lambda = 0.0;
    for (int k = 0; k < d; ++k) lambda += col[k] * std::polar(1.0, -two_pi * m * k / d);
    norm += std::abs(lambda);
  }
  return norm / d;
}

Tally dephasing_inverse_values() {
  Tally t;
  for (double p : {0.1, 0.25, 0.4}) {
    const auto r = measures::diamond_norm(channels::dephasing_inverse(p));
    t.near("qubit p=" + Tally::fmt(p), solved(r, t, "diamond"), 1.0 / (1.0 - 2.0 * p), kTol);
  }
  std::mt19937_64 rng(20260);
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::vector<double> p(3);
  double sum = 0.0;
  for (double& x : p) sum += (x = u(rng));
  for (double& x : p) x /= sum;
  const auto r = measures::diamond_norm(channels::dephasing_general_inverse(p));
  t.near("d=3 general", solved(r, t, "diamond"), circulant_closed_form(p), kTol);
  return t;
}

Tally amplitude_damping_inverse_values() {
  Tally t;
  for (double g : {0.2, 0.5, 0.8}) {
    const auto r = measures::diamond_norm(channels::amplitude_damping_inverse(g));
    t.near("gamma=" + Tally::fmt(g), solved(r, t, "diamond"), (1.0 + g) / (1.0 - g), kTol);
  }
  return t;
}

Tally leakage_inverse_values() {
  Tally t;
  for (double p : {0.2, 0.5}) {
    const LinearMap m = channels::leakage_inverse(p);
    const std::string tag = "p=" + Tally::fmt(p);
    const double want = 1.0 / (1.0 - p);
    const double marginal =
        eigenvalues(ptrace_b(m.choi().matrix(), m.d_in(), m.d_out())).cwiseAbs().maxCoeff();
    t.near(tag + " ||Tr_B J||_inf", marginal, want, kTol);
    t.near(tag + " diamond", solved(measures::diamond_norm(m), t, "diamond"), want, kTol);
    t.near(tag + " cptni", solved(measures::base_norm_cptni(m), t, "cptni"), want, kTol);
  }
  return t;
}

Tally extreme_disparity_values() {
  Tally t;
  const LinearMap m = channels::extreme_disparity();
  t.near("diamond", solved(measures::diamond_norm(m), t, "diamond"), 1.0, kTol);
  t.near("cptni", solved(measures::base_norm_cptni(m), t, "cptni"), 2.0, kTol);
  t.near("R", solved(measures::robustness_R(m), t, "R"), 1.0, kTol);
  return t;
}

Tally tp_equalities() {
  Tally t;
  for (int d : {2, 3})
    for (int seed = 0; seed < 20; ++seed) {
      const LinearMap m = channels::random_tp_map(seed, d);
      const std::string tag = "d=" + std::to_string(d) + " seed=" + std::to_string(seed);
      const double dia = solved(measures::diamond_norm(m), t, tag);
      const double half = 0.5 * (dia - 1.0);
      t.near(tag + " R", solved(measures::robustness_R(m), t, tag), half, kTol);
      t.near(tag + " R'", solved(measures::robustness_Rprime(m), t, tag), half, kTol);
      t.near(tag + " R''", solved(measures::robustness_Rdoubleprime(m), t, tag), half, kTol);
      t.near(tag + " cptni", 0.5 * (solved(measures::base_norm_cptni(m), t, tag) - 1.0), half,
             kTol);
    }
  return t;
}

// Re-derives both optimal values from the returned witnesses using only the
// original constraint sets.
void check_witnesses(measures::Measure which, const LinearMap& m, const MeasureResult& r,
                     Tally& t, const std::string& tag) {
  const int dA = m.d_in(), dB = m.d_out();
  const ComplexMatrix J = m.choi().matrix();
  const ComplexMatrix one = ComplexMatrix::Identity(dA, dA);
  const double tol = 1e-6;
  const auto& po = r.primal_witness.operators;
  const auto& ps = r.primal_witness.scalars;
  const auto& dw = r.dual_witness.operators;
  auto op = [](const auto& map, const char* k) { return map.at(k).matrix(); };

  double primal_obj = 0.0, dual_obj = 0.0;
  switch (which) {
    case measures::Measure::kDiamond:
    case measures::Measure::kCptniNorm:
    case measures::Measure::kR: {
      const ComplexMatrix mp = op(po, "M_plus"), mm = op(po, "M_minus");
      t.ok(tag + " M+ psd", lmin(mp) >= -tol);
      t.ok(tag + " M- psd", lmin(mm) >= -tol);
      t.ok(tag + " J = M+ - M-", (mp - mm - J).cwiseAbs().maxCoeff() <= tol);
      const ComplexMatrix W = op(dw, "W");
      if (which == measures::Measure::kDiamond) {
        primal_obj = lmax(ptrace_b(mp + mm, dA, dB));
        const ComplexMatrix rho = op(dw, "rho");
        t.ok(tag + " rho state", lmin(rho) >= -tol && std::abs(tr(rho) - 1.0) <= tol);
        t.ok(tag + " -rho1 <= W <= rho1",
             lmin(lift_b(rho, dB) - W) >= -tol && lmin(lift_b(rho, dB) + W) >= -tol);
        dual_obj = inner(W, J);
      } else if (which == measures::Measure::kCptniNorm) {
        primal_obj = lmax(ptrace_b(mp, dA, dB)) + lmax(ptrace_b(mm, dA, dB));
        const ComplexMatrix rho = op(dw, "rho"), sigma = op(dw, "sigma");
        t.ok(tag + " rho, sigma states",
             lmin(rho) >= -tol && lmin(sigma) >= -tol && std::abs(tr(rho) - 1.0) <= tol &&
                 std::abs(tr(sigma) - 1.0) <= tol);
        t.ok(tag + " -rho1 <= W <= sigma1",
             lmin(lift_b(sigma, dB) - W) >= -tol && lmin(lift_b(rho, dB) + W) >= -tol);
        dual_obj = inner(W, J);
      } else {
        primal_obj = std::max(lmax(ptrace_b(mp, dA, dB)) - 1.0, lmax(ptrace_b(mm, dA, dB)));
        const ComplexMatrix x = op(dw, "X"), y = op(dw, "Y");
        t.ok(tag + " X, Y >= 0, Tr(X + Y) = 1",
             lmin(x) >= -tol && lmin(y) >= -tol && std::abs(tr(x + y) - 1.0) <= tol);
        t.ok(tag + " -X1 <= W <= Y1",
             lmin(lift_b(y, dB) - W) >= -tol && lmin(lift_b(x, dB) + W) >= -tol);
        dual_obj = inner(W, J) - tr(y);
      }
      break;
    }
    case measures::Measure::kRprime:
    case measures::Measure::kRdoubleprime: {
      const bool prime = which == measures::Measure::kRprime;
      const ComplexMatrix M = op(po, "M");
      t.ok(tag + " M psd", lmin(M) >= -tol);
      t.ok(tag + " M vs J", lmin(prime ? ComplexMatrix(M - J) : ComplexMatrix(M + J)) >= -tol);
      const ComplexMatrix marg = ptrace_b(M, dA, dB);
      const double level = tr(marg) / dA;
      t.ok(tag + " Tr_B M proportional to 1", (marg - level * one).cwiseAbs().maxCoeff() <= tol);
      primal_obj = prime ? level - 1.0 : level;
      t.near(tag + " scalar", prime ? ps.at("kappa") : ps.at("lambda"), level, tol);
      const ComplexMatrix W = op(dw, "W"), rho = op(dw, "rho");
      t.ok(tag + " rho state", lmin(rho) >= -tol && std::abs(tr(rho) - 1.0) <= tol);
      t.ok(tag + " 0 <= W <= rho1", lmin(W) >= -tol && lmin(lift_b(rho, dB) - W) >= -tol);
      dual_obj = inner(W, J) - (prime ? 1.0 : inner(rho, ptrace_b(J, dA, dB)));
      break;
    }
  }
  t.near(tag + " primal witness objective", primal_obj, r.value, tol);
  t.near(tag + " dual witness objective", dual_obj, r.dual_value, tol);
}

Tally sandwich_suite() {
  Tally t;
  for (int seed = 0; seed < 20; ++seed) {
    const LinearMap m = channels::random_hermitian_map(seed, 2);
    const std::string tag = "seed=" + std::to_string(seed);
    measures::BoundsReport rep = measures::all_bounds(m);
    std::map<measures::Measure, double> v;
    for (measures::Measure q : measures::all_measures()) {
      const MeasureResult r = measures::evaluate(q, m);
      const std::string qtag = tag + " " + std::string(measures::measure_name(q));
      v[q] = solved(r, t, qtag);
      t.le(qtag + " gap", r.gap, 1e-7, 0.0);
      check_witnesses(q, m, r, t, qtag);
      rep.certified[q] = r.value;
    }
    const ComplexMatrix marg = ptrace_b(m.choi().matrix(), 2, 2);
    const double dia = v[measures::Measure::kDiamond];
    const double cptni = v[measures::Measure::kCptniNorm];
    const double r = v[measures::Measure::kR];
    const double rp = v[measures::Measure::kRprime];
    const double rpp = v[measures::Measure::kRdoubleprime];
    t.le(tag + " cptni <= 2 dia", cptni, 2.0 * dia, kTol);
    t.le(tag + " dia <= cptni", dia, cptni, kTol);
    t.le(tag + " R' <= dia + 1", rp, dia + 1.0, kTol);
    t.le(tag + " R' lower", 0.5 * (dia - 2.0 + lmin(marg)), rp, kTol);
    t.le(tag + " R'' <= dia", rpp, dia, kTol);
    t.le(tag + " R'' lower", 0.5 * (dia - lmax(marg)), rpp, kTol);
    t.le(tag + " R' <= R", rp, r, kTol);
    t.le(tag + " R'' <= R", rpp, r, kTol);
    for (const auto& msg : rep.violations(kTol)) t.fail(tag + " " + msg);
  }
  return t;
}

Tally simulation_end_to_end() {
  Tally t;
  const std::vector<std::pair<std::string, LinearMap>> maps = {
      {"transpose(2)", channels::transpose_map(2)},
      {"choi_map", channels::choi_map()},
      {"depolarizing_inverse(0.3,2)", channels::depolarizing_inverse(0.3, 2)}};
  for (const auto& [name, m] : maps) {
    const MeasureResult r = measures::robustness_R(m);
    const double rv = solved(r, t, name);
    const auto plan = measures::build_simulation(m, r);
    t.near(name + " ||X||_1", linalg::trace_norm(plan.x), 2.0 * rv + 1.0, kTol);
    t.le(name + " residual", measures::verify_simulation(plan, m, 50), 1e-8, 0.0);
  }
  return t;
}

Tally games_end_to_end() {
  Tally t;
  const std::vector<std::pair<std::string, LinearMap>> maps = {
      {"transpose(2)", channels::transpose_map(2)},
      {"depolarizing_inverse(0.3,2)", channels::depolarizing_inverse(0.3, 2)}};
  for (const auto& [name, m] : maps) {
    const double rp = solved(measures::robustness_Rprime(m), t, name + " R'");
    const MeasureResult adv = measures::game_advantage(m);
    solved(adv, t, name + " advantage");
    const auto game =
        measures::game_from_witness(adv.dual_witness.operators.at("W"), m.d_in(), m.d_out());
    measures::validate_game(game);
    t.near(name + " payoff", measures::payoff(m, game), rp + 1.0, 1e-5);
    t.near(name + " best CPTP payoff",
           solved(measures::best_cptp_payoff(game), t, name + " best"), 1.0, kTol);
  }
  return t;
}

Tally qubit_oracle() {
  Tally t;
  for (int seed = 0; seed < 10; ++seed) {
    const LinearMap m = channels::random_hermitian_map(seed, 2);
    const std::string tag = "seed=" + std::to_string(seed);
    const double sdp_value = solved(measures::diamond_norm(m), t, tag);
    const double grid = nonphys::testing::bloch_ball_maximum(m);
    t.le(tag + " grid <= SDP + 1e-7", grid, sdp_value + 1e-7, 0.0);
    t.le(tag + " grid >= SDP - 1e-3", sdp_value - 1e-3, grid, 0.0);
  }
  return t;
}

Tally non_markovianity() {
  Tally t;
  nonmarkov::DivisibilityOptions opt;
  opt.t_end = 5.0;
  opt.steps = 50;
  const auto semigroup = nonmarkov::i_dia(nonmarkov::depolarizing_semigroup(1.0), opt);
  t.le("semigroup I", semigroup.integral, 1e-4, 0.0);

  const double big_gamma = 0.2, omega = 2.0, eps = 1e-4;
  auto q = [&](double s) { return std::exp(-big_gamma * s) * std::cos(omega * s); };
  auto g_ref = [&](double s) { return std::max(0.0, -big_gamma - omega * std::tan(omega * s)); };
  const auto fam = nonmarkov::oscillatory_dephasing(big_gamma, omega);

  // Revival window: |q| = q_floor after the first zero, up to the next extremum.
  double lo = std::numbers::pi / (2 * omega), hi = 1.2;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (std::abs(q(mid)) < 0.05 ? lo : hi) = mid;
  }
  const double ta = hi + 1e-6;
  const double tb = (std::numbers::pi - std::atan(big_gamma / omega)) / omega;

  std::vector<double> times;
  for (int k = 0; k <= 14; ++k) times.push_back(0.05 * k);           // decay phase
  for (int k = 0; k <= 20; ++k) times.push_back(ta + (tb - ta) * k / 20.0);  // revival
  for (int k = 1; k <= 8; ++k) times.push_back(tb + 0.05 * k);       // decay again
  for (double s : times)
    t.near("g(" + Tally::fmt(s) + ")", nonmarkov::g_dia(fam, s, eps), g_ref(s), 2e-3);

  nonmarkov::DivisibilityOptions win;
  win.t_start = ta;
  win.t_end = tb;
  win.steps = 100;
  win.eps = eps;
  const auto rep = nonmarkov::i_dia(fam, win);
  // Integral of d/dt ln|q| over the window.
  const double analytic = std::log(std::abs(q(tb)) / std::abs(q(ta)));
  t.le("window integral rel err", std::abs(rep.integral - analytic) / analytic, 0.05, 0.0);
  return t;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Tally()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "transpose map: cptni, R, SPA, SPA' for d = 2, 3, 4", transpose_values},
      {2, "Choi map (trace-normalized): R, SPA, SPA'", choi_map_values},
      {3, "depolarizing inverse diamond norm", depolarizing_inverse_values},
      {4, "dephasing inverse: qubit and d = 3 circulant closed form", dephasing_inverse_values},
      {5, "amplitude damping inverse diamond norm", amplitude_damping_inverse_values},
      {6, "leakage inverse: diamond = cptni = ||Tr_B J||_inf", leakage_inverse_values},
      {7, "extreme-disparity map: diamond 1, cptni 2, R 1", extreme_disparity_values},
      {8, "TP equalities on 20 random maps for d = 2, 3", tp_equalities},
      {9, "inequalities, bound sandwiches, gaps and witnesses", sandwich_suite},
      {10, "ancilla simulation end to end", simulation_end_to_end},
      {11, "input-output games end to end", games_end_to_end},
      {12, "qubit Bloch-ball brute-force oracle", qubit_oracle},
      {13, "non-Markovianity rate and integral", non_markovianity},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Tally t;
    try {
      t = c.run();
    } catch (const std::exception& e) {
      t.fail(std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %2d: %s (%s; %.2fs)\n", t.passed() ? "PASS" : "FAIL", c.id,
                c.title, t.summary().c_str(), secs);
    std::fflush(stdout);
    if (!t.passed()) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
