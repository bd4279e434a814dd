// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0
//
// Non-physicality quantifiers of Hermiticity-preserving maps.  Every SDP-based
// measure compiles two independent conic programs, a minimization over
// decompositions J = M+ - M- (the "primal") and a maximization over operators
// W bounded by rho (x) 1 (the "dual"), solves both, checks the recovered
// witnesses against the original constraints and reports the gap between the
// two optimal values.

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nonphys/channels.hpp"
#include "nonphys/sdp.hpp"

namespace nonphys::measures {

using channels::LinearMap;
using linalg::HermitianOperator;

enum class Measure { kDiamond, kCptniNorm, kR, kRprime, kRdoubleprime };

std::string_view measure_name(Measure m);
// Accepts the canonical names plus a few aliases ("base_norm", "R'", "R''").
Measure measure_from_name(std::string_view name);
std::vector<Measure> all_measures();

struct WitnessSet {
  std::map<std::string, HermitianOperator> operators;
  std::map<std::string, double> scalars;
};

struct MeasureResult {
  std::string measure;
  double value = 0.0;       // optimum of the minimization program
  double dual_value = 0.0;  // optimum of the maximization program
  double gap = 0.0;         // |value - dual_value|
  sdp::Status status = sdp::Status::kMaxIterations;
  WitnessSet primal_witness;
  WitnessSet dual_witness;
  double primal_violation = 0.0;  // worst constraint violation of the witness
  double dual_violation = 0.0;
  int iterations = 0;  // summed over both solves

  bool optimal() const { return status == sdp::Status::kOptimal; }
};

struct MeasureOptions {
  sdp::SolverConfig solver;
  double witness_tol = 1e-7;
  // Receives every compiled program as ("<measure>/<primal|dual>", program).
  std::function<void(const std::string&, const sdp::ConeProgram&)> program_sink;
};

// Throws SolverError if a solve reports Optimal but the recovered witness
// violates its constraints by more than witness_tol (relative to the data).
MeasureResult diamond_norm(const LinearMap& m, const MeasureOptions& opt = {});
MeasureResult base_norm_cptni(const LinearMap& m, const MeasureOptions& opt = {});
MeasureResult robustness_R(const LinearMap& m, const MeasureOptions& opt = {});
MeasureResult robustness_Rprime(const LinearMap& m, const MeasureOptions& opt = {});
MeasureResult robustness_Rdoubleprime(const LinearMap& m, const MeasureOptions& opt = {});
MeasureResult evaluate(Measure which, const LinearMap& m, const MeasureOptions& opt = {});

// 2 R + 1.
double simulation_cost(const LinearMap& m, const MeasureOptions& opt = {});

// max <W, J> over 0 <= W <= rho (x) 1, i.e. R' + 1.
MeasureResult game_advantage(const LinearMap& m, const MeasureOptions& opt = {});

// --- closed-form structural physical approximations ---------------------------

// Smallest s with J + s 1 / dB psd.
double spa(const LinearMap& m);
// -lmin (dB lmax - 1) / (lmax - lmin); DomainError when lmin == lmax or
// lmax == 1/dB.
double spa_prime(const LinearMap& m);
bool spa_ordering_holds(double r, double spa_prime_value, double spa_value,
                        double tol = 1e-6);

// --- bounds ---------------------------------------------------------------------

enum class Side { kLower, kUpper };

struct Bound {
  Measure quantity;
  Side side;
  double value;
  std::string source;
};

struct BoundsReport {
  std::vector<Bound> bounds;
  std::map<Measure, double> certified;

  void add(Measure q, Side s, double v, std::string source);
  void merge(const BoundsReport& other);
  std::optional<Bound> best(Measure q, Side s) const;
  // Human-readable descriptions of every lower > upper (+tol) pair and every
  // certified value outside its bounds.
  std::vector<std::string> violations(double tol = 1e-7) const;
};

struct Probe {
  std::string label;
  HermitianOperator state;
};

// Computational-basis states, the maximally mixed state and the uniform
// superposition.
std::vector<Probe> default_probes(int d);

BoundsReport bounds_trace_norm(const LinearMap& m);
BoundsReport bounds_upper(const LinearMap& m);
BoundsReport bounds_lower(const LinearMap& m, const std::vector<Probe>& extra = {});
// Lower bounds on the measures of `candidate` from states Z with forward(Z)
// a density operator.  Throws DomainError if eps is below the observed
// inversion error on the tomographic probe basis.
BoundsReport approx_inverse_bounds(const LinearMap& forward, const LinearMap& candidate,
                                   double eps, const std::vector<Probe>& extra = {});
BoundsReport all_bounds(const LinearMap& m, const std::vector<Probe>& extra = {});

// --- simulation with an ancilla ------------------------------------------------

struct SimulationPlan {
  LinearMap lambda;  // A (x) A' -> B, dA' = 2, CPTNI
  HermitianOperator x;
  double mu_plus = 0.0;
  double mu_minus = 0.0;
  HermitianOperator omega_plus;
  HermitianOperator omega_minus;
};

SimulationPlan build_simulation(const LinearMap& m, const MeasureOptions& opt = {});
// Uses the decomposition witnesses of an already solved robustness_R result.
SimulationPlan build_simulation(const LinearMap& m, const MeasureResult& r);
// Max trace-norm deviation of lambda(rho (x) X) from m(rho) over a Hermitian
// basis of A plus probe_count random densities.
double verify_simulation(const SimulationPlan& plan, const LinearMap& m, int probe_count,
                         std::uint64_t seed = 1);

// --- input-output games ---------------------------------------------------------

struct Game {
  int dA = 0;
  int dB = 0;
  std::vector<double> p;
  std::vector<HermitianOperator> states;
  std::vector<HermitianOperator> povm;
  linalg::RealMatrix weights;  // weights(i, j) for state i, outcome j
};

// Checks sum p = 1, sum M = 1 (1e-9) and M_j >= -1e-10; throws DomainError.
void validate_game(const Game& g);
Game game_from_witness(const HermitianOperator& w, int dA, int dB);
double payoff(const LinearMap& m, const Game& g);
// sum_ij p_i w_ij sigma_i^T (x) M_j, so that payoff(m, g) = <W_G, J_m>.
HermitianOperator game_operator(const Game& g);
MeasureResult best_cptp_payoff(const Game& g, const MeasureOptions& opt = {});

}  // namespace nonphys::measures
