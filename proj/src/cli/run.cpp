// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nonphys/channels.hpp"
#include "nonphys/cli.hpp"
#include "nonphys/errors.hpp"
#include "nonphys/measures.hpp"
#include "nonphys/nonmarkov.hpp"

namespace nonphys::cli {

using channels::LinearMap;
using linalg::HermitianOperator;
using measures::Measure;
using measures::MeasureResult;
using nlohmann::json;

double round12(double v) {
  if (!std::isfinite(v)) return v;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return std::strtod(buf, nullptr);
}

namespace {

constexpr double kCheckTol = 1e-6;

struct Globals {
  std::string channel;
  std::string out;
  std::string dump_sdp;
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iterations = 100;
  int jobs = 1;
  std::uint64_t seed = 1;
  bool certify = false;
  bool tolerances_set = false;
};

// Collects every compiled program for --dump-sdp.
class SdpDump {
 public:
  void add(const std::string& name, const sdp::ConeProgram& p) {
    json j = json::parse(sdp::to_json(p));
    std::lock_guard<std::mutex> lock(mu_);
    std::string key = name;
    for (int k = 2; programs_.contains(key); ++k) key = name + "#" + std::to_string(k);
    programs_[key] = std::move(j);
  }
  const json& programs() const { return programs_; }

 private:
  std::mutex mu_;
  json programs_ = json::object();
};

measures::MeasureOptions measure_options(const Globals& g, SdpDump* dump) {
  measures::MeasureOptions opt;
  opt.solver.gap_tol = g.gap_tol;
  opt.solver.feas_tol = g.feas_tol;
  opt.solver.max_iterations = g.max_iterations;
  if (dump)
    opt.program_sink = [dump](const std::string& name, const sdp::ConeProgram& p) {
      dump->add(name, p);
    };
  return opt;
}

// Runs body(i) for i in [0, n) on up to `jobs` threads; each index owns its slot.
template <typename F>
void parallel_for(int n, int jobs, F body) {
  jobs = std::clamp(jobs, 1, std::max(1, n));
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

void round_all(json& j) {
  if (j.is_number_float()) {
    j = round12(j.get<double>());
  } else if (j.is_array() || j.is_object()) {
    for (auto& v : j) round_all(v);
  }
}

json matrix_json(const linalg::ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k)
      row.push_back(json::array({m(i, k).real(), m(i, k).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

json result_json(const MeasureResult& r) {
  return {{"value", r.value},
          {"dual_value", r.dual_value},
          {"gap", r.gap},
          {"status", sdp::to_string(r.status)},
          {"iterations", r.iterations},
          {"primal_violation", r.primal_violation},
          {"dual_violation", r.dual_violation}};
}

json classification_json(const channels::Classification& c) {
  return {{"completely_positive", c.completely_positive},
          {"trace_preserving", c.trace_preserving},
          {"trace_non_increasing", c.trace_non_increasing},
          {"proportional_tp", c.proportional_tp},
          {"tp_factor", c.tp_factor},
          {"lambda_min_choi", c.lambda_min_choi}};
}

const char* side_name(measures::Side s) {
  return s == measures::Side::kLower ? "lower" : "upper";
}

json bounds_json(const measures::BoundsReport& rep) {
  json all = json::array();
  for (const auto& b : rep.bounds)
    all.push_back({{"measure", std::string(measures::measure_name(b.quantity))},
                   {"side", side_name(b.side)},
                   {"value", b.value},
                   {"source", b.source}});
  json best = json::object();
  for (Measure q : measures::all_measures()) {
    json entry = json::object();
    for (auto s : {measures::Side::kLower, measures::Side::kUpper})
      if (const auto b = rep.best(q, s))
        entry[side_name(s)] = {{"value", b->value}, {"source", b->source}};
    if (!entry.empty()) best[std::string(measures::measure_name(q))] = entry;
  }
  json certified = json::object();
  for (const auto& [q, v] : rep.certified) certified[std::string(measures::measure_name(q))] = v;
  return {{"bounds", all}, {"best", best}, {"certified", certified}};
}

struct Evaluated {
  std::vector<Measure> which;
  std::vector<MeasureResult> results;
  bool all_optimal() const {
    return std::all_of(results.begin(), results.end(),
                       [](const MeasureResult& r) { return r.optimal(); });
  }
  const MeasureResult& at(Measure m) const {
    return results[std::find(which.begin(), which.end(), m) - which.begin()];
  }
};

Evaluated evaluate_all(const LinearMap& m, std::vector<Measure> which,
                       const measures::MeasureOptions& opt, int jobs) {
  Evaluated ev;
  ev.which = std::move(which);
  ev.results.resize(ev.which.size());
  parallel_for(static_cast<int>(ev.which.size()), jobs,
               [&](int i) { ev.results[i] = measures::evaluate(ev.which[i], m, opt); });
  return ev;
}

void certify_into(measures::BoundsReport& rep, const Evaluated& ev) {
  for (std::size_t i = 0; i < ev.which.size(); ++i)
    if (ev.results[i].optimal()) rep.certified[ev.which[i]] = ev.results[i].value;
}

// --- commands -------------------------------------------------------------------

int cmd_compute(const Globals& g, const std::vector<std::string>& names, SdpDump* dump,
                json& doc) {
  const LinearMap m = channels::load_channel(g.channel);
  std::vector<Measure> sdp_measures;
  bool want_spa = false, want_spa_prime = false;
  if (names.empty() || (names.size() == 1 && names[0] == "all")) {
    sdp_measures = measures::all_measures();
  } else {
    for (const auto& n : names) {
      if (n == "spa") {
        want_spa = true;
      } else if (n == "spa_prime") {
        want_spa_prime = true;
      } else {
        const Measure q = measures::measure_from_name(n);
        if (std::find(sdp_measures.begin(), sdp_measures.end(), q) == sdp_measures.end())
          sdp_measures.push_back(q);
      }
    }
  }
  const Evaluated ev = evaluate_all(m, sdp_measures, measure_options(g, dump), g.jobs);

  json results = json::object();
  for (std::size_t i = 0; i < ev.which.size(); ++i)
    results[std::string(measures::measure_name(ev.which[i]))] = result_json(ev.results[i]);
  if (want_spa) results["spa"] = {{"value", measures::spa(m)}};
  if (want_spa_prime) results["spa_prime"] = {{"value", measures::spa_prime(m)}};
  doc["d_in"] = m.d_in();
  doc["d_out"] = m.d_out();
  doc["results"] = results;

  int code = ev.all_optimal() ? kOk : kSolverFailure;
  if (g.certify) {
    measures::BoundsReport rep = measures::all_bounds(m);
    certify_into(rep, ev);
    const auto v = rep.violations(kCheckTol);
    doc["sandwich_violations"] = v;
    if (!v.empty() && code == kOk) code = kCheckFailed;
  }
  return code;
}

int cmd_bounds(const Globals& g, const std::string& approx_forward, double approx_eps,
               SdpDump* dump, json& doc) {
  const LinearMap m = channels::load_channel(g.channel);
  measures::BoundsReport rep = measures::all_bounds(m);
  if (!approx_forward.empty())
    rep.merge(measures::approx_inverse_bounds(channels::load_channel(approx_forward), m,
                                              approx_eps));
  int code = kOk;
  if (g.certify) {
    const Evaluated ev =
        evaluate_all(m, measures::all_measures(), measure_options(g, dump), g.jobs);
    certify_into(rep, ev);
    if (!ev.all_optimal()) code = kSolverFailure;
  }
  doc.update(bounds_json(rep));
  const auto v = rep.violations(kCheckTol);
  doc["violations"] = v;
  if (!v.empty() && code == kOk) code = kCheckFailed;
  return code;
}

int cmd_simulate(const Globals& g, int probes, SdpDump* dump, json& doc) {
  const LinearMap m = channels::load_channel(g.channel);
  const auto plan = measures::build_simulation(m, measure_options(g, dump));
  const double residual = measures::verify_simulation(plan, m, probes, g.seed);
  doc["x"] = matrix_json(plan.x.matrix());
  doc["x_trace_norm"] = linalg::trace_norm(plan.x);
  doc["mu_plus"] = plan.mu_plus;
  doc["mu_minus"] = plan.mu_minus;
  doc["lambda"] = json::parse(channels::channel_to_json(plan.lambda));
  doc["probes"] = probes;
  doc["residual"] = residual;
  const bool ok = residual <= 1e-8;
  doc["residual_ok"] = ok;
  return ok ? kOk : kCheckFailed;
}

int cmd_game(const Globals& g, SdpDump* dump, json& doc) {
  const LinearMap m = channels::load_channel(g.channel);
  const auto opt = measure_options(g, dump);
  const MeasureResult adv = measures::game_advantage(m, opt);
  doc["advantage"] = result_json(adv);
  if (!adv.optimal()) return kSolverFailure;
  const measures::Game game =
      measures::game_from_witness(adv.dual_witness.operators.at("W"), m.d_in(), m.d_out());
  const double pay = measures::payoff(m, game);
  const double pay_op = linalg::hs_inner(measures::game_operator(game), m.choi());
  const MeasureResult best = measures::best_cptp_payoff(game, opt);

  json weights = json::array();
  for (Eigen::Index i = 0; i < game.weights.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < game.weights.cols(); ++j) row.push_back(game.weights(i, j));
    weights.push_back(std::move(row));
  }
  doc["game"] = {{"num_states", game.states.size()},
                 {"num_outcomes", game.povm.size()},
                 {"p", game.p},
                 {"weights", weights}};
  doc["payoff"] = pay;
  doc["best_cptp_payoff"] = result_json(best);
  const bool identity_ok = std::abs(pay - pay_op) <= 1e-9 * (1.0 + std::abs(pay));
  const bool matches = std::abs(pay - adv.value) <= 1e-5;
  const bool best_ok = best.optimal() && std::abs(best.value - 1.0) <= kCheckTol;
  doc["checks"] = {{"payoff_identity", identity_ok},
                   {"payoff_equals_advantage", matches},
                   {"best_cptp_payoff_is_one", best_ok}};
  if (!best.optimal()) return kSolverFailure;
  return identity_ok && matches && best_ok ? kOk : kCheckFailed;
}

class CheckList {
 public:
  void le(const std::string& name, double lhs, double rhs) {
    add(name, "<=", lhs, rhs, lhs <= rhs + kCheckTol);
  }
  void eq(const std::string& name, double lhs, double rhs) {
    add(name, "==", lhs, rhs, std::abs(lhs - rhs) <= kCheckTol);
  }
  void flag(const std::string& name, bool pass, json detail) {
    checks_.push_back({{"name", name}, {"pass", pass}, {"detail", std::move(detail)}});
    all_pass_ = all_pass_ && pass;
  }
  bool all_pass() const { return all_pass_; }
  const json& checks() const { return checks_; }

 private:
  void add(const std::string& name, const char* rel, double lhs, double rhs, bool pass) {
    checks_.push_back(
        {{"name", name}, {"relation", rel}, {"lhs", lhs}, {"rhs", rhs}, {"pass", pass}});
    all_pass_ = all_pass_ && pass;
  }
  json checks_ = json::array();
  bool all_pass_ = true;
};

int cmd_verify(const Globals& g, SdpDump* dump, json& doc) {
  const LinearMap m = channels::load_channel(g.channel);
  const auto cls = channels::classify(m, 1e-8);
  doc["classification"] = classification_json(cls);
  const Evaluated ev =
      evaluate_all(m, measures::all_measures(), measure_options(g, dump), g.jobs);
  json values = json::object();
  for (std::size_t i = 0; i < ev.which.size(); ++i)
    values[std::string(measures::measure_name(ev.which[i]))] = result_json(ev.results[i]);
  doc["values"] = values;
  if (!ev.all_optimal()) {
    doc["solver_failure"] = true;
    return kSolverFailure;
  }

  const double dia = ev.at(Measure::kDiamond).value;
  const double cptni = ev.at(Measure::kCptniNorm).value;
  const double r = ev.at(Measure::kR).value;
  const double rp = ev.at(Measure::kRprime).value;
  const double rpp = ev.at(Measure::kRdoubleprime).value;
  const HermitianOperator marginal = channels::choi_marginal(m);
  const double cmin = linalg::lambda_min(marginal);
  const double cmax = linalg::lambda_max(marginal);

  CheckList c;
  for (std::size_t i = 0; i < ev.which.size(); ++i)
    c.le("gap:" + std::string(measures::measure_name(ev.which[i])), ev.results[i].gap, 0.0);

  c.le("cptni <= 2 diamond", cptni, 2.0 * dia);
  c.le("diamond <= cptni", dia, cptni);
  c.le("R_prime <= diamond + 1", rp, dia + 1.0);
  c.le("(diamond - 2 + lmin) / 2 <= R_prime", 0.5 * (dia - 2.0 + cmin), rp);
  c.le("R_doubleprime <= diamond", rpp, dia);
  c.le("(diamond - lmax) / 2 <= R_doubleprime", 0.5 * (dia - cmax), rpp);
  c.le("R_prime <= R", rp, r);
  c.le("R_doubleprime <= R", rpp, r);

  json skipped = json::array();
  if (cls.proportional_tp) {
    c.eq("proportional tp: diamond == cptni", dia, cptni);
  } else {
    skipped.push_back("proportional-tp equalities: Tr_B J is not proportional to 1");
  }
  if (cls.trace_preserving) {
    const double half = 0.5 * (dia - 1.0);
    c.eq("tp: R == (diamond - 1) / 2", r, half);
    c.eq("tp: R_prime == (diamond - 1) / 2", rp, half);
    c.eq("tp: R_doubleprime == (diamond - 1) / 2", rpp, half);
    c.eq("tp: (cptni - 1) / 2 == (diamond - 1) / 2", 0.5 * (cptni - 1.0), half);
  } else {
    skipped.push_back("tp equalities: map is not trace preserving");
  }
  if (cls.completely_positive) {
    const double op = linalg::operator_norm(marginal);
    c.eq("cp: diamond == ||Tr_B J||_inf", dia, op);
    c.eq("cp: cptni == ||Tr_B J||_inf", cptni, op);
  } else {
    skipped.push_back("cp equality: map is not completely positive");
  }

  measures::BoundsReport rep = measures::all_bounds(m);
  certify_into(rep, ev);
  const auto v = rep.violations(kCheckTol);
  c.flag("bounds sandwich", v.empty(), v);

  doc["checks"] = c.checks();
  doc["skipped"] = skipped;
  doc["passed"] = c.all_pass();
  return c.all_pass() ? kOk : kCheckFailed;
}

struct NonmarkovArgs {
  std::string family;
  double t_start = 0.0;
  double t_end = 0.0;
  int steps = 100;
  double eps = 1e-4;
  bool extrapolate = false;
  int sup_points = 11;
};

int cmd_nonmarkov(const Globals& g, const NonmarkovArgs& a, SdpDump* dump, json& doc) {
  const auto f = nonmarkov::family_from_spec(a.family);
  nonmarkov::DivisibilityOptions opt;
  opt.t_start = a.t_start;
  opt.t_end = a.t_end;
  opt.steps = a.steps;
  opt.eps = a.eps;
  opt.extrapolate = a.extrapolate;
  opt.sup_points = a.sup_points;
  opt.jobs = g.jobs;
  if (g.tolerances_set) {
    opt.measure.solver.gap_tol = g.gap_tol;
    opt.measure.solver.feas_tol = g.feas_tol;
  }
  if (dump) opt.measure.program_sink = measure_options(g, dump).program_sink;
  const auto rep = nonmarkov::i_dia(f, opt);
  doc["family"] = rep.family;
  doc["times"] = rep.times;
  doc["g"] = rep.g;
  doc["integral"] = rep.integral;
  doc["cp_interval"] = rep.cp_interval;
  doc["cp_divisible"] = rep.cp_divisible;
  doc["sup_norm"] = rep.sup_norm;
  doc["sup_s"] = rep.sup_s;
  doc["sup_t"] = rep.sup_t;
  doc["eps"] = rep.eps;
  doc["extrapolated"] = rep.extrapolated;
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-physicality measures of Hermiticity-preserving maps", "nonphys"};
  app.require_subcommand(1);

  Globals g;
  app.add_option("--channel", g.channel, "Channel JSON file or builtin:<name>?k=v&...");
  app.add_option("--out", g.out, "Write JSON here instead of stdout");
  auto* gap_opt = app.add_option("--gap-tol", g.gap_tol, "Solver relative gap tolerance");
  auto* feas_opt = app.add_option("--feas-tol", g.feas_tol, "Solver feasibility tolerance");
  app.add_option("--max-iterations", g.max_iterations, "Solver iteration cap");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", g.seed, "Seed for random probes");
  app.add_flag("--certify", g.certify, "Solve the SDPs and check them against the bounds");
  app.add_option("--dump-sdp", g.dump_sdp, "Write every compiled conic program as JSON");

  std::vector<std::string> measure_names;
  auto* compute = app.add_subcommand("compute", "Evaluate measures by SDP");
  compute->add_option("measures", measure_names,
                      "diamond, cptni, R, R_prime, R_doubleprime, spa, spa_prime or all");

  std::string approx_forward;
  double approx_eps = 1e-9;
  auto* bounds = app.add_subcommand("bounds", "Closed-form and probe bounds");
  bounds->add_option("--approx-inverse", approx_forward,
                     "Forward channel; treats --channel as its approximate inverse");
  bounds->add_option("--approx-eps", approx_eps, "Inversion error budget");

  int probes = 50;
  auto* simulate = app.add_subcommand("simulate", "Build and check the ancilla simulation");
  simulate->add_option("--probes", probes, "Random probe states for verification");

  auto* game = app.add_subcommand("game", "Extract an input-output game from R_prime");
  auto* verify = app.add_subcommand("verify", "Run the identity and inequality suite");

  NonmarkovArgs nm;
  auto* nonmarkov_cmd = app.add_subcommand("nonmarkov", "Divisibility report of a family");
  nonmarkov_cmd->add_option("--family", nm.family, "Family mini-spec")->required();
  nonmarkov_cmd->add_option("--t-start", nm.t_start, "Window start");
  nonmarkov_cmd->add_option("--t-end", nm.t_end, "Window end (default: family t_max)");
  nonmarkov_cmd->add_option("--steps", nm.steps, "Grid intervals");
  nonmarkov_cmd->add_option("--eps", nm.eps, "Finite-difference step");
  nonmarkov_cmd->add_flag("--extrapolate", nm.extrapolate, "Two-step extrapolation of g");
  nonmarkov_cmd->add_option("--sup-points", nm.sup_points, "Subgrid size for the supremum");

  for (auto* sub : {compute, bounds, simulate, game, verify, nonmarkov_cmd}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }
  g.tolerances_set = gap_opt->count() > 0 || feas_opt->count() > 0;

  const std::string command = app.get_subcommands().front()->get_name();
  json doc = {{"schema", 1}, {"command", command}};
  if (command != "nonmarkov") {
    if (g.channel.empty()) {
      err << "error: --channel is required for " << command << "\n";
      return kInputError;
    }
    doc["channel"] = g.channel;
  }

  SdpDump dump;
  SdpDump* dump_ptr = g.dump_sdp.empty() ? nullptr : &dump;
  int code = kOk;
  try {
    if (command == "compute") {
      code = cmd_compute(g, measure_names, dump_ptr, doc);
    } else if (command == "bounds") {
      code = cmd_bounds(g, approx_forward, approx_eps, dump_ptr, doc);
    } else if (command == "simulate") {
      code = cmd_simulate(g, probes, dump_ptr, doc);
    } else if (command == "game") {
      code = cmd_game(g, dump_ptr, doc);
    } else if (command == "verify") {
      code = cmd_verify(g, dump_ptr, doc);
    } else {
      code = cmd_nonmarkov(g, nm, dump_ptr, doc);
    }
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << "\n";
    return kSolverFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  if (dump_ptr) {
    std::ofstream f(g.dump_sdp);
    if (!f) {
      err << "error: cannot write '" << g.dump_sdp << "'\n";
      return kInputError;
    }
    f << dump.programs().dump(1) << "\n";
  }

  round_all(doc);
  const std::string text = doc.dump(2) + "\n";
  if (g.out.empty()) {
    out << text;
  } else {
    std::ofstream f(g.out);
    if (!f) {
      err << "error: cannot write '" << g.out << "'\n";
      return kInputError;
    }
    f << text;
  }
  if (code == kCheckFailed) err << "check failed\n";
  if (code == kSolverFailure) err << "solver did not reach optimality\n";
  return code;
}

}  // namespace nonphys::cli
