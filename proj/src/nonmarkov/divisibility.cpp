// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "nonphys/errors.hpp"
#include "nonphys/nonmarkov.hpp"

namespace nonphys::nonmarkov {

measures::MeasureOptions default_measure_options() {
  measures::MeasureOptions opt;
  opt.solver.gap_tol = 1e-10;
  opt.solver.feas_tol = 1e-10;
  opt.solver.max_iterations = 150;
  return opt;
}

namespace {

double propagator_norm(const ChannelFamily& f, double s, double t,
                       const measures::MeasureOptions& opt) {
  const channels::LinearMap v = propagator(f, s, t);
  auto r = measures::diamond_norm(v, opt);
  // Near-channel propagators (norm exactly 1) are degenerate for the tight
  // tolerances; retry once at the library defaults.
  if (!r.optimal()) {
    measures::MeasureOptions loose = opt;
    loose.solver.gap_tol = std::max(opt.solver.gap_tol, 1e-8);
    loose.solver.feas_tol = std::max(opt.solver.feas_tol, 1e-8);
    r = measures::diamond_norm(v, loose);
  }
  if (!r.optimal())
    throw SolverError("propagator diamond norm: " + sdp::to_string(r.status));
  // Propagators are trace preserving, so the exact norm is at least 1.
  return std::max(1.0, r.value);
}

// Runs body(i) for i in [0, n) on up to `jobs` threads.  Each index writes
// only its own slot, so results do not depend on scheduling.
template <typename F>
void parallel_for(int n, int jobs, F body) {
  jobs = std::clamp(jobs, 1, std::max(1, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (int j = 0; j < jobs; ++j)
    pool.emplace_back([&] {
      for (int i = next++; i < n && !failed; i = next++) {
        try {
          body(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

double g_dia(const ChannelFamily& f, double t, double eps, const measures::MeasureOptions& opt) {
  if (!(eps > 0.0)) throw DomainError("g_dia: eps must be positive");
  return (propagator_norm(f, t, t + eps, opt) - 1.0) / eps;
}

double g_dia_extrapolated(const ChannelFamily& f, double t, double eps,
                          const measures::MeasureOptions& opt) {
  return std::max(0.0, 2.0 * g_dia(f, t, 0.5 * eps, opt) - g_dia(f, t, eps, opt));
}

DivisibilityReport i_dia(const ChannelFamily& f, const DivisibilityOptions& opt) {
  if (opt.steps < 2) throw DomainError("i_dia: steps must be >= 2");
  const double t0 = opt.t_start;
  const double t1 = opt.t_end > 0.0 ? opt.t_end : f.t_max;
  if (!(t1 > t0)) throw DomainError("i_dia: empty time window");
  if (t1 + opt.eps > f.t_max)
    throw DomainError("i_dia: window end plus eps exceeds the family's t_max");

  DivisibilityReport rep;
  rep.family = f.name;
  rep.eps = opt.eps;
  rep.extrapolated = opt.extrapolate;
  const int n = opt.steps + 1;
  rep.times.resize(n);
  for (int i = 0; i < n; ++i) rep.times[i] = t0 + (t1 - t0) * i / opt.steps;
  // Probe every grid time first so guard violations surface as one clear error.
  for (double t : rep.times) f.at(t);

  rep.g.assign(n, 0.0);
  std::vector<char> cp(opt.steps, 1);
  parallel_for(n, opt.jobs, [&](int i) {
    const double t = rep.times[i];
    rep.g[i] = opt.extrapolate ? g_dia_extrapolated(f, t, opt.eps, opt.measure)
                               : g_dia(f, t, opt.eps, opt.measure);
    if (i + 1 < n) {
      const auto cls = channels::classify(propagator(f, t, rep.times[i + 1]), 1e-8);
      cp[i] = cls.completely_positive ? 1 : 0;
    }
  });
  rep.cp_interval.assign(cp.begin(), cp.end());
  rep.cp_divisible = std::all_of(cp.begin(), cp.end(), [](char c) { return c != 0; });

  for (int i = 0; i + 1 < n; ++i)
    rep.integral += 0.5 * (rep.g[i] + rep.g[i + 1]) * (rep.times[i + 1] - rep.times[i]);

  // Supremum of propagator norms over a coarse subgrid.
  const int m = std::clamp(opt.sup_points, 2, n);
  std::vector<double> sub(m);
  for (int k = 0; k < m; ++k) sub[k] = rep.times[static_cast<std::size_t>(k) * (n - 1) / (m - 1)];
  std::vector<std::pair<int, int>> pairs;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b) pairs.emplace_back(a, b);
  std::vector<double> norms(pairs.size());
  parallel_for(static_cast<int>(pairs.size()), opt.jobs, [&](int k) {
    norms[k] = propagator_norm(f, sub[pairs[k].first], sub[pairs[k].second], opt.measure);
  });
  rep.sup_norm = 1.0;
  rep.sup_s = sub.front();
  rep.sup_t = sub.front();
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (norms[k] > rep.sup_norm) {
      rep.sup_norm = norms[k];
      rep.sup_s = sub[pairs[k].first];
      rep.sup_t = sub[pairs[k].second];
    }
  return rep;
}

}  // namespace nonphys::nonmarkov
