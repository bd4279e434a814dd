// Copyright 2026 The nonphys Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nonphys/errors.hpp"
#include "nonphys/measures.hpp"

namespace nonphys::measures {

using linalg::ComplexVector;
using linalg::Subsystem;

void BoundsReport::add(Measure q, Side s, double v, std::string source) {
  bounds.push_back({q, s, v, std::move(source)});
}

void BoundsReport::merge(const BoundsReport& other) {
  bounds.insert(bounds.end(), other.bounds.begin(), other.bounds.end());
  for (const auto& [q, v] : other.certified) certified[q] = v;
}

std::optional<Bound> BoundsReport::best(Measure q, Side s) const {
  std::optional<Bound> out;
  for (const auto& b : bounds) {
    if (b.quantity != q || b.side != s) continue;
    const bool better = !out || (s == Side::kLower ? b.value > out->value : b.value < out->value);
    if (better) out = b;
  }
  return out;
}

std::vector<std::string> BoundsReport::violations(double tol) const {
  std::vector<std::string> out;
  for (const auto& lo : bounds) {
    if (lo.side != Side::kLower) continue;
    for (const auto& up : bounds) {
      if (up.side != Side::kUpper || up.quantity != lo.quantity) continue;
      if (lo.value > up.value + tol) {
        std::ostringstream msg;
        msg << measure_name(lo.quantity) << ": lower " << lo.value << " (" << lo.source
            << ") exceeds upper " << up.value << " (" << up.source << ")";
        out.push_back(msg.str());
      }
    }
  }
  for (const auto& [q, v] : certified) {
    const auto lo = best(q, Side::kLower);
    const auto up = best(q, Side::kUpper);
    if ((lo && v < lo->value - tol) || (up && v > up->value + tol)) {
      std::ostringstream msg;
      msg << measure_name(q) << ": certified value " << v << " outside ["
          << (lo ? lo->value : -std::numeric_limits<double>::infinity()) << ", "
          << (up ? up->value : std::numeric_limits<double>::infinity()) << "]";
      out.push_back(msg.str());
    }
  }
  return out;
}

std::vector<Probe> default_probes(int d) {
  std::vector<Probe> out;
  for (int k = 0; k < d; ++k) {
    ComplexVector e = ComplexVector::Zero(d);
    e(k) = 1.0;
    out.push_back({"basis:" + std::to_string(k), HermitianOperator::projector(e)});
  }
  out.push_back({"maximally_mixed", HermitianOperator::identity(d) * (1.0 / d)});
  const ComplexVector u = ComplexVector::Constant(d, 1.0 / std::sqrt(double(d)));
  out.push_back({"uniform_superposition", HermitianOperator::projector(u)});
  return out;
}

namespace {

double tr_pos(const HermitianOperator& h) {
  return linalg::positive_negative_parts(h).positive.matrix().trace().real();
}

double tr_neg(const HermitianOperator& h) {
  return linalg::positive_negative_parts(h).negative.matrix().trace().real();
}

// Largest eigenvalues of the positive and negative parts of h.
std::pair<double, double> extreme_parts(const HermitianOperator& h) {
  return {std::max(0.0, linalg::lambda_max(h)), std::max(0.0, -linalg::lambda_min(h))};
}

std::vector<Probe> with_defaults(int d, const std::vector<Probe>& extra) {
  auto probes = default_probes(d);
  probes.insert(probes.end(), extra.begin(), extra.end());
  return probes;
}

// Best of a per-probe score, labelled by the winning probe.
template <typename F>
std::pair<double, std::string> best_probe(const std::vector<Probe>& probes, F score) {
  double best = -std::numeric_limits<double>::infinity();
  std::string label;
  for (const auto& p : probes) {
    const double v = score(p.state);
    if (v > best) {
      best = v;
      label = p.label;
    }
  }
  return {best, label};
}

}  // namespace

BoundsReport bounds_trace_norm(const LinearMap& m) {
  const double dA = m.d_in();
  const auto parts = linalg::positive_negative_parts(m.choi());
  const double tp = parts.positive.matrix().trace().real();
  const double tn = parts.negative.matrix().trace().real();
  const double tn1 = tp + tn;
  BoundsReport r;
  r.add(Measure::kCptniNorm, Side::kUpper, tn1, "trace_norm");
  r.add(Measure::kCptniNorm, Side::kLower, tn1 / dA, "trace_norm");
  r.add(Measure::kDiamond, Side::kLower, tn1 / dA, "trace_norm");
  r.add(Measure::kR, Side::kUpper, std::max(tp - 1.0, tn), "trace_norm");
  r.add(Measure::kR, Side::kLower, std::max(tp / dA - 1.0, tn / dA), "trace_norm");
  r.add(Measure::kRprime, Side::kUpper, tp - 1.0, "trace_norm");
  r.add(Measure::kRprime, Side::kLower, tp / dA - 1.0, "trace_norm");
  r.add(Measure::kRdoubleprime, Side::kUpper, tn, "trace_norm");
  r.add(Measure::kRdoubleprime, Side::kLower, tn / dA, "trace_norm");
  return r;
}

BoundsReport bounds_upper(const LinearMap& m) {
  const int dA = m.d_in();
  const int dB = m.d_out();
  const auto parts = linalg::positive_negative_parts(m.choi());
  const double lp =
      linalg::lambda_max(linalg::partial_trace(parts.positive, dA, dB, Subsystem::kB));
  const double ln =
      linalg::lambda_max(linalg::partial_trace(parts.negative, dA, dB, Subsystem::kB));
  const double ls = linalg::lambda_max(
      linalg::partial_trace(parts.positive + parts.negative, dA, dB, Subsystem::kB));
  BoundsReport r;
  r.add(Measure::kDiamond, Side::kUpper, ls, "eigenvalue_upper");
  r.add(Measure::kCptniNorm, Side::kUpper, lp + ln, "eigenvalue_upper");
  r.add(Measure::kR, Side::kUpper, std::max(lp - 1.0, ln), "eigenvalue_upper");
  r.add(Measure::kRprime, Side::kUpper, lp - 1.0, "eigenvalue_upper");
  r.add(Measure::kRdoubleprime, Side::kUpper, ln, "eigenvalue_upper");
  return r;
}

BoundsReport bounds_lower(const LinearMap& m, const std::vector<Probe>& extra) {
  const auto probes = with_defaults(m.d_in(), extra);
  auto out = [&](const HermitianOperator& rho) { return channels::apply(m, rho); };
  BoundsReport r;

  const auto dia = best_probe(probes, [&](const auto& rho) { return linalg::trace_norm(out(rho)); });
  r.add(Measure::kDiamond, Side::kLower, dia.first, "probe:" + dia.second);
  const auto neg = best_probe(probes, [&](const auto& rho) { return tr_neg(out(rho)); });
  const auto pos = best_probe(probes, [&](const auto& rho) { return tr_pos(out(rho)); });
  r.add(Measure::kCptniNorm, Side::kLower, neg.first + pos.first,
        "probe:" + neg.second + "+" + pos.second);
  if (neg.first >= pos.first - 1.0)
    r.add(Measure::kR, Side::kLower, neg.first, "probe:" + neg.second);
  else
    r.add(Measure::kR, Side::kLower, pos.first - 1.0, "probe:" + pos.second);
  r.add(Measure::kRprime, Side::kLower, pos.first - 1.0, "probe:" + pos.second);
  r.add(Measure::kRdoubleprime, Side::kLower, neg.first, "probe:" + neg.second);

  const auto [cp, cn] = extreme_parts(channels::choi_marginal(m));
  r.add(Measure::kDiamond, Side::kLower, std::max(cp, cn), "marginal_eigenvalue");
  r.add(Measure::kCptniNorm, Side::kLower, cp + cn, "marginal_eigenvalue");
  r.add(Measure::kR, Side::kLower, std::max(cp - 1.0, cn), "marginal_eigenvalue");
  r.add(Measure::kRprime, Side::kLower, cp - 1.0, "marginal_eigenvalue");
  r.add(Measure::kRdoubleprime, Side::kLower, cn, "marginal_eigenvalue");
  return r;
}

BoundsReport approx_inverse_bounds(const LinearMap& forward, const LinearMap& candidate,
                                   double eps, const std::vector<Probe>& extra) {
  if (candidate.d_in() != forward.d_out() || candidate.d_out() != forward.d_in())
    throw DimensionError("approx_inverse_bounds: candidate dimensions do not match forward");
  if (eps < 0.0) throw DomainError("approx_inverse_bounds: eps must be non-negative");

  const LinearMap round_trip = channels::compose(candidate, forward);
  double observed = 0.0;
  for (const auto& rho : linalg::tomographic_states(forward.d_in()))
    observed = std::max(observed, linalg::trace_norm(channels::apply(round_trip, rho) - rho));
  if (observed > eps + 1e-9) {
    std::ostringstream msg;
    msg << "approx_inverse_bounds: eps " << eps << " is below the observed inversion error "
        << observed;
    throw DomainError(msg.str());
  }

  const LinearMap pinv = channels::inverse(forward);
  const auto probes = with_defaults(forward.d_out(), extra);
  std::vector<Probe> preimages;
  for (const auto& p : probes)
    preimages.push_back({p.label, channels::apply(pinv, p.state)});

  const auto dia =
      best_probe(preimages, [&](const auto& z) { return linalg::trace_norm(z) * (1.0 - eps); });
  const auto neg =
      best_probe(preimages, [&](const auto& z) { return tr_neg(z) - eps * linalg::trace_norm(z); });
  const auto pos =
      best_probe(preimages, [&](const auto& z) { return tr_pos(z) - eps * linalg::trace_norm(z); });

  const std::string tag = "approx_inverse:";
  BoundsReport r;
  r.add(Measure::kDiamond, Side::kLower, dia.first, tag + dia.second);
  r.add(Measure::kCptniNorm, Side::kLower, neg.first + pos.first,
        tag + neg.second + "+" + pos.second);
  if (neg.first >= pos.first - 1.0)
    r.add(Measure::kR, Side::kLower, neg.first, tag + neg.second);
  else
    r.add(Measure::kR, Side::kLower, pos.first - 1.0, tag + pos.second);
  r.add(Measure::kRprime, Side::kLower, pos.first - 1.0, tag + pos.second);
  r.add(Measure::kRdoubleprime, Side::kLower, neg.first, tag + neg.second);
  return r;
}

BoundsReport all_bounds(const LinearMap& m, const std::vector<Probe>& extra) {
  BoundsReport r = bounds_trace_norm(m);
  r.merge(bounds_upper(m));
  r.merge(bounds_lower(m, extra));
  return r;
}

}  // namespace nonphys::measures
