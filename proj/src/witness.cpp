#include "nbl/witness.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "nbl/errors.hpp"
#include "nbl/transform.hpp"
#include "nbl/uop.hpp"

namespace nbl {

namespace {

FlattenOptions flatten_options(const WitnessOptions& o) {
  FlattenOptions f;
  f.epsilon = o.epsilon;
  f.max_events = o.max_events;
  return f;
}

void finish(WitnessReport& r) {
  r.margin = r.lhs_low - r.rhs;
  r.satisfied = r.lhs_low >= r.rhs - r.rhs_error;
}

void check_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ArgumentError("witness: p must lie in (1, inf)");
}

}  // namespace

Generator family_generator(Family family) {
  return {family == Family::Gn || family == Family::Rn ? GeneratorKind::Lambda : GeneratorKind::NegChi};
}

NormReport family_distance(Family family, std::uint64_t n, double p, const ArithProfile& profile,
                           const WitnessOptions& options) {
  FlattenOptions fo = flatten_options(options);
  const Generator gen = family_generator(family);
  if (family == Family::Gn) {
    fo.unit_interval = p == 1.0;
    return lp_norm(to_piecewise(gn(n, profile), gen, fo), p);
  }
  return lp_norm(to_piecewise(make_family(family, n, profile), gen, fo), p);
}

WitnessReport witness_sn_hurdle(std::uint64_t n, double p, const ArithProfile& profile, const WitnessOptions& o) {
  check_p(p);
  const NormReport rep = family_distance(Family::Sn, n, p, profile, o);
  WitnessReport w;
  w.anchor = "sn_hurdle";
  w.family = "sn";
  w.n = n;
  w.p = p;
  w.lhs_low = rep.lower;
  w.lhs_high = rep.upper;
  const double nd = static_cast<double>(n);
  w.rhs = std::pow(p - 1.0, -1.0 / p) * std::pow(nd, 1.0 - 1.0 / p) * std::abs(profile.g(n));
  w.rhs_error = 4.0 * std::numeric_limits<double>::epsilon() * w.rhs;
  w.components = {w.rhs};
  finish(w);
  return w;
}

WitnessReport witness_sn_l2_max(std::uint64_t n, const ArithProfile& profile, const WitnessOptions& o) {
  const NormReport rep = family_distance(Family::Sn, n, 2.0, profile, o);
  WitnessReport w;
  w.anchor = "sn_l2_max";
  w.family = "sn";
  w.n = n;
  w.p = 2.0;
  w.lhs_low = rep.lower;
  w.lhs_high = rep.upper;
  const double nd = static_cast<double>(n);
  const double g_part = std::abs(profile.g(n)) * std::sqrt(nd);
  const IntegralEstimate head = head_gap_chi(static_cast<double>(profile.mertens(n)), 1.0 / nd);
  const double head_part = std::sqrt(std::max(head.value, 0.0));
  // sqrt(v) - sqrt(v - e) <= e / sqrt(v) for the head part's error.
  const double head_err = head.value > 0 ? std::min(head_part, head.error / head_part) : std::sqrt(head.error);
  w.components = {g_part, head_part};
  if (head_part > g_part) {
    w.rhs = head_part;
    w.rhs_error = head_err;
  } else {
    w.rhs = g_part;
    w.rhs_error = 4.0 * std::numeric_limits<double>::epsilon() * g_part;
  }
  finish(w);
  return w;
}

WitnessReport witness_gn(std::uint64_t n, double p, const ArithProfile& profile, const WitnessOptions& o) {
  check_p(p);
  const NormReport rep = family_distance(Family::Gn, n, p, profile, o);
  WitnessReport w;
  w.anchor = "gn_gamma_tail";
  w.family = "gn";
  w.n = n;
  w.p = p;
  w.lhs_low = rep.lower;
  w.lhs_high = rep.upper;
  const double nd = static_cast<double>(n);
  const double gamma_part = std::pow(p - 1.0, -1.0 / p) * std::abs(profile.gamma(n)) * std::pow(nd, 1.0 - 1.0 / p);
  w.components = {gamma_part};
  w.rhs = gamma_part;
  w.rhs_error = 4.0 * std::numeric_limits<double>::epsilon() * gamma_part;
  if (p == 2.0) {
    const IntegralEstimate head = head_gap_lambda(ut_head(n, profile), 1.0 / nd);
    const double head_part = std::sqrt(std::max(head.value, 0.0));
    w.components.push_back(head_part);
    if (head_part > gamma_part) {
      w.anchor = "gn_ut_head";
      w.rhs = head_part;
      w.rhs_error = head.value > 0 ? std::min(head_part, head.error / head_part) : std::sqrt(head.error);
    }
  }
  finish(w);
  return w;
}

std::vector<WitnessReport> head_checks(std::uint64_t n, const ArithProfile& profile,
                                       const std::vector<Family>& families) {
  std::vector<WitnessReport> out;
  const std::int64_t m = profile.mertens(n);
  for (Family f : families) {
    WitnessReport w;
    w.family = family_name(f);
    w.n = n;
    w.p = 2.0;
    if (f == Family::Gn) {
      const UtHeadCheck c = ut_head_check(n, profile);
      w.anchor = "gn_ut_head_value";
      w.lhs_low = w.lhs_high = c.direct;
      w.rhs = c.head;
      w.rhs_error = 1e-10;
      w.margin = c.direct - c.head;
      w.satisfied = c.abs_diff <= w.rhs_error;
      out.push_back(w);
      continue;
    }
    const Coeff computed = head_constant(apply_u(make_family(f, n, profile)));
    Coeff expected;
    switch (f) {
      case Family::Sn: expected = Coeff(static_cast<long>(m)); break;
      case Family::Bn:
        expected = profile.has_exact(n)
                       ? Coeff(mpq_class(-mpq_class(static_cast<unsigned long>(n)) * profile.gamma_exact(n)))
                       : Coeff::inexact(-static_cast<double>(n) * profile.gamma(n));
        break;
      case Family::Fn: expected = Coeff(static_cast<long>(m - 1)); break;
      case Family::Vn:
        expected = Coeff(static_cast<long>(m)) -
                   (profile.has_exact(n) ? Coeff(profile.g_exact(n)) : Coeff::inexact(profile.g(n)));
        break;
      case Family::Rn: expected = Coeff(0); break;  // no closed form claimed; reported as measured
      case Family::Gn: break;
    }
    w.anchor = "u_head_" + family_name(f);
    w.lhs_low = w.lhs_high = computed.value();
    w.rhs = expected.value();
    w.margin = computed.value() - expected.value();
    if (computed.is_exact() && expected.is_exact()) {
      w.satisfied = computed.exact() == expected.exact();
    } else {
      w.rhs_error = 1e-9 * (1.0 + std::abs(expected.value()));
      w.satisfied = std::abs(w.margin) <= w.rhs_error;
    }
    w.theorem_backed = f != Family::Rn;
    out.push_back(w);
  }
  return out;
}

bool strictly_decreasing_tail(const std::vector<std::pair<double, double>>& intervals) {
  const std::size_t n = intervals.size();
  if (n < 2) return false;
  const std::size_t from = n >= 3 ? n - 3 : 0;
  for (std::size_t i = from; i + 1 < n; ++i) {
    // upper of the later point below lower of the earlier
    if (!(intervals[i + 1].second < intervals[i].first)) return false;
  }
  return true;
}

TrendReport convergence_trend(Family family, double p, const std::vector<std::uint64_t>& grid,
                              const ArithProfile& profile, const WitnessOptions& options) {
  TrendReport t{};
  std::vector<std::pair<double, double>> intervals;
  t.non_vanishing = true;
  for (std::uint64_t n : grid) {
    const auto start = std::chrono::steady_clock::now();
    NormReport r = family_distance(family, n, p, profile, options);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    intervals.emplace_back(r.lower, r.upper);
    t.non_vanishing = t.non_vanishing && r.lower > 0.0;
    t.rows.push_back({n, r, secs});
  }
  t.decreasing = strictly_decreasing_tail(intervals);
  return t;
}

}  // namespace nbl
