#include "nbl/uop.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <queue>

#include "nbl/errors.hpp"
#include "nbl/quadrature.hpp"
#include "nbl/summation.hpp"

namespace nbl {

double USum::eval(double x) const {
  if (!(x > 0.0)) throw ArgumentError("Uf: x must be positive");
  CompensatedSum acc;
  for (const auto& t : terms_) {
    const double u = x / t.theta.to_double();
    acc.add(t.d.value() * (u - std::floor(u)));
  }
  return acc.value() / x;
}

double USum::abs_d_sum() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.d.value());
  return s;
}

USum apply_u(const BeurlingSum& sum) {
  std::vector<UTerm> terms;
  terms.reserve(sum.size());
  for (const auto& t : sum.terms()) terms.push_back({t.c * Coeff(t.theta), t.theta});
  return USum(std::move(terms));
}

USum dilate(const USum& u, const Ratio& a) {
  if (!a.is_positive()) throw ArgumentError("dilate: a must be positive");
  std::vector<UTerm> terms;
  for (const auto& t : u.terms()) terms.push_back({t.d / Coeff(a), t.theta / a});
  return USum(std::move(terms));
}

Coeff head_constant(const USum& u) {
  Coeff s(0);
  for (const auto& t : u.terms()) s += t.d / Coeff(t.theta);
  return s;
}

double ut_head(std::uint64_t n, const ArithProfile& profile) {
  if (n == 0 || n > profile.limit()) throw ArgumentError("ut_head: n outside the profile");
  return profile.p() == 2.0 ? profile.hp(n) : profile.h_at(n, 2.0);
}

UtHeadCheck ut_head_check(std::uint64_t n, const ArithProfile& profile) {
  const double x = 0.5 / static_cast<double>(n);
  UtHeadCheck out{ut_head(n, profile), 0.0, x, 0.0};
  out.direct = n == 1 ? 0.0 : apply_ut(mertens_weight(n, profile), x);
  out.abs_diff = std::abs(out.head - out.direct);
  return out;
}

namespace {

using u128 = unsigned __int128;

// Breakpoint p j / q.
struct UpEvent {
  std::uint64_t p;
  std::uint64_t q;
  std::uint64_t j;
  std::uint32_t term;
};

struct UpGreater {
  bool operator()(const UpEvent& x, const UpEvent& y) const {
    return static_cast<u128>(x.p) * x.j * y.q > static_cast<u128>(y.p) * y.j * x.q;
  }
};

bool same_point(const UpEvent& x, const UpEvent& y) {
  return static_cast<u128>(x.p) * x.j * y.q == static_cast<u128>(y.p) * y.j * x.q;
}

double up_value(const UpEvent& e) {
  return static_cast<double>(static_cast<long double>(e.p) * e.j / static_cast<long double>(e.q));
}

}  // namespace

PiecewiseHyperbolic u_piecewise(const USum& u, double far_cutoff, std::uint64_t max_events) {
  if (!(far_cutoff > 0.0)) throw ArgumentError("u_piecewise: far cutoff must be positive");
  PiecewiseHyperbolic pw;
  pw.epsilon = 0.0;
  pw.far_start = far_cutoff;
  pw.far_mode = FarMode::Bound;
  pw.far_coeff = u.abs_d_sum();
  if (u.terms().empty()) return pw;

  double expected = 0.0;
  for (const auto& t : u.terms()) expected += far_cutoff / t.theta.to_double();
  if (expected > static_cast<double>(max_events)) {
    throw ResourceError("u_piecewise: about " + std::to_string(static_cast<std::uint64_t>(expected)) +
                        " breakpoints exceed the budget; use fewer terms or a smaller far cutoff");
  }

  std::priority_queue<UpEvent, std::vector<UpEvent>, UpGreater> heap;
  std::vector<double> d;
  for (const auto& t : u.terms()) {
    const auto& th = t.theta;
    if (static_cast<std::uint64_t>(th.num()) >= (std::uint64_t{1} << 32) ||
        static_cast<std::uint64_t>(th.den()) >= (std::uint64_t{1} << 32)) {
      throw OverflowError("u_piecewise: theta " + th.str() + " too large");
    }
    heap.push({static_cast<std::uint64_t>(th.num()), static_cast<std::uint64_t>(th.den()), 1,
               static_cast<std::uint32_t>(d.size())});
    d.push_back(t.d.value());
  }
  const double b = head_constant(u).value();
  CompensatedSum a;
  double cur_lo = 0.0;
  auto emit = [&](double hi) {
    if (hi > cur_lo) pw.segments.push_back({cur_lo, hi, a.value(), b, 0.0, 0.0});
  };
  std::uint64_t events = 0;
  while (!heap.empty()) {
    const UpEvent head = heap.top();
    const double v = up_value(head);
    if (v >= far_cutoff) break;
    emit(v);
    cur_lo = v;
    while (!heap.empty() && same_point(heap.top(), head)) {
      UpEvent e = heap.top();
      heap.pop();
      ++events;
      a.add(-d[e.term]);
      ++e.j;
      if (up_value(e) < far_cutoff) heap.push(e);
    }
  }
  emit(far_cutoff);
  pw.events = events;
  return pw;
}

IsometryReport isometry_check(const BeurlingSum& sum, const IsometryOptions& o) {
  if (sum.size() > o.max_terms) {
    throw ResourceError("isometry_check: " + std::to_string(sum.size()) + " terms exceed the limit of " +
                        std::to_string(o.max_terms));
  }
  IsometryReport rep{};
  FlattenOptions fo;
  fo.epsilon = sum.empty() ? o.epsilon : std::min(o.epsilon, 0.5 * sum.min_theta().to_double());
  fo.max_events = o.max_events;
  rep.f = lp_norm(to_piecewise(sum, std::nullopt, fo), 2.0);
  rep.uf = lp_norm(u_piecewise(apply_u(sum), o.far_cutoff, o.max_events), 2.0);
  rep.discrepancy = std::abs(rep.f.value - rep.uf.value);
  rep.tolerance = rep.f.err + rep.uf.err;
  rep.consistent = rep.discrepancy <= rep.tolerance;
  return rep;
}

double cos_integral(double x) {
  if (!(x > 0.0)) throw ArgumentError("cos_integral: x must be positive");
  constexpr double kTiny = 1e-300;
  if (x > 2.0) {
    // Continued fraction for E1(ix), modified Lentz.
    std::complex<double> b(1.0, x);
    std::complex<double> c(1.0 / kTiny, 0.0);
    std::complex<double> d = 1.0 / b;
    std::complex<double> h = d;
    for (int i = 1; i < 1000; ++i) {
      const double an = -static_cast<double>(i) * i;
      b += 2.0;
      d = 1.0 / (an * d + b);
      c = b + an / c;
      const std::complex<double> del = c * d;
      h *= del;
      if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16) break;
    }
    h *= std::complex<double>(std::cos(x), -std::sin(x));
    return -h.real();
  }
  // gamma + log x + sum_{k>=1} (-1)^k x^{2k} / (2k (2k)!)
  double sum = 0.0;
  double term = 1.0;  // (-1)^k x^{2k} / (2k)!
  const double x2 = x * x;
  for (int k = 1; k < 60; ++k) {
    term *= -x2 / ((2.0 * k - 1.0) * (2.0 * k));
    const double add = term / (2.0 * k);
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return std::numbers::egamma + std::log(x) + sum;
}

namespace {

double sinc_2pi(double x) {
  const double z = 2.0 * std::numbers::pi * x;
  if (std::abs(z) < 1e-4) return 2.0 * (1.0 - z * z / 6.0 + z * z * z * z / 120.0);
  return std::sin(z) / (std::numbers::pi * x);
}

}  // namespace

double u_chi(double x) {
  if (!(x > 0.0)) throw ArgumentError("u_chi: x must be positive");
  return sinc_2pi(x);
}

double u_lambda(double x) {
  if (!(x > 0.0)) throw ArgumentError("u_lambda: x must be positive");
  return 2.0 * cos_integral(2.0 * std::numbers::pi * x) - sinc_2pi(x);
}

IntegralEstimate head_gap_lambda(double head, double h) {
  if (!(h > 0.0)) throw ArgumentError("head_gap_lambda: h must be positive");
  constexpr int kLevels = 60;
  CompensatedSum acc;
  double err = 0.0;
  double hi = h;
  auto f = [head](double x) {
    const double v = head - u_lambda(x);
    return v * v;
  };
  for (int k = 0; k < kLevels; ++k) {
    const double lo = 0.5 * hi;
    const auto q = gauss_pair(f, lo, hi);
    acc.add(q.value);
    err += q.error;
    hi = lo;
  }
  // On (0, hi): |U lambda| <= 2|log x| + 2(gamma + log 2 pi) + 3.
  const double c = std::abs(head) + 2.0 * (std::numbers::egamma + std::log(2.0 * std::numbers::pi)) + 3.0;
  err += near_zero_bound(hi, c, 2.0, 2.0);
  return {acc.value(), err};
}

IntegralEstimate head_gap_chi(double head, double h) {
  if (!(h > 0.0)) throw ArgumentError("head_gap_chi: h must be positive");
  const auto q = gauss_pair(
      [head](double x) {
        const double v = sinc_2pi(x) + head;
        return v * v;
      },
      0.0, h);
  return {q.value, q.error};
}

}  // namespace nbl
