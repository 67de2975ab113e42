#include "nbl/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nbl/errors.hpp"
#include "nbl/quadrature.hpp"
#include "nbl/summation.hpp"

namespace nbl {

StepWeight::StepWeight(std::vector<Ratio> b, std::vector<double> v) : breaks(std::move(b)), values(std::move(v)) {
  if (values.empty()) {
    breaks.clear();
    return;
  }
  if (breaks.size() != values.size() + 1) throw ArgumentError("StepWeight: need one more break than values");
  if (!breaks.back().is_positive()) throw ArgumentError("StepWeight: breaks must be positive");
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i] > breaks[i + 1])) throw ArgumentError("StepWeight: breaks must strictly decrease");
  }
}

double StepWeight::integral() const {
  CompensatedSum s;
  for (std::size_t i = 0; i < values.size(); ++i) s.add(values[i] * (breaks[i] - breaks[i + 1]).to_double());
  return s.value();
}

mpq_class StepWeight::exact_integral() const {
  mpq_class s(0);
  for (std::size_t i = 0; i < values.size(); ++i) {
    mpq_class v;
    mpq_set_d(v.get_mpq_t(), values[i]);
    s += v * (breaks[i] - breaks[i + 1]).to_mpq();
  }
  return s;
}

namespace {

double log_ratio(const Ratio& hi, const Ratio& lo) { return std::log1p(((hi - lo) / lo).to_double()); }

}  // namespace

double StepWeight::positive_log_mass() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 0) s += values[i] * log_ratio(breaks[i], breaks[i + 1]);
  }
  return s;
}

double StepWeight::negative_log_mass() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] < 0) s -= values[i] * log_ratio(breaks[i], breaks[i + 1]);
  }
  return s;
}

StepWeight StepWeight::scaled(double factor) const {
  StepWeight out = *this;
  for (auto& v : out.values) v *= factor;
  return out;
}

StepWeight mertens_weight(std::uint64_t n, const ArithProfile& profile) {
  if (n == 0) throw ArgumentError("mertens_weight: n must be >= 1");
  if (n > profile.limit()) throw ArgumentError("mertens_weight: n exceeds the profile limit");
  if (n == 1) return {};
  std::vector<Ratio> breaks;
  std::vector<double> values;
  breaks.reserve(n);
  values.reserve(n - 1);
  for (std::uint64_t k = 1; k <= n; ++k) breaks.emplace_back(1, static_cast<std::int64_t>(k));
  for (std::uint64_t k = 1; k < n; ++k) values.push_back(static_cast<double>(profile.mertens(k)));
  return {std::move(breaks), std::move(values)};
}

StepWeight indicator_weight(const Ratio& a, const Ratio& b, double height) {
  if (!a.is_positive() || !(a < b)) throw ArgumentError("indicator_weight: need 0 < a < b");
  return {{b, a}, {height}};
}

double apply_T(const StepWeight& w, double x) {
  if (!(x > 0.0)) throw ArgumentError("apply_T: x must be positive");
  CompensatedSum acc;
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    const double hi = w.breaks[i].to_double();
    const double lo = w.breaks[i + 1].to_double();
    const double m_lo = std::floor(lo / x);
    const double m_hi = std::floor(hi / x);
    CompensatedSum piece;
    for (double m = m_lo; m <= m_hi; m += 1.0) {
      const double t1 = std::max(lo, m * x);
      const double t2 = std::min(hi, (m + 1.0) * x);
      if (!(t2 > t1)) continue;
      piece.add((t2 - t1) / x - m * std::log1p((t2 - t1) / t1));
    }
    acc.add(w.values[i] * piece.value());
  }
  return acc.value();
}

double apply_T(const StepWeight& w, const Ratio& x) {
  if (!x.is_positive()) throw ArgumentError("apply_T: x must be positive");
  CompensatedSum acc;
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    const Ratio& hi = w.breaks[i];
    const Ratio& lo = w.breaks[i + 1];
    const std::int64_t m_lo = (lo / x).floor();
    const std::int64_t m_hi = (hi / x).floor();
    CompensatedSum piece;
    for (std::int64_t m = m_lo; m <= m_hi; ++m) {
      const Ratio t1 = std::max(lo, x * Ratio(m));
      const Ratio t2 = std::min(hi, x * Ratio(m + 1));
      if (!(t2 > t1)) continue;
      piece.add(((t2 - t1) / x).to_double() - static_cast<double>(m) * log_ratio(t2, t1));
    }
    acc.add(w.values[i] * piece.value());
  }
  return acc.value();
}

double apply_ut(const StepWeight& w, double x) {
  if (!(x > 0.0)) throw ArgumentError("apply_ut: x must be positive");
  CompensatedSum acc;
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    const double hi = w.breaks[i].to_double();
    const double lo = w.breaks[i + 1].to_double();
    // floor(x/theta) = m on theta in (x/(m+1), x/m]
    const double m_lo = std::floor(x / hi);
    const double m_hi = std::floor(x / lo);
    CompensatedSum piece;
    for (double m = m_lo; m <= m_hi; m += 1.0) {
      const double t1 = std::max(lo, x / (m + 1.0));
      const double t2 = m == 0.0 ? hi : std::min(hi, x / m);
      if (!(t2 > t1)) continue;
      piece.add(std::log1p((t2 - t1) / t1) - m * (t2 - t1) / x);
    }
    acc.add(w.values[i] * piece.value());
  }
  return acc.value();
}

double GnFunction::operator()(double x) const {
  if (!(x > 0.0)) throw ArgumentError("G_n: x must be positive");
  return apply_T(weight_, x);
}

GnFunction gn(std::uint64_t n, const ArithProfile& profile) {
  StepWeight w = mertens_weight(n, profile);
  return {n, std::move(w), n == 1 ? 0.0 : profile.gamma(n)};
}

BeurlingSum riemann_sum_T(const Ratio& a, const Ratio& b, std::uint64_t n) {
  if (!a.is_positive()) throw ArgumentError("riemann_sum_T: a must be positive");
  if (!(a < b)) throw ArgumentError("riemann_sum_T: need a < b");
  if (n == 0) throw ArgumentError("riemann_sum_T: n must be >= 1");
  const Ratio width = b - a;
  const Ratio nn(static_cast<std::int64_t>(n));
  std::vector<BeurlingTerm> terms;
  terms.reserve(n);
  for (std::uint64_t k = 1; k <= n; ++k) {
    const Ratio theta = a + width * Ratio(static_cast<std::int64_t>(k)) / nn;
    terms.push_back({Coeff(width / (nn * theta)), theta});
  }
  return BeurlingSum(std::move(terms));
}

IdentityCheck mobius_log_identity(double x, const ArithProfile& profile) {
  if (!(x > 0.0)) throw ArgumentError("mobius_log_identity: x must be positive");
  IdentityCheck out{x, x > 1.0 ? std::log(x) : 0.0, 0.0, 0.0};
  if (x <= 1.0) {
    out.abs_diff = std::abs(out.lhs);
    return out;
  }
  const auto top = static_cast<std::uint64_t>(std::floor(x));
  if (top > profile.limit()) throw ArgumentError("mobius_log_identity: x beyond profile limit");
  std::vector<double> cuts;
  cuts.reserve(2 * top + 2);
  for (std::uint64_t k = 1; k <= top; ++k) {
    cuts.push_back(static_cast<double>(k));
    const double q = x / static_cast<double>(k);
    if (q > 1.0) cuts.push_back(q);
  }
  cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  CompensatedSum acc;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double t1 = cuts[i];
    const double t2 = cuts[i + 1];
    const double mid = 0.5 * (t1 + t2);
    const auto k = static_cast<std::uint64_t>(std::floor(mid));
    const double j = std::floor(x / mid);
    const auto m = profile.mertens(k);
    if (m == 0 || j == 0.0) continue;
    acc.add(static_cast<double>(m) * j * std::log1p((t2 - t1) / t1));
  }
  out.rhs = acc.value();
  out.abs_diff = std::abs(out.lhs - out.rhs);
  return out;
}

LemmaCheck special_lemma_bound(double theta, std::uint64_t n) {
  if (n == 0) throw ArgumentError("special_lemma_bound: n must be >= 1");
  const double nd = static_cast<double>(n);
  if (!(theta > nd)) throw ArgumentError("special_lemma_bound: need theta > n");
  LemmaCheck out{};
  out.closed_form = (std::log(theta / nd) + 1.0 - std::numbers::egamma) / theta;
  out.bound = (std::log(theta) + 1.0) / theta;

  CompensatedSum value;
  double err = 0.0;
  // [n, theta]: rho(x/theta) = x/theta, split geometrically.
  for (double lo = nd; lo < theta;) {
    const double hi = std::min(theta, 2.0 * lo);
    const auto q = gauss_pair([theta](double x) { return 1.0 / (theta * x); }, lo, hi);
    value.add(q.value);
    err += q.error;
    lo = hi;
  }
  // [theta, inf): (1/theta) sum_j int_j^{j+1} (u - j)/u^2 du, then the asymptotic tail
  // sum_{j>=J} = H_J - log J - gamma = 1/(2J) - 1/(12J^2) + 1/(120J^4) - 1/(252J^6) + ...
  constexpr int kJ = 256;
  CompensatedSum cells;
  double cell_err = 0.0;
  for (int j = 1; j < kJ; ++j) {
    const double jd = j;
    const auto q = gauss_pair([jd](double u) { return (u - jd) / (u * u); }, jd, jd + 1.0);
    cells.add(q.value);
    cell_err += q.error;
  }
  const double J = kJ;
  const double J2 = J * J;
  cells.add(1.0 / (2.0 * J) - 1.0 / (12.0 * J2) + 1.0 / (120.0 * J2 * J2) - 1.0 / (252.0 * J2 * J2 * J2));
  cell_err += 1.0 / (240.0 * J2 * J2 * J2 * J2);
  value.add(cells.value() / theta);
  err += cell_err / theta;
  out.quadrature = value.value();
  out.quad_error = err;
  out.holds = out.quadrature + out.quad_error <= out.bound;
  return out;
}

}  // namespace nbl

namespace nbl {

std::vector<double> mobius_log_sample_points() {
  return {0.5,   1.0,     2.0,   std::numbers::e, 3.5,   10.0,  10.0 * std::numbers::pi,
          50.5,  99.9,    100.0, 123.456,         200.0, 257.3, 333.3,
          500.0, 640.125, 777.7, 901.2,           999.9, 1000.0};
}

}  // namespace nbl
