#include "nbl/mellin.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "nbl/errors.hpp"
#include "nbl/quadrature.hpp"
#include "nbl/summation.hpp"

namespace nbl {

namespace {

using cplx = std::complex<double>;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// exp(z) - 1 without cancellation for small |z|.
cplx expm1c(cplx z) {
  const double x = z.real();
  const double y = z.imag();
  const double sh = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * sh * sh, std::exp(x) * std::sin(y)};
}

// (k^{-s} - (k+1)^{-s}), stable as k grows.
cplx power_difference(double k, cplx s) {
  const cplx head = std::exp(-s * std::log(k));
  return -head * expm1c(-s * std::log1p(1.0 / k));
}

// k^{e} (u^e - 1)/e with u = x/k; e = 0 means log u.
double power_increment(double x, double k, double e, double ke) {
  const double lu = std::log1p((x - k) / k);
  if (e == 0.0) return lu;
  return ke * std::expm1(e * lu) / e;
}

}  // namespace

MellinResult mellin_numeric(const ArithProfile& profile, MellinKernel kernel, cplx s,
                            std::uint64_t cutoff, double p) {
  const double sigma = s.real();
  if (!(p > 1.0)) throw ArgumentError("mellin_numeric: p must exceed 1");
  const double abscissa = kernel == MellinKernel::Hp ? 2.0 - 2.0 / p : 1.0;
  if (!(sigma > abscissa)) {
    throw ArgumentError("mellin_numeric: Re s must exceed " + std::to_string(abscissa));
  }
  if (cutoff == 0) throw ArgumentError("mellin_numeric: cutoff must be >= 1");
  if (cutoff > profile.limit()) throw ArgumentError("mellin_numeric: cutoff beyond profile limit");

  CompensatedComplexSum acc;
  double mass = 0.0;
  const double e = 1.0 - 2.0 / p;
  const auto& gl = GaussLegendre::get(16);
  double hp_running = 0.0;
  CompensatedSum hp_acc;
  for (std::uint64_t k = 1; k < cutoff; ++k) {
    const double kd = static_cast<double>(k);
    cplx term;
    switch (kernel) {
      case MellinKernel::Mertens: {
        const auto m = profile.mertens(k);
        if (m == 0) continue;
        term = static_cast<double>(m) * power_difference(kd, s) / s;
        break;
      }
      case MellinKernel::XG: {
        // int_k^{k+1} g(k) x^{-s} dx
        const double g = profile.g(k);
        term = g * power_difference(kd, s - 1.0) / (s - 1.0);
        break;
      }
      case MellinKernel::Hp: {
        // H_p(x) = H_p(k) + M(k) (F(x) - F(k)) on [k, k+1]
        const double m = static_cast<double>(profile.mertens(k));
        term = hp_running * power_difference(kd, s) / s;
        if (m != 0.0) {
          const double ke = e == 0.0 ? 1.0 : std::pow(kd, e);
          const double half = 0.5;
          const double mid = kd + 0.5;
          cplx inner = 0.0;
          for (std::size_t i = 0; i < gl.order(); ++i) {
            const double x = mid + half * gl.nodes()[i];
            inner += gl.weights()[i] * power_increment(x, kd, e, ke) * std::exp(-(s + 1.0) * std::log(x));
          }
          term += m * half * inner;
        }
        hp_acc.add(m * power_cell_integral(k, p));
        hp_running = hp_acc.value();
        break;
      }
    }
    acc.add(term);
    mass += std::abs(term);
  }

  MellinResult out;
  out.value = acc.value();
  const double t = static_cast<double>(cutoff);
  if (kernel == MellinKernel::Hp) {
    const double a = 2.0 - 2.0 / p;
    out.tail_bound = std::pow(t, a - sigma) / (a * (sigma - a));
  } else {
    out.tail_bound = std::pow(t, 1.0 - sigma) / (sigma - 1.0);
  }
  out.rounding_bound = 16.0 * kEps * mass;
  return out;
}

ZetaValue zeta_real_bounded(double s) {
  if (!(s > 1.0)) throw ArgumentError("zeta_real: s must exceed 1");
  constexpr int kHead = 32;
  // B_2, B_4, ..., B_26
  static constexpr std::array<double, 13> kBernoulli = {
      1.0 / 6.0,          -1.0 / 30.0,         1.0 / 42.0,           -1.0 / 30.0,
      5.0 / 66.0,         -691.0 / 2730.0,     7.0 / 6.0,            -3617.0 / 510.0,
      43867.0 / 798.0,    -174611.0 / 330.0,   854513.0 / 138.0,     -236364091.0 / 2730.0,
      8553103.0 / 6.0};
  CompensatedSum sum;
  for (int k = kHead - 1; k >= 1; --k) sum.add(std::pow(static_cast<double>(k), -s));
  const double n = kHead;
  const double ns = std::pow(n, -s);
  sum.add(n * ns / (s - 1.0));
  sum.add(0.5 * ns);
  // term_j = B_{2j}/(2j)! * s(s+1)...(s+2j-2) * N^{-s-2j+1}
  double rising = s;          // s (s+1) ... (s+2j-2)
  double fact = 2.0;          // (2j)!
  double npow = ns / n;       // N^{-s-2j+1}
  double next = 0.0;
  for (std::size_t j = 1; j <= kBernoulli.size(); ++j) {
    const double term = kBernoulli[j - 1] / fact * rising * npow;
    if (j == kBernoulli.size()) {
      next = std::abs(term);
      break;
    }
    sum.add(term);
    const double jd = static_cast<double>(j);
    rising *= (s + 2.0 * jd - 1.0) * (s + 2.0 * jd);
    fact *= (2.0 * jd + 1.0) * (2.0 * jd + 2.0);
    npow /= n * n;
  }
  const double value = sum.value();
  return {value, next + 4.0 * kEps * value};
}

double zeta_real(double s) { return zeta_real_bounded(s).value; }

double mellin_expected(MellinKernel kernel, double s, double p) {
  switch (kernel) {
    case MellinKernel::Mertens:
      return 1.0 / (s * zeta_real(s));
    case MellinKernel::XG:
      return 1.0 / ((s - 1.0) * zeta_real(s));
    case MellinKernel::Hp: {
      const double w = s + 2.0 / p - 1.0;
      return 1.0 / (s * w * zeta_real(w));
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace nbl
