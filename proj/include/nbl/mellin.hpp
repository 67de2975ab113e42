#pragma once

#include <complex>
#include <cstdint>

#include "nbl/profile.hpp"

namespace nbl {

enum class MellinKernel {
  Mertens,  // M(x)
  XG,       // x g(x)
  Hp,       // H_p(x), with p taken from the call
};

struct MellinResult {
  std::complex<double> value;  // int_1^T kernel(x) x^{-s-1} dx
  double tail_bound = 0.0;     // bound on |int_T^inf ...| from |M(x)| <= x, |g(x)| <= 1
  double rounding_bound = 0.0;
};

// Exact cell-by-cell integration: every kernel is a step function (or, for
// H_p, a step plus a power) between consecutive integers.
// Half-planes: Re s > 1 for M and x g(x); Re s > 2 - 2/p for H_p.
MellinResult mellin_numeric(const ArithProfile& profile, MellinKernel kernel, std::complex<double> s,
                            std::uint64_t cutoff, double p = 2.0);

// Closed forms the transforms should approach as cutoff -> inf (real s only):
//   M       : 1 / (s zeta(s))
//   x g(x)  : 1 / ((s-1) zeta(s))
//   H_p     : 1 / (s (s+2/p-1) zeta(s+2/p-1))
double mellin_expected(MellinKernel kernel, double s, double p = 2.0);

struct ZetaValue {
  double value;
  double truncation_bound;  // Euler-Maclaurin remainder bound
};

// zeta(s) for real s > 1 by Euler-Maclaurin: 32 head terms, 12 Bernoulli
// corrections. The remainder is bounded by the first omitted correction.
ZetaValue zeta_real_bounded(double s);
double zeta_real(double s);

}  // namespace nbl
