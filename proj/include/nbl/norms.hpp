#pragma once

#include <cstdint>
#include <optional>

#include "nbl/beurling.hpp"
#include "nbl/piecewise.hpp"
#include "nbl/transform.hpp"

namespace nbl {

// Norm certificate. integral, quad_error, tail_low and tail_high are in units
// of the p-th power; value/lower/upper are norms.
struct NormReport {
  double p = 2.0;
  double value = 0.0;  // (integral)^(1/p)
  double lower = 0.0;  // (integral - quad_error)^(1/p)
  double upper = 0.0;  // (integral + quad_error + tail_low [+ tail_high if bound])^(1/p)
  double err = 0.0;    // max(value - lower, upper - value)
  double integral = 0.0;   // over (epsilon, far_start] plus an exact far tail
  double quad_error = 0.0;
  double tail_low = 0.0;   // bound on int_0^epsilon |f|^p
  double tail_high = 0.0;  // int_X^inf |f|^p: exact value, or a bound when !tail_high_exact
  bool tail_high_exact = true;
  std::uint64_t segments = 0;
  std::uint64_t events = 0;
};

struct NormOptions {
  std::size_t gauss_order = 16;  // paired with 2 * gauss_order for the error estimate
};

// Closed forms for p = 1 and p = 2, Gauss-Legendre pairs otherwise. Segments
// are integrated in parallel in fixed chunks and reduced in ascending order.
NormReport lp_norm(const PiecewiseHyperbolic& pw, double p, const NormOptions& options = {});
// Single-threaded reference with one running sum over all segments.
NormReport lp_norm_serial(const PiecewiseHyperbolic& pw, double p, const NormOptions& options = {});
// Gauss-Legendre pair on every segment regardless of p, for cross-checks.
NormReport lp_norm_quadrature(const PiecewiseHyperbolic& pw, double p, const NormOptions& options = {});

NormReport lp_distance(const BeurlingSum& f, std::optional<Generator> generator, double p,
                       const FlattenOptions& flatten = {}, const NormOptions& options = {});
NormReport lp_distance(const GnFunction& g, std::optional<Generator> generator, double p,
                       const FlattenOptions& flatten = {}, const NormOptions& options = {});

// Near-zero bound int_0^eps (C + L |log x|)^p dx.
double near_zero_bound(double eps, double C, double L, double p);

// Integral of |f|^p over a single segment with its error bound.
struct SegmentIntegral {
  double value;
  double error;
};
SegmentIntegral integrate_segment(const Segment& s, double p, std::size_t gauss_order = 16,
                                  bool force_quadrature = false);

}  // namespace nbl
