#pragma once

// Piecewise representation f(x) = a/x + b + c log x on ordered segments,
// with certified behaviour outside the tiled range:
//   (0, epsilon)      |f| <= near_const + near_log |log x|
//   (far_start, inf)  f = far_coeff / x exactly, or |f| <= far_coeff / x

#include <cstdint>
#include <optional>
#include <vector>

#include "nbl/beurling.hpp"
#include "nbl/rational.hpp"
#include "nbl/transform.hpp"

namespace nbl {

struct Segment {
  double lo;
  double hi;
  double a;
  double b;       // b = b_hi + b_lo, carried as a double-double
  double b_lo;
  double c;

  // Value at x evaluated in extended precision.
  double eval(double x) const;
};

enum class FarMode { None, Exact, Bound };

struct PiecewiseHyperbolic {
  std::vector<Segment> segments;  // ascending, contiguous on (epsilon, far_start]
  double epsilon = 0.0;
  double near_const = 0.0;
  double near_log = 0.0;
  double far_start = 0.0;
  FarMode far_mode = FarMode::None;
  double far_coeff = 0.0;
  std::uint64_t events = 0;

  std::size_t segment_count() const { return segments.size(); }
  // Defined on (epsilon, inf) (on (epsilon, far_start] when far_mode is None).
  double eval(double x) const;
};

struct FlattenOptions {
  double epsilon = 1e-6;
  std::uint64_t max_events = 50'000'000;
  bool unit_interval = false;  // restrict to (0, 1]: no far region
};

// f - generator, with f = scale_sum * sum + scale_weight * T(weight).
struct FlattenInput {
  const BeurlingSum* sum = nullptr;
  double sum_scale = 1.0;
  const StepWeight* weight = nullptr;
  double weight_scale = 1.0;
  std::optional<Generator> generator;
};

// Merges the breakpoint streams theta_k / j and b_i / m through a priority
// queue, comparing breakpoints exactly. Throws ArgumentError when epsilon is
// not below min theta_k, ResourceError past max_events.
PiecewiseHyperbolic flatten(const FlattenInput& input, const FlattenOptions& options);

PiecewiseHyperbolic to_piecewise(const BeurlingSum& sum, std::optional<Generator> generator,
                                 const FlattenOptions& options = {});
PiecewiseHyperbolic to_piecewise(const GnFunction& g, std::optional<Generator> generator,
                                 const FlattenOptions& options = {});
// sum - T(weight)
PiecewiseHyperbolic to_piecewise_minus_T(const BeurlingSum& sum, const StepWeight& weight,
                                         const FlattenOptions& options = {});

// ((K_a - I) lambda)/(a - 1) - chi on (0, 1], exactly representable for a > 1.
PiecewiseHyperbolic dilation_difference_quotient(double a);

}  // namespace nbl
