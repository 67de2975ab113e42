#pragma once

// Inequalities and trends over n-grids, each reported with certified margins.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nbl/beurling.hpp"
#include "nbl/norms.hpp"
#include "nbl/profile.hpp"

namespace nbl {

struct WitnessReport {
  std::string anchor;  // e.g. "sn_hurdle", "gn_gamma_tail"
  std::string family;
  std::uint64_t n = 0;
  double p = 2.0;
  double lhs_low = 0.0;
  double lhs_high = 0.0;
  double rhs = 0.0;
  double rhs_error = 0.0;
  bool satisfied = false;  // lhs_low >= rhs - rhs_error
  double margin = 0.0;     // lhs_low - rhs
  bool theorem_backed = true;
  // Components of max-form right-hand sides, in order.
  std::vector<double> components;
};

struct WitnessOptions {
  double epsilon = 1e-6;
  std::uint64_t max_events = 50'000'000;
};

// ||chi + S_n||_p >= (p-1)^{-1/p} n^{1/q} |g(n)|
WitnessReport witness_sn_hurdle(std::uint64_t n, double p, const ArithProfile& profile,
                                const WitnessOptions& options = {});

// ||chi + S_n||_2 >= max(|g(n)| sqrt(n), sqrt(int_0^{1/n} |sin(2 pi x)/(pi x) + M(n)|^2 dx))
WitnessReport witness_sn_l2_max(std::uint64_t n, const ArithProfile& profile, const WitnessOptions& options = {});

// ||G_n - lambda||_p >= (p-1)^{-1/p} |gamma(n)| n^{1/q}; at p = 2 also
// >= sqrt(int_0^{1/n} |H_2(n) - U lambda(x)|^2 dx).
WitnessReport witness_gn(std::uint64_t n, double p, const ArithProfile& profile, const WitnessOptions& options = {});

// Exact head constants: U(S_n) = M(n), U(B_n) = -n gamma(n), U(F_n) = M(n) - 1,
// U(V_n) = M(n) - g(n); and the UT head H_2(n) against direct evaluation.
std::vector<WitnessReport> head_checks(std::uint64_t n, const ArithProfile& profile,
                                       const std::vector<Family>& families);

struct TrendRow {
  std::uint64_t n;
  NormReport report;
  double seconds;
};

struct TrendReport {
  std::vector<TrendRow> rows;
  bool decreasing;      // strict decrease over the last three points, after widening by certified error
  bool non_vanishing;   // every certified lower bound is positive
};

// For G_n at p = 1 the norm is taken over (0, 1].
NormReport family_distance(Family family, std::uint64_t n, double p, const ArithProfile& profile,
                           const WitnessOptions& options = {});

TrendReport convergence_trend(Family family, double p, const std::vector<std::uint64_t>& grid,
                              const ArithProfile& profile, const WitnessOptions& options = {});

// The generator each family approximates: lambda for G_n, -chi otherwise.
Generator family_generator(Family family);

// Certified strict decrease over the last three entries of a sequence of intervals.
bool strictly_decreasing_tail(const std::vector<std::pair<double, double>>& intervals);

}  // namespace nbl
