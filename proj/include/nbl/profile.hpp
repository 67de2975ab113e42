#pragma once

// Per-n arithmetic functions built from a Moebius table:
//   M(n)     = sum_{k<=n} mu(k)
//   g(n)     = sum_{k<=n} mu(k)/k
//   gamma(n) = sum_{k<=n-1} M(k)/(k(k+1))
//   H_p(n)   = int_1^n M(t) t^{-2/p} dt
// g and gamma are exact rationals up to exact_limit, then compensated doubles.

#include <cstdint>
#include <memory>
#include <vector>

#include <gmpxx.h>

#include "nbl/sieve.hpp"

namespace nbl {

inline constexpr std::uint64_t kDefaultExactLimit = 10000;

struct ProfileOptions {
  std::uint64_t limit = 0;  // 0: the table's limit
  std::uint64_t exact_limit = kDefaultExactLimit;
};

class ArithProfile {
 public:
  std::uint64_t limit() const { return limit_; }
  std::uint64_t exact_limit() const { return exact_limit_; }
  double p() const { return p_; }
  const MobiusTable& table() const { return *table_; }

  int mu(std::uint64_t k) const { return table_->mu(k); }
  // M(n) for 0 <= n <= limit; M(0) = 0.
  std::int64_t mertens(std::uint64_t n) const { return mertens_.at(n); }
  double g(std::uint64_t n) const { return g_.at(n); }
  double gamma(std::uint64_t n) const { return gamma_.at(n); }
  double hp(std::uint64_t n) const { return hp_.at(n); }

  bool has_exact(std::uint64_t n) const { return n <= exact_limit_; }
  // Throws ArgumentError past exact_limit.
  const mpq_class& g_exact(std::uint64_t n) const;
  const mpq_class& gamma_exact(std::uint64_t n) const;

  // gamma(n) by the piecewise integral sum_{k<n} M(k) (1/k - 1/(k+1)), exact.
  mpq_class gamma_piecewise_exact(std::uint64_t n) const;

  // H_q(n) for an arbitrary q > 1, recomputed in O(n).
  double h_at(std::uint64_t n, double q) const;

  friend ArithProfile build_profile(std::shared_ptr<const MobiusTable> table, double p,
                                    const ProfileOptions& options);

 private:
  std::shared_ptr<const MobiusTable> table_;
  std::uint64_t limit_ = 0;
  std::uint64_t exact_limit_ = 0;
  double p_ = 2.0;
  std::vector<std::int32_t> mertens_;
  std::vector<double> g_;
  std::vector<double> gamma_;
  std::vector<double> hp_;
  std::vector<mpq_class> g_exact_;
  std::vector<mpq_class> gamma_exact_;
};

// p must lie in (1, inf).
ArithProfile build_profile(std::shared_ptr<const MobiusTable> table, double p = 2.0,
                           const ProfileOptions& options = {});

// int_k^{k+1} t^{-2/p} dt in a cancellation-free form.
double power_cell_integral(std::uint64_t k, double p);

enum class Series { Mertens, G, Gamma, Hp };

// Positions n in [from, to] (inclusive) with series(n) * series(n+1) < 0, plus the first
// index of each zero run whose flanking values have opposite signs.
std::vector<std::uint64_t> sign_changes(const ArithProfile& profile, Series series,
                                        std::uint64_t from, std::uint64_t to);

// Identity checks; each returns the first failing index, or 0 when all hold.
// sum_{k<=j} mu(k) floor(j/k) = 1 for j <= limit: direct O(j) per j, or grouped
// by equal quotients through M in O(sqrt j).
std::uint64_t first_floor_sum_failure(const ArithProfile& profile, std::uint64_t limit, bool grouped);
// g(n) = M(n)/n + gamma(n) in exact arithmetic.
std::uint64_t first_mggamma_failure(const ArithProfile& profile, std::uint64_t limit);
// gamma(n) against the running piecewise integral sum M(k) (1/k - 1/(k+1)).
std::uint64_t first_gamma_piecewise_failure(const ArithProfile& profile, std::uint64_t limit);

}  // namespace nbl
