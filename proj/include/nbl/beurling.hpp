#pragma once

// Finite dilation sums f(x) = sum_k c_k rho(theta_k / x), rho(u) = u - floor(u),
// and the approximation families built from them.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "nbl/profile.hpp"
#include "nbl/rational.hpp"

namespace nbl {

struct BeurlingTerm {
  Coeff c;
  Ratio theta;
};

class BeurlingSum {
 public:
  BeurlingSum() = default;
  // Canonicalizes: merges equal theta, drops exactly-zero coefficients, sorts
  // by decreasing theta. Every theta must be positive.
  explicit BeurlingSum(std::vector<BeurlingTerm> terms);

  const std::vector<BeurlingTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  // A = sum c_k theta_k; f(x) = A / x for x >= max theta.
  const Coeff& tail_coeff() const { return tail_; }
  bool all_exact() const { return all_exact_; }
  bool in_class_b() const;  // every theta in (0, 1]
  // A == 0: exactly when all coefficients are exact, else |A| <= 8 eps sum |c_k theta_k|.
  bool in_class_c() const;

  Ratio max_theta() const;
  Ratio min_theta() const;
  double abs_coeff_sum() const;  // sum |c_k|

  // Floating evaluation; falls back to exact arithmetic when theta_k / x is
  // within rounding of an integer so that rho vanishes exactly there.
  // Exact at the binary value of x when theta/x lies within rounding of an integer.
  double eval(double x) const;
  // Exact when every coefficient is; inexact coefficients give a float Coeff.
  Coeff eval(const Ratio& x) const;
  Coeff eval(const mpq_class& x) const;

  std::string serialize() const;
  static BeurlingSum parse(const std::string& text);

 private:
  std::vector<BeurlingTerm> terms_;
  Coeff tail_;
  bool all_exact_ = true;
};

std::ostream& operator<<(std::ostream& os, const BeurlingSum& s);

// rho(u) = u - floor(u) in exact arithmetic.
mpq_class frac_part(const mpq_class& u);

enum class Family { Sn, Vn, Bn, Fn, Rn, Gn };

std::string family_name(Family f);   // "sn", "vn", ...
Family parse_family(const std::string& name);

// Sn: (mu(k), 1/k), k <= n
// Vn: Sn + (-g(n), 1)
// Bn: Sn + (-n g(n), 1/n)
// Fn: (M(n/k) - M(n/(k+1)), k/n), k <= n, plus (-1, 1/n)
// Rn: (M(n/k)/k, k/n), k <= n-1; empty for n = 1
// Coefficients are exact while n is within the profile's exact range.
BeurlingSum make_family(Family family, std::uint64_t n, const ArithProfile& profile);

enum class GeneratorKind { NegChi, Lambda };

struct Generator {
  GeneratorKind kind = GeneratorKind::NegChi;
  // Exact at the binary value of x when theta/x lies within rounding of an integer.
  double eval(double x) const;
};

// K_a f(x) = f(a x): theta_k -> theta_k / a. a must be a positive rational.
BeurlingSum dilate(const BeurlingSum& sum, const Ratio& a);

// Values f(1/j), j = 1..n, of a sum (exact when the sum is).
std::vector<Coeff> step_values(const BeurlingSum& sum, std::uint64_t n);

enum class RecoveryMode {
  Rational,  // any exact solution
  Integral,  // exact inputs must yield integer coefficients, else DataError
};

// Solves -f(1/j) = sum_{k<=j} a_k floor(j/k) by forward substitution.
std::vector<Coeff> recover_coefficients(const std::vector<Coeff>& step_values,
                                        RecoveryMode mode = RecoveryMode::Rational);

}  // namespace nbl
