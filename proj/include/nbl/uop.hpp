#pragma once

// The L_2 isometry U on explicit formulas:
//   U[c rho(theta/x)] = (c theta / x) rho(x/theta)
//   U chi(x)          = sin(2 pi x)/(pi x)
//   U lambda(x)       = 2 Ci(2 pi x) - sin(2 pi x)/(pi x)
//   UTw(x)            = (1/x) int w(theta) rho(x/theta) dtheta

#include <cstdint>
#include <vector>

#include "nbl/beurling.hpp"
#include "nbl/norms.hpp"
#include "nbl/piecewise.hpp"
#include "nbl/profile.hpp"
#include "nbl/transform.hpp"

namespace nbl {

struct UTerm {
  Coeff d;  // c_k theta_k
  Ratio theta;
};

// Uf(x) = (1/x) sum_k d_k rho(x / theta_k)
class USum {
 public:
  USum() = default;
  explicit USum(std::vector<UTerm> terms) : terms_(std::move(terms)) {}

  const std::vector<UTerm>& terms() const { return terms_; }
  double eval(double x) const;
  double abs_d_sum() const;

 private:
  std::vector<UTerm> terms_;
};

USum apply_u(const BeurlingSum& sum);
// K_a on the image: (d, theta) -> (d/a, theta/a).
USum dilate(const USum& u, const Ratio& a);

// sum_k c_k = sum_k d_k / theta_k: the value of Uf on (0, min theta_k).
Coeff head_constant(const USum& u);

// Value of UG_n on (0, 1/n): H_2(n) = sum_{k<n} M(k) log((k+1)/k).
double ut_head(std::uint64_t n, const ArithProfile& profile);

struct UtHeadCheck {
  double head;    // H_2(n)
  double direct;  // UT(M_1 on (1/n,1]) evaluated at x
  double x;
  double abs_diff;
};
// Direct evaluation at x = 1/(2n).
UtHeadCheck ut_head_check(std::uint64_t n, const ArithProfile& profile);

// Uf as segments a/x + b on (0, X], with |Uf| <= (sum |d_k|)/x beyond.
PiecewiseHyperbolic u_piecewise(const USum& u, double far_cutoff, std::uint64_t max_events = 50'000'000);

struct IsometryOptions {
  double far_cutoff = 1e4;
  double epsilon = 1e-6;          // cutoff for ||f||_2
  std::size_t max_terms = 12;
  std::uint64_t max_events = 50'000'000;
};

struct IsometryReport {
  NormReport f;
  NormReport uf;
  double discrepancy;  // | ||f|| - ||Uf|| |
  double tolerance;    // f.err + uf.err
  bool consistent;
};

IsometryReport isometry_check(const BeurlingSum& sum, const IsometryOptions& options = {});

double cos_integral(double x);  // Ci(x), x > 0
double u_chi(double x);
double u_lambda(double x);

// int_0^h |H - U lambda(x)|^2 dx and int_0^h |U chi(x) + M|^2 dx, with error bounds.
struct IntegralEstimate {
  double value;
  double error;
};
IntegralEstimate head_gap_lambda(double head, double h);
IntegralEstimate head_gap_chi(double head, double h);

}  // namespace nbl
