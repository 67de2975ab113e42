#pragma once

// Tw(x) = int w(theta) rho(theta/x) dtheta/theta for step weights w, and the
// objects built from it: G_n = T(M_1 restricted to (1/n, 1]) and Riemann sums
// of T applied to indicators.

#include <cstdint>
#include <vector>

#include <gmpxx.h>

#include "nbl/beurling.hpp"
#include "nbl/profile.hpp"
#include "nbl/rational.hpp"

namespace nbl {

// w = values[i] on (breaks[i+1], breaks[i]]; breaks strictly decreasing and positive.
struct StepWeight {
  std::vector<Ratio> breaks;
  std::vector<double> values;

  StepWeight() = default;
  StepWeight(std::vector<Ratio> breaks, std::vector<double> values);

  bool empty() const { return values.empty(); }
  std::size_t pieces() const { return values.size(); }
  double integral() const;        // int w dtheta
  mpq_class exact_integral() const;
  double positive_log_mass() const;  // int w^+ dtheta/theta
  double negative_log_mass() const;  // int w^- dtheta/theta
  StepWeight scaled(double factor) const;
};

// M_1(theta) = M(1/theta) on (1/n, 1]: weight M(k) on (1/(k+1), 1/k], k < n.
StepWeight mertens_weight(std::uint64_t n, const ArithProfile& profile);
// height * indicator of (a, b].
StepWeight indicator_weight(const Ratio& a, const Ratio& b, double height = 1.0);

// Closed form per maximal theta-interval with floor(theta/x) = m:
// (theta2 - theta1)/x - m log(theta2/theta1).
double apply_T(const StepWeight& w, double x);
// Same, with every breakpoint comparison in exact rational arithmetic.
double apply_T(const StepWeight& w, const Ratio& x);

// UTw(x) = (1/x) int w(theta) rho(x/theta) dtheta, evaluated piecewise.
double apply_ut(const StepWeight& w, double x);

class GnFunction {
 public:
  GnFunction(std::uint64_t n, StepWeight weight, double gamma)
      : n_(n), weight_(std::move(weight)), gamma_(gamma) {}

  std::uint64_t n() const { return n_; }
  const StepWeight& weight() const { return weight_; }
  // G_n(x) = gamma(n)/x for x >= 1.
  double gamma() const { return gamma_; }

  double operator()(double x) const;
  double operator()(const Ratio& x) const { return apply_T(weight_, x); }

 private:
  std::uint64_t n_;
  StepWeight weight_;
  double gamma_;
};

GnFunction gn(std::uint64_t n, const ArithProfile& profile);

// s_n = ((b-a)/n) sum_k (1/theta_k) rho(theta_k/x), theta_k = a + (b-a)k/n, k = 1..n.
BeurlingSum riemann_sum_T(const Ratio& a, const Ratio& b, std::uint64_t n);

struct IdentityCheck {
  double x;
  double lhs;  // log x for x > 1, else 0
  double rhs;  // int_1^x M(t) floor(x/t) dt/t
  double abs_diff;
};

// Requires floor(x) <= profile.limit().
IdentityCheck mobius_log_identity(double x, const ArithProfile& profile);

// Twenty fixed points in (0, 1000], including 1 and 2.
std::vector<double> mobius_log_sample_points();

struct LemmaCheck {
  double closed_form;  // (log(theta/n) + 1 - Euler gamma)/theta
  double quadrature;   // independent piecewise Gauss-Legendre + asymptotic tail
  double quad_error;
  double bound;        // (log theta + 1)/theta
  bool holds;          // quadrature + quad_error <= bound
};

// int_n^inf rho(x/theta) x^{-2} dx for theta > n >= 1.
LemmaCheck special_lemma_bound(double theta, std::uint64_t n);

}  // namespace nbl
