#pragma once

#include <cstddef>
#include <vector>

#include "nbl/summation.hpp"

namespace nbl {

// Gauss-Legendre rule on [-1, 1]; nodes by Newton iteration on P_n.
class GaussLegendre {
 public:
  explicit GaussLegendre(std::size_t order);

  std::size_t order() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  // Shared immutable rule; thread-safe after first construction.
  static const GaussLegendre& get(std::size_t order);

  template <class F>
  double integrate(F&& f, double lo, double hi) const {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    CompensatedSum s;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s.add(weights_[i] * f(mid + half * nodes_[i]));
    return half * s.value();
  }

  // Also returns sum |w_i f(x_i)| * half, the scale for rounding bounds.
  template <class F>
  double integrate(F&& f, double lo, double hi, double& abs_mass) const {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    CompensatedSum s;
    double mass = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const double v = weights_[i] * f(mid + half * nodes_[i]);
      s.add(v);
      mass += v < 0 ? -v : v;
    }
    abs_mass = mass * (half < 0 ? -half : half);
    return half * s.value();
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

struct QuadEstimate {
  double value;
  double error;  // |high - low| plus a rounding floor
};

// Order-n rule paired with order-2n for an error estimate.
template <class F>
QuadEstimate gauss_pair(F&& f, double lo, double hi, std::size_t order = 16) {
  const auto& low = GaussLegendre::get(order);
  const auto& high = GaussLegendre::get(2 * order);
  double mass = 0.0;
  const double v_hi = high.integrate(f, lo, hi, mass);
  const double v_lo = low.integrate(f, lo, hi);
  const double diff = v_hi - v_lo;
  return {v_hi, (diff < 0 ? -diff : diff) + 64.0 * 2.220446049250313e-16 * mass};
}

}  // namespace nbl
