#include "nbl/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "nbl/errors.hpp"

namespace nbl {

GaussLegendre::GaussLegendre(std::size_t order) : nodes_(order), weights_(order) {
  if (order == 0) throw ArgumentError("Gauss-Legendre order must be positive");
  const std::size_t n = order;
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    if (n == 1) {
      x = 0.0;
      dp = 1.0;
    }
    nodes_[i] = -x;
    nodes_[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights_[i] = w;
    weights_[n - 1 - i] = w;
  }
  if (n == 1) weights_[0] = 2.0;
}

const GaussLegendre& GaussLegendre::get(std::size_t order) {
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<GaussLegendre>> rules;
  std::lock_guard lock(mu);
  auto& slot = rules[order];
  if (!slot) slot = std::make_unique<GaussLegendre>(order);
  return *slot;
}

}  // namespace nbl
