#pragma once

// Numerical test objectives: Schwefel (10-D, unconstrained) and the
// constrained Bump function of Keane.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>

#include "core.hpp"

namespace mtts::benchmarks {

inline constexpr double schwefel_optimum_coordinate = 420.9687;
inline constexpr double schwefel10_optimum_value = -4189.83;

/// -Σ x_i sin(√|x_i|), minimum at x_i = 420.9687.
inline double schwefel(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * std::sin(std::sqrt(std::abs(v)));
  return -s;
}

inline Objective make_schwefel_objective(std::size_t n = 10) {
  Objective o;
  o.space = ParameterSpace::uniform(n, -500.0, 500.0, 1e-4);
  o.sense = Sense::minimize;
  o.eval = [](std::span<const double> x) { return Evaluation{schwefel(x), true}; };
  return o;
}

/// `printed`: numerator over Σ i·x_i², as the formula is usually printed in
/// tabu-search literature. `keane`: |numerator| over √(Σ i·x_i²), the form
/// whose known optima sit near 0.8.
enum class BumpVariant { printed, keane };

struct BumpSpec {
  std::size_t n = 20;
  double product_floor = 0.75;
  double sum_ceiling = 150.0;

  static BumpSpec for_dimension(std::size_t n) {
    if (n < 2) throw std::invalid_argument("bump dimension must be at least 2");
    return {n, 0.75, 7.5 * static_cast<double>(n)};
  }
};

/// Throws std::domain_error when the denominator vanishes (all-zero input).
inline double bump_value(std::span<const double> x, BumpVariant variant = BumpVariant::printed) {
  double sum_c4 = 0.0;
  double prod_c2 = 1.0;
  double denom = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double c2 = std::cos(x[i]) * std::cos(x[i]);
    sum_c4 += c2 * c2;
    prod_c2 *= c2;
    denom += static_cast<double>(i + 1) * x[i] * x[i];
  }
  if (!(denom > 0.0)) throw std::domain_error("bump function undefined at the origin");
  const double num = sum_c4 - 2.0 * prod_c2;
  return variant == BumpVariant::printed ? num / denom : std::abs(num) / std::sqrt(denom);
}

/// Π x_i > 0.75 (tested as Σ log x_i > log 0.75) and Σ x_i < 15n/2.
inline bool bump_feasible(std::span<const double> x, const BumpSpec& spec) {
  double log_prod = 0.0;
  double sum = 0.0;
  for (double v : x) {
    if (!(v > 0.0)) return false;
    log_prod += std::log(v);
    sum += v;
  }
  return log_prod > std::log(spec.product_floor) && sum < spec.sum_ceiling;
}

inline constexpr double bump_recommended_start = 5.0;

inline Objective make_bump_objective(std::size_t n, BumpVariant variant = BumpVariant::printed) {
  const BumpSpec spec = BumpSpec::for_dimension(n);
  Objective o;
  o.space = ParameterSpace::uniform(n, 0.0, 10.0, 1e-4);
  o.sense = Sense::maximize;
  o.eval = [spec, variant](std::span<const double> x) {
    if (!bump_feasible(x, spec)) return Evaluation{0.0, false};
    return Evaluation{bump_value(x, variant), true};
  };
  return o;
}

}  // namespace mtts::benchmarks
