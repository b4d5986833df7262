#pragma once

// Problem-independent building blocks: box-bounded parameter spaces, the
// normalized search coordinates the engine works in, and counted objective
// evaluation.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mtts {

using Vector = std::vector<double>;

class ParameterSpace {
public:
  ParameterSpace() = default;

  ParameterSpace(Vector lower, Vector upper, Vector min_step)
      : lower_(std::move(lower)), upper_(std::move(upper)), min_step_(std::move(min_step)) {
    if (lower_.empty())
      throw std::invalid_argument("parameter space must have at least one dimension");
    if (upper_.size() != lower_.size() || min_step_.size() != lower_.size())
      throw std::invalid_argument("parameter space bound vectors differ in length");
    for (std::size_t i = 0; i < lower_.size(); ++i) {
      if (!(lower_[i] < upper_[i]))
        throw std::invalid_argument("lower bound must be below upper bound for variable " +
                                    std::to_string(i));
      if (!(min_step_[i] > 0.0) || min_step_[i] > upper_[i] - lower_[i])
        throw std::invalid_argument("minimum step out of range for variable " + std::to_string(i));
    }
  }

  /// Same bounds and resolution for every variable.
  static ParameterSpace uniform(std::size_t n, double lower, double upper, double min_step) {
    return ParameterSpace(Vector(n, lower), Vector(n, upper), Vector(n, min_step));
  }

  std::size_t dimension() const noexcept { return lower_.size(); }
  const Vector& lower() const noexcept { return lower_; }
  const Vector& upper() const noexcept { return upper_; }
  const Vector& min_step() const noexcept { return min_step_; }
  double range(std::size_t i) const { return upper_[i] - lower_[i]; }

  /// Smallest resolvable step expressed in normalized units (the coarsest
  /// variable wins, so every variable is resolved at least to its min_step).
  double normalized_min_step() const {
    double s = 0.0;
    for (std::size_t i = 0; i < dimension(); ++i) s = std::max(s, min_step_[i] / range(i));
    return s;
  }

private:
  Vector lower_;
  Vector upper_;
  Vector min_step_;
};

/// A point in normalized [0,1]^N coordinates. `value` is always in engine
/// sense (lower is better); infeasible points carry +inf.
struct SearchPoint {
  Vector x;
  double value = std::numeric_limits<double>::infinity();
  bool feasible = false;
};

enum class Sense { minimize, maximize };

struct Evaluation {
  double value = 0.0;
  bool feasible = true;
};

/// Black-box objective over raw (problem-unit) parameter vectors. Must be
/// deterministic and safe to call concurrently.
struct Objective {
  ParameterSpace space;
  Sense sense = Sense::minimize;
  std::function<Evaluation(std::span<const double>)> eval;

  double to_engine(double native) const { return sense == Sense::maximize ? -native : native; }
  double to_native(double engine) const { return sense == Sense::maximize ? -engine : engine; }
};

class EvalCounter {
public:
  EvalCounter() = default;
  EvalCounter(const EvalCounter&) = delete;
  EvalCounter& operator=(const EvalCounter&) = delete;

  void increment() noexcept { count_.fetch_add(1, std::memory_order_relaxed); }
  std::uint64_t count() const noexcept { return count_.load(std::memory_order_relaxed); }

private:
  std::atomic<std::uint64_t> count_{0};
};

namespace detail {

inline void check_dimension(const ParameterSpace& space, std::size_t n) {
  if (n != space.dimension())
    throw std::invalid_argument("dimension mismatch: expected " +
                                std::to_string(space.dimension()) + ", got " + std::to_string(n));
}

/// Chebyshev distance.
inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace detail

inline Vector normalize(const ParameterSpace& space, std::span<const double> raw) {
  detail::check_dimension(space, raw.size());
  Vector out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] < space.lower()[i] || raw[i] > space.upper()[i])
      throw std::out_of_range("raw value outside bounds for variable " + std::to_string(i));
    out[i] = (raw[i] - space.lower()[i]) / space.range(i);
  }
  return out;
}

inline Vector denormalize(const ParameterSpace& space, std::span<const double> x) {
  detail::check_dimension(space, x.size());
  Vector out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = space.lower()[i] + x[i] * space.range(i);
  return out;
}

inline Vector clamp(std::span<const double> x) {
  Vector out(x.begin(), x.end());
  for (double& v : out) v = std::clamp(v, 0.0, 1.0);
  return out;
}

inline Vector clamp(const ParameterSpace& space, std::span<const double> x) {
  detail::check_dimension(space, x.size());
  return clamp(x);
}

/// Denormalizes, calls the objective once, and converts to engine sense.
inline SearchPoint evaluate(const Objective& objective, EvalCounter& counter,
                            std::span<const double> x) {
  detail::check_dimension(objective.space, x.size());
  for (double v : x)
    if (!(v >= 0.0 && v <= 1.0)) throw std::out_of_range("normalized point outside [0,1]");

  const Vector raw = denormalize(objective.space, x);
  const Evaluation e = objective.eval(raw);
  counter.increment();

  SearchPoint p{Vector(x.begin(), x.end()), std::numeric_limits<double>::infinity(), e.feasible};
  if (e.feasible) {
    if (!std::isfinite(e.value))
      throw std::domain_error("objective returned a non-finite value at a feasible point");
    p.value = objective.to_engine(e.value);
  }
  return p;
}

}  // namespace mtts
