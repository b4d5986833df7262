#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>

#include "core.hpp"
#include "memory.hpp"

namespace mtts {

/// Tunables of the search. Thresholds count consecutive non-improving
/// hill-climb steps: intensify at A, diversify at B, shrink the step and
/// return to the best point at C.
struct SearchConfig {
  std::size_t n_tabu = default_tabu_capacity;
  std::size_t m_elite = default_elite_capacity;
  double k_pattern = 1.0;
  double step_initial = 0.15;
  double step_reduce_factor = 0.7;
  std::optional<double> step_min;  // defaults to the space's normalized min step
  int intensify_threshold = 5;
  int diversify_threshold = 10;
  int reduce_threshold = 15;
  std::uint64_t max_evals = 200'000;
  std::uint64_t seed = 0;
  std::optional<double> match_tol;  // defaults to min(1e-6, step_min / 2)
  double improvement_tol = 1e-12;
};

/// Fills the derived fields from `space` and validates the result.
inline SearchConfig resolve(SearchConfig c, const ParameterSpace& space) {
  if (!c.step_min) c.step_min = space.normalized_min_step();
  // Neighbours at the finest step must never match the base they came from.
  if (!c.match_tol) c.match_tol = std::min(default_match_tol, *c.step_min / 2.0);

  if (c.n_tabu == 0 || c.m_elite == 0)
    throw std::invalid_argument("tabu and elite capacities must be positive");
  if (!(c.k_pattern > 0.0)) throw std::invalid_argument("k_pattern must be positive");
  if (!(c.step_reduce_factor > 0.0 && c.step_reduce_factor < 1.0))
    throw std::invalid_argument("step_reduce_factor must lie in (0,1)");
  if (!(*c.step_min > 0.0 && *c.step_min <= c.step_initial && c.step_initial <= 1.0))
    throw std::invalid_argument("require 0 < step_min <= step_initial <= 1");
  if (!(0 < c.intensify_threshold && c.intensify_threshold < c.diversify_threshold &&
        c.diversify_threshold < c.reduce_threshold))
    throw std::invalid_argument("require 0 < intensify < diversify < reduce thresholds");
  if (c.max_evals == 0) throw std::invalid_argument("max_evals must be positive");
  if (*c.match_tol < 0.0) throw std::invalid_argument("match_tol must be >= 0");
  return c;
}

/// One search thread. `best` tracks every feasible point this thread has
/// evaluated, not only the adopted ones.
struct ThreadState {
  SearchPoint base;
  SearchPoint best;
  double step = 0.15;
  int fail_count = 0;
  TabuList tabu;
  int thread_id = 0;

  std::uint64_t tabu_rejected = 0;
  std::uint64_t infeasible_rejected = 0;

  void note(const SearchPoint& p) {
    if (p.feasible && p.value < best.value) best = p;
  }
};

}  // namespace mtts
