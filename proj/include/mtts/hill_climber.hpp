#pragma once

// Modified Hooke-Jeeves move generator. Unlike the classic method it always
// takes the best allowable axial move, even uphill, so a thread can walk out
// of a local optimum while its tabu list blocks the way back.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "core.hpp"
#include "memory.hpp"
#include "search_config.hpp"

namespace mtts {

struct Candidate {
  Vector x;
  std::size_t variable = 0;
  bool increment = true;
};

/// The up-to-2N axial neighbours base ± step·e_i, clamped to the unit box.
/// Neighbours that clamp back onto the base are dropped. Order is variable
/// index, increment before decrement; explore() relies on it for tie-breaking.
inline std::vector<Candidate> axial_candidates(std::span<const double> base, double step) {
  std::vector<Candidate> out;
  out.reserve(2 * base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    for (bool inc : {true, false}) {
      const double moved = std::clamp(inc ? base[i] + step : base[i] - step, 0.0, 1.0);
      if (moved == base[i]) continue;
      Vector x(base.begin(), base.end());
      x[i] = moved;
      out.push_back({std::move(x), i, inc});
    }
  }
  return out;
}

struct Exploration {
  std::optional<SearchPoint> move;
  std::size_t evaluated = 0;
  std::size_t tabu_rejected = 0;
  std::size_t infeasible_rejected = 0;
  std::size_t degenerate = 0;
};

inline Exploration explore(const SearchPoint& base, double step, const Objective& objective,
                           EvalCounter& counter, const TabuList& tabu) {
  Exploration result;
  const auto candidates = axial_candidates(base.x, step);
  result.degenerate = 2 * base.x.size() - candidates.size();
  for (const auto& c : candidates) {
    if (tabu.is_tabu(c.x)) {
      ++result.tabu_rejected;
      continue;
    }
    SearchPoint p = evaluate(objective, counter, c.x);
    ++result.evaluated;
    if (!p.feasible) {
      ++result.infeasible_rejected;
      continue;
    }
    if (!result.move || p.value < result.move->value) result.move = std::move(p);
  }
  return result;
}

inline Vector pattern_move(std::span<const double> old_base, std::span<const double> new_base,
                           double k) {
  Vector out(new_base.size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = new_base[i] + k * (new_base[i] - old_base[i]);
  return clamp(out);
}

enum class StepOutcome { improved, not_improved, stalled };

/// One exploration + pattern move. The adopted point becomes the new base, is
/// made tabu and offered to the shared elite memory.
inline StepOutcome hj_step(ThreadState& state, const Objective& objective, EvalCounter& counter,
                           IntermediateMemory& elite, const SearchConfig& config) {
  const double best_before = state.best.value;

  Exploration ex = explore(state.base, state.step, objective, counter, state.tabu);
  state.tabu_rejected += ex.tabu_rejected;
  state.infeasible_rejected += ex.infeasible_rejected;
  if (!ex.move) return StepOutcome::stalled;

  SearchPoint adopted = std::move(*ex.move);
  state.note(adopted);

  const Vector px = pattern_move(state.base.x, adopted.x, config.k_pattern);
  if (detail::max_abs_diff(px, adopted.x) > 0.0) {
    if (state.tabu.is_tabu(px)) {
      ++state.tabu_rejected;
    } else {
      SearchPoint pattern = evaluate(objective, counter, px);
      state.note(pattern);
      if (!pattern.feasible)
        ++state.infeasible_rejected;
      else if (pattern.value < adopted.value)
        adopted = std::move(pattern);
    }
  }

  state.tabu.push(adopted.x);
  elite.offer(adopted);
  state.base = std::move(adopted);
  return state.base.value < best_before - config.improvement_tol ? StepOutcome::improved
                                                                  : StepOutcome::not_improved;
}

}  // namespace mtts
