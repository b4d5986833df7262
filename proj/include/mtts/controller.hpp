#pragma once

// Single-thread tabu search driver. Each iteration runs one hill-climb step,
// then escalates on consecutive failures: intensify, diversify, and finally
// halve the step and return to the best point. The search ends once the step
// drops below the problem's resolution or the evaluation budget is spent.

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string_view>
#include <utility>
#include <vector>

#include "core.hpp"
#include "hill_climber.hpp"
#include "memory.hpp"
#include "search_config.hpp"

namespace mtts {

enum class Action { continue_search, intensify, diversify, reduce_step };

inline std::string_view to_string(Action a) {
  switch (a) {
    case Action::continue_search: return "continue";
    case Action::intensify: return "intensify";
    case Action::diversify: return "diversify";
    case Action::reduce_step: return "reduce_step";
  }
  return "?";
}

enum class Termination { step_floor, eval_budget };

struct Improvement {
  std::uint64_t evals = 0;
  double value = 0.0;  // engine sense
};

struct RunResult {
  SearchPoint best;
  Vector best_raw;
  double best_native = 0.0;  // in the objective's own sense
  std::uint64_t evals = 0;
  std::vector<Improvement> history;
  Termination terminated_by = Termination::step_floor;
};

/// Where a thread begins: a fixed raw point, or uniformly random when empty.
using StartPoint = std::optional<Vector>;

inline Action control_decision(int fail_count, const SearchConfig& config) {
  if (fail_count == config.intensify_threshold) return Action::intensify;
  if (fail_count == config.diversify_threshold) return Action::diversify;
  if (fail_count == config.reduce_threshold) return Action::reduce_step;
  return Action::continue_search;
}

namespace detail {

template <class Rng>
Vector random_point(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector x(n);
  for (double& v : x) v = u(rng);
  return x;
}

/// Evaluates `x` as a replacement base. Tabu or infeasible points leave the
/// base untouched.
inline void restart_from(ThreadState& state, const Vector& x, IntermediateMemory& elite,
                         const Objective& objective, EvalCounter& counter) {
  if (state.tabu.is_tabu(x)) {
    ++state.tabu_rejected;
    return;
  }
  SearchPoint p = evaluate(objective, counter, x);
  state.note(p);
  if (!p.feasible) {
    ++state.infeasible_rejected;
    return;
  }
  state.tabu.push(p.x);
  elite.offer(p);
  state.base = std::move(p);
}

inline constexpr int max_random_start_attempts = 1000;

}  // namespace detail

template <class Rng>
void apply_action(ThreadState& state, Action action, IntermediateMemory& elite,
                  const Objective& objective, EvalCounter& counter, const SearchConfig& config,
                  Rng& rng) {
  switch (action) {
    case Action::continue_search:
      break;
    case Action::intensify:
      if (!elite.empty()) detail::restart_from(state, intensify(elite), elite, objective, counter);
      break;
    case Action::diversify: {
      const Vector x = elite.empty() ? detail::random_point(state.base.x.size(), rng)
                                     : diversify(elite, rng);
      detail::restart_from(state, x, elite, objective, counter);
      break;
    }
    case Action::reduce_step:
      state.step *= config.step_reduce_factor;
      state.base = state.best;
      state.fail_count = 0;
      break;
  }
}

/// One search thread bound to its objective, counter, RNG and the (possibly
/// shared) elite memory. `config` must already be resolved.
class SearchThread {
public:
  SearchThread(const Objective& objective, const SearchConfig& config, IntermediateMemory& elite,
               const StartPoint& start, std::uint64_t seed, int thread_id = 0)
      : objective_(&objective), config_(config), elite_(&elite), rng_(seed) {
    state_.thread_id = thread_id;
    state_.step = config_.step_initial;
    state_.tabu = TabuList(config_.n_tabu, *config_.match_tol);

    SearchPoint p;
    if (start) {
      p = evaluate(objective, counter_, normalize(objective.space, *start));
      if (!p.feasible) throw std::invalid_argument("fixed start point is infeasible");
    } else {
      for (int attempt = 0; attempt < detail::max_random_start_attempts && !p.feasible; ++attempt)
        p = evaluate(objective, counter_, detail::random_point(objective.space.dimension(), rng_));
      if (!p.feasible) throw std::runtime_error("no feasible random start point found");
    }
    state_.best = p;
    state_.tabu.push(p.x);
    elite.offer(p);
    state_.base = std::move(p);
    record();
  }

  SearchThread(const SearchThread&) = delete;
  SearchThread& operator=(const SearchThread&) = delete;

  /// Runs one hill-climb step, updates the failure count and returns the
  /// action the schedule now asks for. A deferred action is returned when the
  /// schedule itself asks for nothing; improvement cancels it.
  Action advance() {
    const StepOutcome outcome = hj_step(state_, *objective_, counter_, *elite_, config_);
    record();
    if (outcome == StepOutcome::improved) {
      state_.fail_count = 0;
      pending_.reset();
    } else {
      ++state_.fail_count;
    }
    Action a = control_decision(state_.fail_count, config_);
    if (a == Action::continue_search && pending_) a = *pending_;
    pending_.reset();
    return a;
  }

  void perform(Action a) {
    apply_action(state_, a, *elite_, *objective_, counter_, config_, rng_);
    record();
  }

  void defer(Action a) { pending_ = a; }

  bool finished() const { return state_.step < *config_.step_min; }
  std::uint64_t evals() const { return counter_.count(); }
  const ThreadState& state() const { return state_; }
  const std::vector<Improvement>& history() const { return history_; }

  RunResult result(Termination why) const {
    RunResult r;
    r.best = state_.best;
    r.best_raw = denormalize(objective_->space, state_.best.x);
    r.best_native = objective_->to_native(state_.best.value);
    r.evals = evals();
    r.history = history_;
    r.terminated_by = why;
    return r;
  }

private:
  void record() {
    if (history_.empty() || state_.best.value < history_.back().value)
      history_.push_back({counter_.count(), state_.best.value});
  }

  const Objective* objective_;
  SearchConfig config_;
  IntermediateMemory* elite_;
  std::mt19937_64 rng_;
  EvalCounter counter_;
  ThreadState state_;
  std::optional<Action> pending_;
  std::vector<Improvement> history_;
};

inline RunResult run_single(const Objective& objective, const SearchConfig& config,
                            const StartPoint& start = std::nullopt) {
  const SearchConfig cfg = resolve(config, objective.space);
  IntermediateMemory elite(cfg.m_elite, *cfg.match_tol);
  SearchThread thread(objective, cfg, elite, start, cfg.seed);

  while (true) {
    if (thread.evals() >= cfg.max_evals) return thread.result(Termination::eval_budget);
    const Action a = thread.advance();
    if (thread.evals() >= cfg.max_evals) return thread.result(Termination::eval_budget);
    thread.perform(a);
    if (thread.finished()) return thread.result(Termination::step_floor);
  }
}

}  // namespace mtts
