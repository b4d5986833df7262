#pragma once

// Two cooperating tabu search threads. Each keeps a private tabu list; both
// feed and draw from one shared elite memory. At any stage at most one thread
// may restructure (intensify, diversify or shrink its step); the other defers
// its action to the next stage.

#include <array>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <thread>
#include <vector>

#include "controller.hpp"
#include "core.hpp"
#include "memory.hpp"
#include "search_config.hpp"

namespace mtts {

struct MultiConfig {
  SearchConfig base;
  StartPoint start_a;  // empty: random
  StartPoint start_b;
  bool lockstep = true;
};

struct Collision {
  std::uint64_t evals = 0;
  double distance = 0.0;
  bool operator==(const Collision&) const = default;
};

using CollisionLog = std::vector<Collision>;

/// Actions actually performed by thread A and B in one lockstep stage.
struct StageRecord {
  std::uint64_t stage = 0;
  Action a = Action::continue_search;
  Action b = Action::continue_search;
};

struct MultiResult {
  RunResult combined;
  RunResult thread_a;
  RunResult thread_b;
  CollisionLog collisions;
  std::vector<StageRecord> stages;  // lockstep mode only
  std::vector<SearchPoint> elite;   // final shared memory, best first
};

/// SplitMix64 finalizer; distinct streams per thread from one base seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Appends to `log` when the two bases coincide within `tol`.
inline bool detect_collision(const ThreadState& a, const ThreadState& b, double tol,
                             CollisionLog& log, std::uint64_t evals) {
  const double d = detail::max_abs_diff(a.base.x, b.base.x);
  if (d > tol) return false;
  log.push_back({evals, d});
  return true;
}

namespace detail {

class GlobalBest {
public:
  void update(const SearchThread& t, std::uint64_t evals) {
    const SearchPoint& p = t.state().best;
    if (!history_.empty() && !(p.value < history_.back().value)) return;
    history_.push_back({evals, p.value});
    best_ = p;
  }
  const SearchPoint& best() const { return best_; }
  const std::vector<Improvement>& history() const { return history_; }

private:
  SearchPoint best_;
  std::vector<Improvement> history_;
};

/// The thread with the worse best restructures first; ties go to thread A.
inline int arbitrate(const SearchThread& a, const SearchThread& b) {
  return b.state().best.value > a.state().best.value ? 1 : 0;
}

}  // namespace detail

inline MultiResult run_multi(const Objective& objective, const MultiConfig& config) {
  const SearchConfig cfg = resolve(config.base, objective.space);
  const double tol = *cfg.match_tol;
  IntermediateMemory elite(cfg.m_elite, tol);

  SearchThread a(objective, cfg, elite, config.start_a, derive_seed(cfg.seed, 0), 0);
  SearchThread b(objective, cfg, elite, config.start_b, derive_seed(cfg.seed, 1), 1);
  std::array<SearchThread*, 2> threads{&a, &b};
  auto total = [&] { return a.evals() + b.evals(); };

  MultiResult out;
  detail::GlobalBest global;
  global.update(a, total());
  global.update(b, total());
  Termination why = Termination::step_floor;

  if (config.lockstep) {
    for (std::uint64_t stage = 0; !(a.finished() && b.finished()); ++stage) {
      std::array<Action, 2> act{Action::continue_search, Action::continue_search};
      bool budget_hit = false;
      for (int t = 0; t < 2 && !budget_hit; ++t) {
        if (threads[t]->finished()) continue;
        if (total() >= cfg.max_evals) {
          budget_hit = true;
          break;
        }
        act[t] = threads[t]->advance();
        global.update(*threads[t], total());
        budget_hit = total() >= cfg.max_evals;
      }
      if (budget_hit) {
        why = Termination::eval_budget;
        break;
      }

      if (act[0] != Action::continue_search && act[1] != Action::continue_search) {
        const int loser = 1 - detail::arbitrate(a, b);
        threads[loser]->defer(act[loser]);
        act[loser] = Action::continue_search;
      }
      for (int t = 0; t < 2; ++t) {
        if (act[t] == Action::continue_search) continue;
        threads[t]->perform(act[t]);
        global.update(*threads[t], total());
      }
      if (!a.finished() && !b.finished())
        detect_collision(a.state(), b.state(), tol, out.collisions, total());
      out.stages.push_back({stage, act[0], act[1]});
    }
  } else {
    std::mutex shared;  // guards global, collisions, published and active
    std::mutex token;   // held while a thread restructures
    std::atomic<bool> budget_hit{false};
    std::array<ThreadState, 2> published{a.state(), b.state()};
    std::array<bool, 2> active{true, true};

    auto worker = [&](int t) {
      SearchThread& self = *threads[t];
      while (!self.finished()) {
        if (total() >= cfg.max_evals) {
          budget_hit = true;
          break;
        }
        const Action act = self.advance();
        if (act != Action::continue_search) {
          std::unique_lock lock(token, std::try_to_lock);
          if (lock.owns_lock())
            self.perform(act);
          else
            self.defer(act);
        }
        std::lock_guard lock(shared);
        global.update(self, total());
        published[t].base = self.state().base;
        if (active[1 - t] && !self.finished())
          detect_collision(published[t], published[1 - t], tol, out.collisions, total());
      }
      std::lock_guard lock(shared);
      active[t] = false;
    };
    {
      std::jthread ta(worker, 0);
      std::jthread tb(worker, 1);
    }
    if (budget_hit) why = Termination::eval_budget;
  }

  out.thread_a = a.result(why);
  out.thread_b = b.result(why);
  out.combined.best = global.best();
  out.combined.best_raw = denormalize(objective.space, global.best().x);
  out.combined.best_native = objective.to_native(global.best().value);
  out.combined.evals = total();
  out.combined.history = global.history();
  out.combined.terminated_by = why;
  out.elite = elite.snapshot();
  return out;
}

}  // namespace mtts
