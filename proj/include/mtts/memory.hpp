#pragma once

// Short-term (tabu) and intermediate (elite) memory, plus the two
// restructuring generators built on the elite archive.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <mutex>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "core.hpp"

namespace mtts {

inline constexpr std::size_t default_tabu_capacity = 7;
inline constexpr std::size_t default_elite_capacity = 10;
inline constexpr double default_match_tol = 1e-6;

/// FIFO of the last n accepted points. Owned by a single search thread.
class TabuList {
public:
  explicit TabuList(std::size_t capacity = default_tabu_capacity,
                    double match_tol = default_match_tol)
      : capacity_(capacity), match_tol_(match_tol) {
    if (capacity_ == 0) throw std::invalid_argument("tabu list capacity must be positive");
    if (match_tol_ < 0.0) throw std::invalid_argument("tabu match tolerance must be >= 0");
  }

  void push(std::span<const double> x) {
    entries_.emplace_back(x.begin(), x.end());
    if (entries_.size() > capacity_) entries_.pop_front();
  }

  bool is_tabu(std::span<const double> x) const {
    return std::any_of(entries_.begin(), entries_.end(), [&](const Vector& e) {
      return e.size() == x.size() && detail::max_abs_diff(e, x) <= match_tol_;
    });
  }

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  double match_tol() const noexcept { return match_tol_; }
  /// Oldest first.
  const std::deque<Vector>& entries() const noexcept { return entries_; }

private:
  std::size_t capacity_;
  double match_tol_;
  std::deque<Vector> entries_;
};

enum class OfferResult { inserted, rejected };

/// Best-first archive of the m best distinct points offered so far. Shared by
/// the search threads; every operation is serialized by an internal mutex and
/// reads return snapshots.
class IntermediateMemory {
public:
  explicit IntermediateMemory(std::size_t capacity = default_elite_capacity,
                              double match_tol = default_match_tol)
      : capacity_(capacity), match_tol_(match_tol) {
    if (capacity_ == 0) throw std::invalid_argument("elite memory capacity must be positive");
  }

  IntermediateMemory(const IntermediateMemory&) = delete;
  IntermediateMemory& operator=(const IntermediateMemory&) = delete;

  OfferResult offer(const SearchPoint& p) {
    if (!p.feasible) return OfferResult::rejected;
    std::lock_guard lock(mutex_);
    // A near-duplicate is rejected unless it improves on every entry it
    // matches, in which case it replaces them. Keeps entries distinct while
    // the front stays the best point ever offered.
    const auto matches = [&](const SearchPoint& e) {
      return detail::max_abs_diff(e.x, p.x) <= match_tol_;
    };
    for (const auto& e : entries_)
      if (matches(e) && !(p.value < e.value)) return OfferResult::rejected;
    std::erase_if(entries_, matches);

    if (entries_.size() == capacity_) {
      if (!(p.value < entries_.back().value)) return OfferResult::rejected;
      entries_.pop_back();
    }
    auto pos = std::upper_bound(entries_.begin(), entries_.end(), p.value,
                                [](double v, const SearchPoint& e) { return v < e.value; });
    entries_.insert(pos, p);
    return OfferResult::inserted;
  }

  std::vector<SearchPoint> snapshot() const {
    std::lock_guard lock(mutex_);
    return entries_;
  }

  std::size_t size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
  }

  bool empty() const { return size() == 0; }
  std::size_t capacity() const noexcept { return capacity_; }

private:
  std::size_t capacity_;
  double match_tol_;
  mutable std::mutex mutex_;
  std::vector<SearchPoint> entries_;
};

/// Cross-parameter recombination: every output coordinate is copied verbatim
/// from a uniformly chosen coordinate of a uniformly chosen elite entry.
/// Draw order per output coordinate is (entry, source coordinate).
template <class Rng>
Vector diversify(std::span<const SearchPoint> elite, Rng& rng) {
  if (elite.empty()) throw std::logic_error("diversify called on empty elite memory");
  const std::size_t n = elite.front().x.size();
  std::uniform_int_distribution<std::size_t> pick_entry(0, elite.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_coord(0, n - 1);
  Vector out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t r = pick_entry(rng);
    const std::size_t c = pick_coord(rng);
    out[j] = elite[r].x[c];
  }
  return out;
}

template <class Rng>
Vector diversify(const IntermediateMemory& memory, Rng& rng) {
  const auto elite = memory.snapshot();
  return diversify(std::span<const SearchPoint>(elite), rng);
}

/// Elite centroid. Each coordinate is summed in sorted order so the result
/// does not depend on entry order, bit for bit.
inline Vector intensify(std::span<const SearchPoint> elite) {
  if (elite.empty()) throw std::logic_error("intensify called on empty elite memory");
  const std::size_t n = elite.front().x.size();
  Vector mean(n, 0.0);
  std::vector<double> column(elite.size());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t r = 0; r < elite.size(); ++r) column[r] = elite[r].x[j];
    std::sort(column.begin(), column.end());
    double sum = 0.0;
    for (double v : column) sum += v;
    mean[j] = sum / static_cast<double>(elite.size());
  }
  return clamp(mean);
}

inline Vector intensify(const IntermediateMemory& memory) {
  const auto elite = memory.snapshot();
  return intensify(std::span<const SearchPoint>(elite));
}

}  // namespace mtts
