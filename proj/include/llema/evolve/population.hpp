#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "llema/evolve/record.hpp"
#include "llema/random.hpp"

namespace llema::evolve {

// Records ordered by composite score, best first, one per reduced formula.
class MemoryPool {
 public:
  explicit MemoryPool(std::optional<std::size_t> capacity = std::nullopt) : capacity_(capacity) {}

  // Returns false when an existing entry with the same key scores at least as well.
  bool insert(CandidateRecord record) {
    const auto key = record.key();
    const auto same = std::find_if(entries_.begin(), entries_.end(),
                                   [&](const CandidateRecord& e) { return e.key() == key; });
    if (same != entries_.end()) {
      if (same->score.composite >= record.score.composite) return false;
      entries_.erase(same);
    }
    // Ties go after existing entries so earlier records stay ahead.
    const auto pos = std::upper_bound(entries_.begin(), entries_.end(), record.score.composite,
                                      [](double s, const CandidateRecord& e) { return s > e.score.composite; });
    entries_.insert(pos, std::move(record));
    if (capacity_ && entries_.size() > *capacity_) entries_.pop_back();
    return true;
  }

  const std::vector<CandidateRecord>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::optional<std::size_t> capacity() const noexcept { return capacity_; }

  double mean_score() const {
    double sum = 0.0;
    for (const auto& e : entries_) sum += e.score.composite;
    return entries_.empty() ? 0.0 : sum / static_cast<double>(entries_.size());
  }

 private:
  std::optional<std::size_t> capacity_;
  std::vector<CandidateRecord> entries_;
};

struct Island {
  int id = 0;
  MemoryPool success;
  MemoryPool failure;
  std::uint64_t u = 0;

  Island(int id_, std::optional<std::size_t> capacity = std::nullopt)
      : id(id_), success(capacity), failure(capacity) {}

  // Mean composite over the success pool, else the failure pool, else 0.
  double mean_score() const {
    if (!success.empty()) return success.mean_score();
    if (!failure.empty()) return failure.mean_score();
    return 0.0;
  }

  std::optional<double> best_success() const {
    if (success.empty()) return std::nullopt;
    return success.entries().front().score.composite;
  }
};

inline void route(Island& island, CandidateRecord record) {
  if (record.score.success)
    island.success.insert(std::move(record));
  else
    island.failure.insert(std::move(record));
}

// Every candidate assigned to the island advances u, kept or not.
inline void update_population(Island& island, CandidateRecord record) {
  route(island, std::move(record));
  ++island.u;
}

inline std::vector<generate::Demonstration> sample_demonstrations(const Island& island, std::size_t k) {
  std::vector<generate::Demonstration> out;
  for (const auto* pool : {&island.success, &island.failure})
    for (std::size_t i = 0; i < std::min(k, pool->size()); ++i)
      out.push_back(to_demonstration(pool->entries()[i]));
  return out;
}

inline double temperature(std::uint64_t u, double t0 = 0.1, std::uint64_t schedule_n = 10000) {
  return t0 * (1.0 - static_cast<double>(u % schedule_n) / static_cast<double>(schedule_n));
}

inline std::vector<double> boltzmann_probabilities(const std::vector<double>& scores, double tau) {
  if (scores.empty()) return {};
  double top = scores[0] / tau;
  for (double s : scores) top = std::max(top, s / tau);
  std::vector<double> p;
  p.reserve(scores.size());
  double sum = 0.0;
  for (double s : scores) {
    p.push_back(std::exp(s / tau - top));
    sum += p.back();
  }
  for (double& x : p) x /= sum;
  return p;
}

inline std::size_t boltzmann_select(const std::vector<double>& scores, double tau, Rng& rng) {
  const auto p = boltzmann_probabilities(scores, tau);
  const double draw = uniform_unit(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (draw < acc) return i;
  }
  std::size_t last = p.size() - 1;
  while (last > 0 && p[last] == 0.0) --last;
  return last;
}

}  // namespace llema::evolve
