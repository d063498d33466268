#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "llema/evolve/record.hpp"
#include "llema/oracle/reference_db.hpp"
#include "llema/tasks/task.hpp"

namespace llema::metrics {

using evolve::CandidateRecord;

inline constexpr double kStableHull = 0.1;  // eV/atom

struct ParetoPoint {
  std::string formula;
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const ParetoPoint&, const ParetoPoint&) = default;
};

struct TracePoint {
  int window = 0;
  double valid_fraction = 0.0;

  friend bool operator==(const TracePoint&, const TracePoint&) = default;
};

struct MetricsBlock {
  std::size_t records = 0;
  double hit_rate = 0.0;
  double stability_rate = 0.0;
  double stability_among_valid = 0.0;
  double memorization_rate = 0.0;
  std::vector<ParetoPoint> pareto_front;
  std::map<std::string, double> element_coverage;
  std::vector<TracePoint> trace;

  friend bool operator==(const MetricsBlock&, const MetricsBlock&) = default;
};

namespace detail {

inline double percent(std::size_t n, std::size_t total) {
  return total == 0 ? 0.0 : 100.0 * static_cast<double>(n) / static_cast<double>(total);
}

inline bool is_stable(const CandidateRecord& r) {
  const auto hull = r.properties.value(Property::energy_above_hull);
  return r.score.success && hull && *hull <= kStableHull;
}

}  // namespace detail

inline double hit_rate(const std::vector<CandidateRecord>& records) {
  const auto n = std::count_if(records.begin(), records.end(),
                               [](const CandidateRecord& r) { return r.score.success; });
  return detail::percent(static_cast<std::size_t>(n), records.size());
}

inline double stability_rate(const std::vector<CandidateRecord>& records) {
  const auto n = std::count_if(records.begin(), records.end(), detail::is_stable);
  return detail::percent(static_cast<std::size_t>(n), records.size());
}

// Share of successful records that are also stable.
inline double stability_among_valid(const std::vector<CandidateRecord>& records) {
  const auto valid = std::count_if(records.begin(), records.end(),
                                   [](const CandidateRecord& r) { return r.score.success; });
  const auto n = std::count_if(records.begin(), records.end(), detail::is_stable);
  return detail::percent(static_cast<std::size_t>(n), static_cast<std::size_t>(valid));
}

// Flags the non-dominated points. Both axes are turned into minimization,
// points are swept in x order, and a group of equal x survives only at its
// lowest y and only if that y beats everything with smaller x.
inline std::vector<bool> pareto_mask(const std::vector<ParetoPoint>& points, Direction dx, Direction dy) {
  const double sx = dx == Direction::minimize ? 1.0 : -1.0;
  const double sy = dy == Direction::minimize ? 1.0 : -1.0;
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  auto x = [&](std::size_t i) { return sx * points[i].x; };
  auto y = [&](std::size_t i) { return sy * points[i].y; };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return x(a) != x(b) ? x(a) < x(b) : y(a) < y(b);
  });
  std::vector<bool> mask(points.size(), false);
  double best = INFINITY;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && x(order[j]) == x(order[i])) ++j;
    const double low = y(order[i]);
    if (low < best) {
      for (std::size_t k = i; k < j && y(order[k]) == low; ++k) mask[order[k]] = true;
      best = low;
    }
    i = j;
  }
  return mask;
}

inline std::vector<ParetoPoint> pareto_front(const std::vector<ParetoPoint>& points, Direction dx,
                                             Direction dy) {
  const auto mask = pareto_mask(points, dx, dy);
  std::vector<ParetoPoint> out;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (mask[i]) out.push_back(points[i]);
  return out;
}

// Successful records with both axes resolved, in stream order.
inline std::vector<ParetoPoint> pareto_candidates(const std::vector<CandidateRecord>& records,
                                                  const Task& task) {
  std::vector<ParetoPoint> out;
  for (const auto& r : records) {
    if (!r.score.success) continue;
    const auto x = r.properties.value(task.pareto_x.property);
    const auto y = r.properties.value(task.pareto_y.property);
    if (x && y) out.push_back({r.formula, *x, *y});
  }
  return out;
}

inline double memorization_rate(const std::vector<CandidateRecord>& records,
                                const oracle::ReferenceDB* db) {
  if (!db || db->empty()) return 0.0;
  const auto n = std::count_if(records.begin(), records.end(), [&](const CandidateRecord& r) {
    return !r.key().empty() && db->contains(r.key());
  });
  return detail::percent(static_cast<std::size_t>(n), records.size());
}

inline std::map<std::string, double> element_coverage(const std::vector<CandidateRecord>& records) {
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records)
    if (const auto comp = r.composition())
      for (const auto& [element, n] : *comp) ++counts[element];
  std::size_t top = 0;
  for (const auto& [e, n] : counts) top = std::max(top, n);
  std::map<std::string, double> out;
  for (const auto& [e, n] : counts) out[e] = static_cast<double>(n) / static_cast<double>(top);
  return out;
}

// Windows cover iterations [1 + w*window, (w+1)*window]; iteration 0 joins the first.
inline std::vector<TracePoint> convergence_trace(const std::vector<CandidateRecord>& records, int window) {
  if (window < 1) throw Error(Errc::InvalidConfig, "trace window must be at least 1");
  std::map<int, std::pair<std::size_t, std::size_t>> buckets;
  int last = -1;
  for (const auto& r : records) {
    const int w = std::max(r.iteration - 1, 0) / window;
    auto& [hits, total] = buckets[w];
    hits += r.score.success ? 1 : 0;
    ++total;
    last = std::max(last, w);
  }
  std::vector<TracePoint> out;
  for (int w = 0; w <= last; ++w) {
    const auto it = buckets.find(w);
    const double f = it == buckets.end() ? 0.0
                                         : static_cast<double>(it->second.first) /
                                               static_cast<double>(it->second.second);
    out.push_back({w, f});
  }
  return out;
}

inline MetricsBlock compute_metrics(const std::vector<CandidateRecord>& records, const Task& task,
                                    const oracle::ReferenceDB* db, int window) {
  MetricsBlock m;
  m.records = records.size();
  m.hit_rate = hit_rate(records);
  m.stability_rate = stability_rate(records);
  m.stability_among_valid = stability_among_valid(records);
  m.memorization_rate = memorization_rate(records, db);
  m.pareto_front = pareto_front(pareto_candidates(records, task), task.pareto_x.direction,
                                task.pareto_y.direction);
  m.element_coverage = element_coverage(records);
  m.trace = convergence_trace(records, window);
  return m;
}

// Keys come out sorted (nlohmann::json objects are std::map backed) and
// doubles use the shortest round-trip form, so equal blocks give equal bytes.
inline nlohmann::json to_json(const MetricsBlock& m) {
  nlohmann::json front = nlohmann::json::array();
  for (const auto& p : m.pareto_front) front.push_back({{"formula", p.formula}, {"x", p.x}, {"y", p.y}});
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& t : m.trace) trace.push_back({{"window", t.window}, {"valid_fraction", t.valid_fraction}});
  nlohmann::json coverage = nlohmann::json::object();
  for (const auto& [e, v] : m.element_coverage) coverage[e] = v;
  return {{"records", m.records},
          {"hit_rate", m.hit_rate},
          {"stability_rate", m.stability_rate},
          {"stability_among_valid", m.stability_among_valid},
          {"memorization_rate", m.memorization_rate},
          {"pareto_front", std::move(front)},
          {"element_coverage", std::move(coverage)},
          {"trace", std::move(trace)}};
}

inline std::string canonical_summary(const MetricsBlock& m) { return to_json(m).dump(2) + "\n"; }

}  // namespace llema::metrics
