#pragma once

#include <optional>
#include <vector>

#include "llema/crystal/formula.hpp"
#include "llema/oracle/property_vector.hpp"
#include "llema/tasks/constraint.hpp"
#include "llema/tasks/task.hpp"

namespace llema {

struct ScoreBreakdown {
  std::vector<double> per_constraint_phi;  // aligned with Task::constraints
  double composite = -1.0;
  bool success = false;

  friend bool operator==(const ScoreBreakdown&, const ScoreBreakdown&) = default;
};

inline ScoreBreakdown make_breakdown(const Task& task, std::vector<double> phis) {
  ScoreBreakdown out;
  out.per_constraint_phi = std::move(phis);
  out.composite = 0.0;
  out.success = true;
  for (std::size_t i = 0; i < task.constraints.size(); ++i) {
    out.composite += task.constraints[i].weight * out.per_constraint_phi[i];
    out.success = out.success && out.per_constraint_phi[i] >= 0.0;
  }
  return out;
}

// S = sum_i w_i * phi_i. Element constraints need the composition; without it
// they score -1 like any other missing input.
inline ScoreBreakdown composite_score(const PropertyVector& props, const Task& task,
                                      const crystal::Composition* composition = nullptr) {
  std::vector<double> phis;
  phis.reserve(task.constraints.size());
  for (const auto& c : task.constraints) {
    if (c.is_numeric())
      phis.push_back(phi(props.value(c.property), c));
    else
      phis.push_back(composition ? phi(*composition, c) : -1.0);
  }
  return make_breakdown(task, std::move(phis));
}

// Score given to payloads that never became a structure.
inline ScoreBreakdown failure_score(const Task& task) {
  return make_breakdown(task, std::vector<double>(task.constraints.size(), -1.0));
}

}  // namespace llema
