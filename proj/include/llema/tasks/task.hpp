#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "llema/error.hpp"
#include "llema/tasks/constraint.hpp"
#include "llema/tasks/property.hpp"

namespace llema {

enum class Direction { maximize, minimize };

constexpr std::string_view to_string(Direction d) noexcept {
  return d == Direction::maximize ? "maximize" : "minimize";
}

inline Direction direction_from(std::string_view s) {
  if (s == "maximize") return Direction::maximize;
  if (s == "minimize") return Direction::minimize;
  throw Error(Errc::InvalidConstraint, "unknown direction '" + std::string(s) + "'");
}

struct ParetoAxis {
  Property property = Property::band_gap;
  Direction direction = Direction::maximize;

  friend bool operator==(const ParetoAxis&, const ParetoAxis&) = default;
};

struct Task {
  std::string name;
  std::string description;
  std::vector<Constraint> constraints;
  ParetoAxis pareto_x;
  ParetoAxis pareto_y;

  // Numeric properties the oracle must resolve for this task.
  std::set<Property> required_properties() const {
    std::set<Property> out;
    for (const auto& c : constraints)
      if (c.is_numeric()) out.insert(c.property);
    out.insert(pareto_x.property);
    out.insert(pareto_y.property);
    return out;
  }

  friend bool operator==(const Task&, const Task&) = default;
};

// Validates constraints and rescales weights so they sum to 1. A weight sum
// that is already exactly 1 is left untouched, which keeps normalization
// idempotent under serialization.
inline Task finalize_task(Task task) {
  if (task.name.empty()) throw Error(Errc::InvalidConstraint, "task has no name");
  bool numeric = false;
  double total = 0.0;
  for (const auto& c : task.constraints) {
    c.validate();
    numeric = numeric || c.is_numeric();
    total += c.weight;
  }
  if (!numeric) throw Error(Errc::InvalidConstraint, "task needs at least one numeric constraint");
  if (!(total > 0.0)) throw Error(Errc::InvalidConstraint, "constraint weights sum to zero");
  if (total != 1.0)
    for (auto& c : task.constraints) c.weight /= total;
  return task;
}

namespace task_detail {

inline Task make(std::string name, std::string description, std::vector<Constraint> constraints,
                 ParetoAxis x, ParetoAxis y) {
  return finalize_task(
      Task{std::move(name), std::move(description), std::move(constraints), x, y});
}

inline const std::vector<std::string>& toxic_elements() {
  static const std::vector<std::string> list{"Pb", "Cd", "Hg", "Tl", "Be",
                                             "As", "Sb", "Se", "U",  "Th"};
  return list;
}

inline std::map<std::string, Task, std::less<>> build_builtins() {
  using P = Property;
  using C = Constraint;
  constexpr auto max = Direction::maximize;
  constexpr auto min = Direction::minimize;
  std::map<std::string, Task, std::less<>> out;
  auto add = [&](Task t) { out.emplace(t.name, std::move(t)); };

  add(make("wide_bandgap",
           "Discover wide-bandgap semiconductors for high-power, high-frequency electronics and "
           "UV optoelectronics.",
           {C::at_least(P::band_gap, 2.5), C::at_most(P::formation_energy, -1.0),
            C::at_most(P::energy_above_hull, 0.1)},
           {P::band_gap, max}, {P::formation_energy, min}));
  add(make("saw_baw",
           "Discover SAW/BAW acoustic substrates for wireless filters and resonators.",
           {C::between(P::shear_modulus, 25.0, 150.0),
            C::between(P::dielectric_constant, 3.7, 95.0)},
           {P::shear_modulus, max}, {P::dielectric_constant, min}));
  add(make("high_k_dielectrics",
           "Discover high-permittivity dielectrics for capacitors and gate oxides.",
           {C::between(P::dielectric_constant, 10.0, 90.0), C::between(P::band_gap, 2.5, 6.5)},
           {P::dielectric_constant, max}, {P::band_gap, max}));
  add(make("solid_state_electrolytes",
           "Discover solid-state electrolytes that are stable, electronically insulating and "
           "carry a mobile ion.",
           {C::at_most(P::formation_energy, -1.0), C::at_least(P::band_gap, 2.0),
            C::at_most(P::energy_above_hull, 0.1),
            C::contains_any({"Li", "Na", "K", "Mg", "Ca", "Al"})},
           {P::band_gap, max}, {P::formation_energy, min}));
  add(make("piezo_energy_harvesters",
           "Discover piezoelectric energy harvesters with strong electromechanical coupling.",
           {C::at_least(P::piezoelectric_coefficient, 8.0),
            C::between(P::dielectric_constant, 10.0, 8000.0)},
           {P::piezoelectric_coefficient, max}, {P::dielectric_constant, min}));
  add(make("transparent_conductors",
           "Discover transparent conductors that combine optical transparency with electronic "
           "conductivity.",
           {C::at_least(P::band_gap, 3.0), C::between(P::electrical_conductivity, 50.0, 5000.0)},
           {P::band_gap, max}, {P::electrical_conductivity, max}));
  add(make("insulating_dielectrics",
           "Discover electrically insulating dielectrics for high-voltage applications.",
           {C::at_least(P::band_gap, 2.5), C::at_least(P::dielectric_constant, 8.0)},
           {P::band_gap, max}, {P::dielectric_constant, max}));
  add(make("photovoltaic_absorbers",
           "Discover stable, earth-abundant photovoltaic absorbers.",
           {C::between(P::band_gap, 0.7, 2.0), C::at_most(P::formation_energy, 0.0),
            C::earth_abundant_only()},
           {P::formation_energy, min}, {P::band_gap, max}));
  add(make("hard_coatings",
           "Discover hard coating materials that resist wear and deformation.",
           {C::between(P::bulk_modulus, 200.0, 500.0), C::between(P::shear_modulus, 100.0, 300.0)},
           {P::bulk_modulus, max}, {P::shear_modulus, max}));
  add(make("hard_stiff_ceramics",
           "Discover hard, stiff ceramics for extreme environments.",
           {C::between(P::bulk_modulus, 100.0, 300.0), C::between(P::shear_modulus, 60.0, 200.0)},
           {P::bulk_modulus, max}, {P::shear_modulus, max}));
  add(make("aerospace_structural",
           "Discover structural materials for aerospace that balance stiffness and stability.",
           {C::between(P::bulk_modulus, 100.0, 300.0), C::between(P::shear_modulus, 60.0, 200.0),
            C::at_most(P::formation_energy, 0.0)},
           {P::shear_modulus, max}, {P::formation_energy, min}));
  add(make("acousto_optic_hybrids",
           "Discover acousto-optic hybrids balancing piezoelectric and dielectric response.",
           {C::between(P::piezoelectric_coefficient, 2.0, 9.0),
            C::between(P::dielectric_constant, 8.0, 95.0)},
           {P::piezoelectric_coefficient, max}, {P::dielectric_constant, min}));
  add(make("low_density_structures",
           "Discover low-density structural materials with a high stiffness-to-weight ratio.",
           {C::at_most(P::density, 3.5), C::between(P::shear_modulus, 65.0, 195.0)},
           {P::density, min}, {P::shear_modulus, max}));
  add(make("toxic_free_perovskite",
           "Discover toxic-free perovskite oxides; stable ABO3 oxide structures are preferred.",
           {C::at_least(P::band_gap, 2.0), C::between(P::bulk_modulus, 90.0, 135.0),
            C::excludes(toxic_elements())},
           {P::band_gap, max}, {P::bulk_modulus, max}));

  // Variants following the longer per-task descriptions where they differ.
  add(make("transparent_conductors_strict",
           "Discover transparent conductors that are also thermodynamically stable.",
           {C::at_least(P::band_gap, 3.0), C::between(P::electrical_conductivity, 50.0, 5000.0),
            C::at_most(P::energy_above_hull, 0.1)},
           {P::band_gap, max}, {P::electrical_conductivity, max}));
  add(make("photovoltaic_absorbers_strict",
           "Discover photovoltaic absorbers with an optimal gap, free of rare or hazardous "
           "elements.",
           {C::between(P::band_gap, 1.1, 1.6), C::at_most(P::formation_energy, -0.5),
            C::earth_abundant_only(), C::excludes(toxic_elements())},
           {P::formation_energy, min}, {P::band_gap, max}));
  add(make("hard_coatings_strict",
           "Discover hard, insulating and stable coating materials.",
           {C::at_least(P::bulk_modulus, 200.0), C::at_least(P::band_gap, 3.0),
            C::at_most(P::formation_energy, -1.0)},
           {P::bulk_modulus, max}, {P::band_gap, max}));
  add(make("aerospace_structural_strict",
           "Discover light, stiff and manufacturable aerospace structural materials.",
           {C::at_least(P::bulk_modulus, 100.0), C::at_least(P::shear_modulus, 40.0),
            C::at_most(P::density, 5.0), C::at_most(P::energy_above_hull, 5.0)},
           {P::shear_modulus, max}, {P::density, min}));
  return out;
}

}  // namespace task_detail

inline const std::map<std::string, Task, std::less<>>& builtin_tasks() {
  static const auto tasks = task_detail::build_builtins();
  return tasks;
}

// The fourteen benchmark tasks, without the "_strict" variants.
inline std::vector<std::string> benchmark_task_names() {
  return {"wide_bandgap",          "saw_baw",
          "high_k_dielectrics",    "solid_state_electrolytes",
          "piezo_energy_harvesters", "transparent_conductors",
          "insulating_dielectrics", "photovoltaic_absorbers",
          "hard_coatings",         "hard_stiff_ceramics",
          "aerospace_structural",  "acousto_optic_hybrids",
          "low_density_structures", "toxic_free_perovskite"};
}

inline const Task& builtin_task(std::string_view name) {
  const auto& tasks = builtin_tasks();
  const auto it = tasks.find(name);
  if (it == tasks.end()) throw Error(Errc::UnknownTask, std::string(name));
  return it->second;
}

// Element filters only (containment, exclusion, abundance).
inline bool composition_passes_filters(const crystal::Composition& composition, const Task& task) {
  for (const auto& c : task.constraints)
    if (!c.is_numeric() && !c.satisfied_by(composition)) return false;
  return true;
}

}  // namespace llema
