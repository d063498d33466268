#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "llema/tasks/score.hpp"
#include "llema/tasks/task_io.hpp"
#include "support/fuzz.hpp"

using namespace llema;

namespace {

Constraint random_constraint(Rng& rng) {
  const double a = fuzz::uniform(rng, -50, 50);
  const double b = a + fuzz::uniform(rng, 1e-3, 40);
  switch (uniform_index(rng, 3)) {
    case 0: return Constraint::at_least(Property::band_gap, a);
    case 1: return Constraint::at_most(Property::band_gap, a);
    default: return Constraint::between(Property::band_gap, a, b);
  }
}

double random_value_near(Rng& rng, const Constraint& c) {
  const double centre = std::isfinite(c.lower) ? c.lower : c.upper;
  if (bernoulli(rng, 0.05)) return centre;
  return centre + fuzz::uniform(rng, -120, 120);
}

}  // namespace

TEST(Phi, WorkedValues) {
  EXPECT_EQ(phi(3.0, Constraint::at_least(Property::band_gap, 2.5)), 1.0);
  EXPECT_EQ(phi(100.0, Constraint::between(Property::dielectric_constant, 10, 90)), -0.125);
  EXPECT_EQ(phi(0.0, Constraint::at_least(Property::band_gap, 2.5)), -1.0);
  EXPECT_EQ(phi(2.5, Constraint::at_least(Property::band_gap, 2.5)), 1.0);
  EXPECT_EQ(phi(-0.5, Constraint::at_most(Property::formation_energy, -1.0)), -0.5);
  EXPECT_EQ(phi(-1e9, Constraint::at_least(Property::band_gap, 2.5)), -1.0);
}

TEST(Phi, ZeroThresholdUsesFloorScale) {
  const auto c = Constraint::at_most(Property::formation_energy, 0.0);
  EXPECT_EQ(phi(0.0, c), 1.0);
  EXPECT_DOUBLE_EQ(phi(5e-7, c), -0.5);
  EXPECT_EQ(phi(1.0, c), -1.0);
}

TEST(Phi, MissingOrNanIsHardFailure) {
  const auto c = Constraint::at_least(Property::band_gap, 2.5);
  EXPECT_EQ(phi(std::nullopt, c), -1.0);
  EXPECT_EQ(phi(std::numeric_limits<double>::quiet_NaN(), c), -1.0);
}

TEST(Phi, ElementKinds) {
  const auto comp = crystal::parse_formula("LiFePO4");
  EXPECT_EQ(phi(comp, Constraint::contains_any({"Li", "Na"})), 1.0);
  EXPECT_EQ(phi(comp, Constraint::contains_any({"K"})), -1.0);
  EXPECT_EQ(phi(comp, Constraint::excludes({"Pb", "Cd"})), 1.0);
  EXPECT_EQ(phi(crystal::parse_formula("PbTiO3"), Constraint::excludes({"Pb", "Cd"})), -1.0);
  EXPECT_EQ(phi(crystal::parse_formula("ZnO"), Constraint::earth_abundant_only()), 1.0);
  EXPECT_EQ(phi(crystal::parse_formula("InP"), Constraint::earth_abundant_only()), -1.0);
}

TEST(Phi, SignLawAndRange) {
  Rng rng(42);
  for (int i = 0; i < 10000; ++i) {
    const auto c = random_constraint(rng);
    const double v = random_value_near(rng, c);
    const double p = phi(v, c);
    EXPECT_GE(p, -1.0);
    EXPECT_LE(p, 1.0);
    EXPECT_EQ(p >= 0.0, c.satisfied_by(v)) << c.describe() << " v=" << v;
  }
}

TEST(Phi, Monotonicity) {
  Rng rng(43);
  for (int i = 0; i < 5000; ++i) {
    const auto c = random_constraint(rng);
    double v1 = random_value_near(rng, c), v2 = random_value_near(rng, c);
    if (v1 > v2) std::swap(v1, v2);
    const double p1 = phi(v1, c), p2 = phi(v2, c);
    switch (c.kind) {
      case ConstraintKind::min: EXPECT_LE(p1, p2); break;
      case ConstraintKind::max: EXPECT_GE(p1, p2); break;
      default:
        if (v2 <= c.lower) EXPECT_LE(p1, p2);
        if (v1 >= c.upper) EXPECT_GE(p1, p2);
        break;
    }
  }
}

TEST(Composite, WorkedValues) {
  Task t = finalize_task(Task{"pair",
                              "",
                              {Constraint::at_least(Property::band_gap, 2.0),
                               Constraint::at_most(Property::formation_energy, -1.0)},
                              {Property::band_gap, Direction::maximize},
                              {Property::formation_energy, Direction::minimize}});
  EXPECT_EQ(t.constraints[0].weight, 0.5);
  PropertyVector props;
  props.set(Property::band_gap, 3.0, ValueSource::reference);
  props.set(Property::formation_energy, -0.5, ValueSource::reference);
  const auto s = composite_score(props, t);
  EXPECT_EQ(s.per_constraint_phi, (std::vector<double>{1.0, -0.5}));
  EXPECT_EQ(s.composite, 0.25);
  EXPECT_FALSE(s.success);

  props.set(Property::formation_energy, -2.0, ValueSource::reference);
  EXPECT_EQ(composite_score(props, t).composite, 1.0);
  EXPECT_TRUE(composite_score(props, t).success);

  const auto missing = composite_score(PropertyVector{}, t);
  EXPECT_EQ(missing.composite, -1.0);
  EXPECT_FALSE(missing.success);
  EXPECT_EQ(failure_score(t), missing);
}

TEST(Composite, SuccessIffAllPhiNonNegative) {
  Rng rng(44);
  for (int i = 0; i < 2000; ++i) {
    const auto& names = benchmark_task_names();
    const auto& task = builtin_task(names[uniform_index(rng, names.size())]);
    PropertyVector props;
    for (const auto p : kAllProperties)
      if (bernoulli(rng, 0.95)) props.set(p, fuzz::uniform(rng, -5, 600), ValueSource::surrogate);
    const auto comp = crystal::parse_formula(bernoulli(rng, 0.5) ? "BaTiO3" : "PbZrO3");
    const auto s = composite_score(props, task, &comp);
    bool all = true;
    double sum = 0.0;
    for (std::size_t k = 0; k < task.constraints.size(); ++k) {
      all = all && s.per_constraint_phi[k] >= 0.0;
      sum += task.constraints[k].weight * s.per_constraint_phi[k];
    }
    EXPECT_EQ(s.success, all);
    EXPECT_EQ(s.composite, sum);
    EXPECT_GE(s.composite, -1.0 - 1e-12);
    EXPECT_LE(s.composite, 1.0 + 1e-12);
    EXPECT_EQ(s.composite == 1.0, s.success);
  }
}

TEST(Constraint, ValidationErrors) {
  EXPECT_THROW(Constraint::between(Property::band_gap, 3, 2).validate(), Error);
  EXPECT_THROW(Constraint::contains_any({}).validate(), Error);
  EXPECT_THROW(Constraint::excludes({"Qq"}).validate(), Error);
  EXPECT_THROW(finalize_task(Task{"x", "", {Constraint::contains_any({"Li"})}, {}, {}}), Error);
}

TEST(Constraint, DescribeIncludesUnits) {
  EXPECT_EQ(Constraint::at_least(Property::band_gap, 2.5).describe(), "Band gap >= 2.5 eV");
  EXPECT_EQ(Constraint::between(Property::shear_modulus, 25, 150).describe(),
            "Shear modulus between 25 and 150 GPa");
}

TEST(Builtins, ConstraintCounts) {
  const std::map<std::string, std::size_t> expected{
      {"wide_bandgap", 3},          {"saw_baw", 2},
      {"high_k_dielectrics", 2},    {"solid_state_electrolytes", 4},
      {"piezo_energy_harvesters", 2}, {"transparent_conductors", 2},
      {"insulating_dielectrics", 2}, {"photovoltaic_absorbers", 3},
      {"hard_coatings", 2},         {"hard_stiff_ceramics", 2},
      {"aerospace_structural", 3},  {"acousto_optic_hybrids", 2},
      {"low_density_structures", 2}, {"toxic_free_perovskite", 3}};
  ASSERT_EQ(benchmark_task_names().size(), 14u);
  for (const auto& name : benchmark_task_names()) {
    ASSERT_TRUE(expected.count(name)) << name;
    EXPECT_EQ(builtin_task(name).constraints.size(), expected.at(name)) << name;
  }
}

TEST(Builtins, WideBandgapRow) {
  const auto& t = load_task("wide_bandgap");
  ASSERT_EQ(t.constraints.size(), 3u);
  auto first = Constraint::at_least(Property::band_gap, 2.5);
  first.weight = 1.0 / 3;
  EXPECT_EQ(t.constraints[0], first);
  EXPECT_EQ(t.constraints[1].kind, ConstraintKind::max);
  EXPECT_EQ(t.constraints[1].upper, -1.0);
  EXPECT_EQ(t.constraints[2].property, Property::energy_above_hull);
  EXPECT_EQ(t.constraints[2].upper, 0.1);
}

TEST(Builtins, SawBawAndPerovskiteRows) {
  const auto& saw = builtin_task("saw_baw");
  EXPECT_EQ(saw.constraints[0].lower, 25.0);
  EXPECT_EQ(saw.constraints[0].upper, 150.0);
  EXPECT_EQ(saw.constraints[1].lower, 3.7);
  EXPECT_EQ(saw.constraints[1].upper, 95.0);
  const auto& tf = builtin_task("toxic_free_perovskite");
  EXPECT_EQ(tf.constraints[2].kind, ConstraintKind::excludes);
  EXPECT_EQ(tf.constraints[2].elements.size(), 10u);
}

TEST(Builtins, RoundTripThroughToml) {
  for (const auto& [name, task] : builtin_tasks()) {
    const auto text = serialize_task(task);
    const auto back = parse_task(text);
    EXPECT_EQ(back, task) << text;
    EXPECT_EQ(serialize_task(back), text);
  }
}

TEST(Builtins, WeightsSumToOne) {
  for (const auto& [name, task] : builtin_tasks()) {
    double sum = 0.0;
    for (const auto& c : task.constraints) sum += c.weight;
    EXPECT_NEAR(sum, 1.0, 1e-15) << name;
  }
}

TEST(TaskIo, UnknownNameAndBadFiles) {
  EXPECT_THROW(load_task("no_such_task"), Error);
  try {
    load_task("no_such_task");
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::UnknownTask);
  }
  try {
    parse_task("[task]\nname = \"x\"\n[[constraint]]\nkind = \"range\"\nproperty = \"band_gap\"\n"
               "bounds = [3.0, 1.0]\n[pareto]\nx = {property = \"band_gap\", direction = "
               "\"maximize\"}\ny = {property = \"density\", direction = \"minimize\"}\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidConstraint);
  }
  try {
    parse_task("[task\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::InvalidConfig);
  }
}

TEST(TaskIo, CustomWeightsAreNormalized) {
  const auto t = parse_task(R"([task]
name = "custom"

[[constraint]]
kind = "min"
property = "band_gap"
bounds = [1.0]
weight = 3.0

[[constraint]]
kind = "contains_any"
elements = ["Li"]
weight = 1.0

[pareto]
x = { property = "band_gap", direction = "maximize" }
y = { property = "density", direction = "minimize" }
)");
  EXPECT_EQ(t.constraints[0].weight, 0.75);
  EXPECT_EQ(t.constraints[1].weight, 0.25);
  EXPECT_EQ(t.pareto_y.direction, Direction::minimize);
}
