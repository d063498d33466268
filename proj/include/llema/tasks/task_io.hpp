#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <toml.hpp>

#include "llema/error.hpp"
#include "llema/tasks/task.hpp"

namespace llema {

// Task files are TOML:
//
//   [task]
//   name = "wide_bandgap"
//   description = "..."
//
//   [[constraint]]
//   property = "band_gap"
//   kind = "min"            # min | max | range | contains_any | excludes | earth_abundant
//   bounds = [2.5]          # [threshold] for min/max, [lower, upper] for range
//   weight = 1.0            # optional; weights are normalized to sum to 1
//
//   [[constraint]]
//   kind = "contains_any"
//   elements = ["Li", "Na"]
//
//   [pareto]
//   x = { property = "band_gap", direction = "maximize" }
//   y = { property = "formation_energy", direction = "minimize" }

inline std::string serialize_task(const Task& task) {
  toml::table root;
  root.insert("task", toml::table{{"name", task.name}, {"description", task.description}});
  toml::array constraints;
  for (const auto& c : task.constraints) {
    toml::table t;
    t.insert("kind", std::string(to_string(c.kind)));
    if (c.is_numeric()) {
      t.insert("property", std::string(to_string(c.property)));
      toml::array bounds;
      if (c.kind == ConstraintKind::min) bounds.push_back(c.lower);
      if (c.kind == ConstraintKind::max) bounds.push_back(c.upper);
      if (c.kind == ConstraintKind::range) {
        bounds.push_back(c.lower);
        bounds.push_back(c.upper);
      }
      t.insert("bounds", std::move(bounds));
    } else if (c.kind != ConstraintKind::earth_abundant) {
      toml::array elements;
      for (const auto& e : c.elements) elements.push_back(e);
      t.insert("elements", std::move(elements));
    }
    t.insert("weight", c.weight);
    constraints.push_back(std::move(t));
  }
  root.insert("constraint", std::move(constraints));
  auto axis = [](const ParetoAxis& a) {
    return toml::table{{"property", std::string(to_string(a.property))},
                       {"direction", std::string(to_string(a.direction))}};
  };
  root.insert("pareto", toml::table{{"x", axis(task.pareto_x)}, {"y", axis(task.pareto_y)}});
  std::ostringstream out;
  out << root << "\n";
  return out.str();
}

namespace task_io_detail {

inline double as_number(const toml::node& node, const std::string& what) {
  if (const auto v = node.value<double>()) return *v;
  throw Error(Errc::InvalidConstraint, what + " must be a number");
}

inline ParetoAxis read_axis(const toml::node_view<const toml::node>& node, const char* name) {
  if (!node.is_table()) throw Error(Errc::InvalidConstraint, std::string("pareto.") + name + " missing");
  ParetoAxis axis;
  const auto prop = node["property"].value<std::string>();
  const auto dir = node["direction"].value<std::string>();
  if (!prop || !dir)
    throw Error(Errc::InvalidConstraint, std::string("pareto.") + name + " needs property and direction");
  axis.property = property_from(*prop);
  axis.direction = direction_from(*dir);
  return axis;
}

}  // namespace task_io_detail

inline Task parse_task(std::string_view text) {
  using namespace task_io_detail;
  toml::table root;
  try {
    root = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw Error(Errc::InvalidConfig, std::string("task file: ") + std::string(e.description()));
  }
  Task task;
  const toml::node_view<const toml::node> view{root};
  const auto name = view["task"]["name"].value<std::string>();
  if (!name) throw Error(Errc::InvalidConstraint, "task.name missing");
  task.name = *name;
  task.description = view["task"]["description"].value_or(std::string());

  const auto* constraints = root["constraint"].as_array();
  if (!constraints || constraints->empty())
    throw Error(Errc::InvalidConstraint, "no [[constraint]] blocks");
  for (const auto& node : *constraints) {
    const auto* t = node.as_table();
    if (!t) throw Error(Errc::InvalidConstraint, "constraint must be a table");
    const toml::node_view<const toml::node> c{*t};
    const auto kind_name = c["kind"].value<std::string>();
    if (!kind_name) throw Error(Errc::InvalidConstraint, "constraint.kind missing");
    Constraint con;
    con.kind = constraint_kind_from(*kind_name);
    if (const auto* w = t->get("weight")) con.weight = as_number(*w, "weight");
    if (con.is_numeric()) {
      const auto prop = c["property"].value<std::string>();
      if (!prop) throw Error(Errc::InvalidConstraint, "numeric constraint needs a property");
      con.property = property_from(*prop);
      const auto* bounds = c["bounds"].as_array();
      const std::size_t expected = con.kind == ConstraintKind::range ? 2 : 1;
      if (!bounds || bounds->size() != expected)
        throw Error(Errc::InvalidConstraint,
                    std::string(to_string(con.kind)) + " needs " + std::to_string(expected) +
                        " bound(s)");
      if (con.kind == ConstraintKind::min) con.lower = as_number(*bounds->get(0), "bound");
      if (con.kind == ConstraintKind::max) con.upper = as_number(*bounds->get(0), "bound");
      if (con.kind == ConstraintKind::range) {
        con.lower = as_number(*bounds->get(0), "bound");
        con.upper = as_number(*bounds->get(1), "bound");
      }
    } else if (con.kind != ConstraintKind::earth_abundant) {
      const auto* elements = c["elements"].as_array();
      if (!elements) throw Error(Errc::InvalidConstraint, "element constraint needs elements");
      for (const auto& e : *elements) {
        const auto symbol = e.value<std::string>();
        if (!symbol) throw Error(Errc::InvalidConstraint, "element entries must be strings");
        con.elements.push_back(*symbol);
      }
    }
    task.constraints.push_back(std::move(con));
  }
  task.pareto_x = read_axis(view["pareto"]["x"], "x");
  task.pareto_y = read_axis(view["pareto"]["y"], "y");
  return finalize_task(std::move(task));
}

// A builtin name or a path to a TOML task file.
inline Task load_task(const std::string& name_or_path) {
  if (builtin_tasks().count(name_or_path)) return builtin_task(name_or_path);
  if (std::filesystem::exists(name_or_path)) {
    std::ifstream in(name_or_path);
    if (!in) throw Error(Errc::IoError, "cannot read " + name_or_path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_task(buf.str());
  }
  throw Error(Errc::UnknownTask, name_or_path);
}

}  // namespace llema
