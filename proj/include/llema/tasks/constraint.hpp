#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "llema/chem/element_table.hpp"
#include "llema/crystal/formula.hpp"
#include "llema/detail/text.hpp"
#include "llema/error.hpp"
#include "llema/tasks/property.hpp"

namespace llema {

enum class ConstraintKind { min, max, range, contains_any, excludes, earth_abundant };

constexpr std::string_view to_string(ConstraintKind k) noexcept {
  switch (k) {
    case ConstraintKind::min: return "min";
    case ConstraintKind::max: return "max";
    case ConstraintKind::range: return "range";
    case ConstraintKind::contains_any: return "contains_any";
    case ConstraintKind::excludes: return "excludes";
    case ConstraintKind::earth_abundant: return "earth_abundant";
  }
  return "";
}

inline ConstraintKind constraint_kind_from(std::string_view s) {
  for (auto k : {ConstraintKind::min, ConstraintKind::max, ConstraintKind::range,
                 ConstraintKind::contains_any, ConstraintKind::excludes,
                 ConstraintKind::earth_abundant})
    if (to_string(k) == s) return k;
  throw Error(Errc::InvalidConstraint, "unknown constraint kind '" + std::string(s) + "'");
}

// One design constraint c_i with its weight w_i. Numeric kinds bound a
// property (min: value >= lower, max: value <= upper, range: lower <= value <=
// upper); element kinds test the composition.
struct Constraint {
  ConstraintKind kind = ConstraintKind::min;
  Property property = Property::band_gap;
  double lower = std::numeric_limits<double>::quiet_NaN();
  double upper = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::string> elements;
  double weight = 1.0;

  static Constraint at_least(Property p, double threshold) {
    Constraint c;
    c.kind = ConstraintKind::min;
    c.property = p;
    c.lower = threshold;
    return c;
  }
  static Constraint at_most(Property p, double threshold) {
    Constraint c;
    c.kind = ConstraintKind::max;
    c.property = p;
    c.upper = threshold;
    return c;
  }
  static Constraint between(Property p, double lo, double hi) {
    Constraint c;
    c.kind = ConstraintKind::range;
    c.property = p;
    c.lower = lo;
    c.upper = hi;
    return c;
  }
  static Constraint contains_any(std::vector<std::string> symbols) {
    Constraint c;
    c.kind = ConstraintKind::contains_any;
    c.elements = std::move(symbols);
    return c;
  }
  static Constraint excludes(std::vector<std::string> symbols) {
    Constraint c;
    c.kind = ConstraintKind::excludes;
    c.elements = std::move(symbols);
    return c;
  }
  static Constraint earth_abundant_only() {
    Constraint c;
    c.kind = ConstraintKind::earth_abundant;
    return c;
  }

  bool is_numeric() const noexcept {
    return kind == ConstraintKind::min || kind == ConstraintKind::max ||
           kind == ConstraintKind::range;
  }

  void validate() const {
    if (!(weight >= 0.0) || !std::isfinite(weight))
      throw Error(Errc::InvalidConstraint, "weight must be a finite non-negative number");
    switch (kind) {
      case ConstraintKind::min:
        if (!std::isfinite(lower)) throw Error(Errc::InvalidConstraint, "min needs a threshold");
        break;
      case ConstraintKind::max:
        if (!std::isfinite(upper)) throw Error(Errc::InvalidConstraint, "max needs a threshold");
        break;
      case ConstraintKind::range:
        if (!std::isfinite(lower) || !std::isfinite(upper))
          throw Error(Errc::InvalidConstraint, "range needs two bounds");
        if (!(lower < upper)) throw Error(Errc::InvalidConstraint, "range needs lower < upper");
        break;
      case ConstraintKind::contains_any:
      case ConstraintKind::excludes:
        if (elements.empty()) throw Error(Errc::InvalidConstraint, "element list is empty");
        for (const auto& e : elements)
          if (!chem::ElementTable::builtin().contains(e))
            throw Error(Errc::InvalidConstraint, "unknown element '" + e + "'");
        break;
      case ConstraintKind::earth_abundant:
        break;
    }
  }

  bool satisfied_by(double v) const {
    switch (kind) {
      case ConstraintKind::min: return v >= lower;
      case ConstraintKind::max: return v <= upper;
      case ConstraintKind::range: return v >= lower && v <= upper;
      default: return false;
    }
  }

  bool satisfied_by(const crystal::Composition& composition,
                    const chem::ElementTable& table = chem::ElementTable::builtin()) const {
    auto has = [&](const std::string& e) { return composition.count(e) != 0; };
    switch (kind) {
      case ConstraintKind::contains_any:
        return std::any_of(elements.begin(), elements.end(), has);
      case ConstraintKind::excludes:
        return std::none_of(elements.begin(), elements.end(), has);
      case ConstraintKind::earth_abundant:
        for (const auto& [symbol, count] : composition) {
          const auto* info = table.find(symbol);
          if (!info || !info->earth_abundant) return false;
        }
        return true;
      default:
        return false;
    }
  }

  // Human-readable form used in prompts, e.g. "Band gap >= 2.5 eV".
  std::string describe() const {
    auto with_unit = [&](double v) {
      std::string s = detail::shortest(v);
      const auto unit = unit_of(property);
      if (!unit.empty()) s += " " + std::string(unit);
      return s;
    };
    auto join = [&] {
      std::string s;
      for (const auto& e : elements) s += (s.empty() ? "" : ", ") + e;
      return s;
    };
    const std::string name(display_name(property));
    switch (kind) {
      case ConstraintKind::min: return name + " >= " + with_unit(lower);
      case ConstraintKind::max: return name + " <= " + with_unit(upper);
      case ConstraintKind::range:
        return name + " between " + detail::shortest(lower) + " and " + with_unit(upper);
      case ConstraintKind::contains_any: return "Must contain at least one of " + join();
      case ConstraintKind::excludes: return "Must not contain " + join();
      case ConstraintKind::earth_abundant: return "Composed of earth-abundant elements only";
    }
    return "";
  }

  friend bool operator==(const Constraint& a, const Constraint& b) {
    auto same = [](double x, double y) { return (std::isnan(x) && std::isnan(y)) || x == y; };
    if (a.kind != b.kind || a.weight != b.weight) return false;
    if (a.is_numeric())
      return a.property == b.property && same(a.lower, b.lower) && same(a.upper, b.upper);
    return a.elements == b.elements;
  }
};

// Normalized reward in [-1, 1]. Satisfied -> 1. Violated -> -min(1, dist/D),
// dist being the distance to the nearest feasible value and D the range width
// (range kinds) or max(|threshold|, 1e-6). Missing or non-finite -> -1.
inline double phi(std::optional<double> value, const Constraint& c) {
  if (!c.is_numeric()) return -1.0;
  if (!value || std::isnan(*value)) return -1.0;
  const double v = *value;
  if (c.satisfied_by(v)) return 1.0;
  double dist = 0.0;
  double scale = 1.0;
  switch (c.kind) {
    case ConstraintKind::min:
      dist = c.lower - v;
      scale = std::max(std::fabs(c.lower), 1e-6);
      break;
    case ConstraintKind::max:
      dist = v - c.upper;
      scale = std::max(std::fabs(c.upper), 1e-6);
      break;
    case ConstraintKind::range:
      dist = v < c.lower ? c.lower - v : v - c.upper;
      scale = c.upper - c.lower;
      break;
    default:
      break;
  }
  // A violation always scores strictly below zero, even when dist/D underflows.
  return -std::clamp(dist / scale, std::numeric_limits<double>::min(), 1.0);
}

inline double phi(const crystal::Composition& composition, const Constraint& c,
                  const chem::ElementTable& table = chem::ElementTable::builtin()) {
  if (c.is_numeric()) return -1.0;
  return c.satisfied_by(composition, table) ? 1.0 : -1.0;
}

}  // namespace llema
