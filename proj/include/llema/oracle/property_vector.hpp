#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "llema/error.hpp"
#include "llema/tasks/property.hpp"

namespace llema {

enum class ValueSource { reference, derived, surrogate, missing };

constexpr std::string_view to_string(ValueSource s) noexcept {
  switch (s) {
    case ValueSource::reference: return "reference";
    case ValueSource::derived: return "derived";
    case ValueSource::surrogate: return "surrogate";
    case ValueSource::missing: return "missing";
  }
  return "missing";
}

inline ValueSource value_source_from(std::string_view s) {
  if (s == "reference") return ValueSource::reference;
  if (s == "derived") return ValueSource::derived;
  if (s == "surrogate") return ValueSource::surrogate;
  if (s == "missing") return ValueSource::missing;
  throw Error(Errc::CorruptStream, "unknown value source '" + std::string(s) + "'");
}

struct PropertyValue {
  double value = std::numeric_limits<double>::quiet_NaN();
  ValueSource source = ValueSource::missing;

  bool present() const noexcept { return source != ValueSource::missing && std::isfinite(value); }
};

// f(m): property -> value with provenance. Units are fixed per property (see unit_of).
class PropertyVector {
 public:
  void set(Property p, double value, ValueSource source) { values_[p] = {value, source}; }
  void set_missing(Property p) { values_[p] = {}; }

  bool has(Property p) const { return values_.count(p) != 0; }

  std::optional<double> value(Property p) const {
    const auto it = values_.find(p);
    if (it == values_.end() || !it->second.present()) return std::nullopt;
    return it->second.value;
  }

  ValueSource source(Property p) const {
    const auto it = values_.find(p);
    return it == values_.end() ? ValueSource::missing : it->second.source;
  }

  const std::map<Property, PropertyValue>& entries() const noexcept { return values_; }

  friend bool operator==(const PropertyVector& a, const PropertyVector& b) {
    if (a.values_.size() != b.values_.size()) return false;
    for (const auto& [p, v] : a.values_) {
      const auto it = b.values_.find(p);
      if (it == b.values_.end() || it->second.source != v.source) return false;
      if (v.present() != it->second.present()) return false;
      if (v.present() && v.value != it->second.value) return false;
    }
    return true;
  }

 private:
  std::map<Property, PropertyValue> values_;
};

}  // namespace llema
