#pragma once

#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "llema/chem/element_table.hpp"
#include "llema/crystal/structure.hpp"
#include "llema/detail/log.hpp"
#include "llema/oracle/conductivity.hpp"
#include "llema/oracle/property_vector.hpp"
#include "llema/oracle/reference_db.hpp"
#include "llema/oracle/remote_reference.hpp"
#include "llema/oracle/surrogate.hpp"

namespace llema::oracle {

using SurrogateList = std::vector<std::shared_ptr<const Surrogate>>;

namespace predict_detail {

inline void ask_surrogates(const crystal::Structure& s, std::set<Property> pending,
                           const SurrogateList& surrogates, PropertyVector& out) {
  for (const auto& surrogate : surrogates) {
    std::set<Property> mine;
    for (const auto p : pending)
      if (surrogate->can_predict(p)) mine.insert(p);
    if (mine.empty()) continue;
    try {
      for (const auto& [p, v] : surrogate->predict_many(s, mine)) {
        if (!mine.count(p)) continue;
        out.set(p, v, ValueSource::surrogate);
        pending.erase(p);
      }
    } catch (const Error& e) {
      // A dead surrogate leaves its properties to the next capable one.
      log::warn("surrogate_failed", {{"surrogate", surrogate->name()},
                                     {"formula", s.reduced_formula()},
                                     {"detail", e.what()}});
    }
  }
}

}  // namespace predict_detail

// Per property, first hit wins: exact DB entry (local, then remote),
// similarity DB entry, structure-derived value, first capable surrogate,
// missing. Density is always derived and always present.
inline PropertyVector predict(const crystal::Structure& s, const std::set<Property>& needed,
                              const ReferenceDB* db, const SurrogateList& surrogates,
                              const RemoteReference* remote = nullptr,
                              const chem::ElementTable& table = chem::ElementTable::builtin()) {
  std::set<Property> wanted = needed;
  const bool want_sigma = wanted.count(Property::electrical_conductivity) != 0;
  if (want_sigma) {
    wanted.insert(Property::seebeck);
    wanted.insert(Property::power_factor);
  }
  wanted.erase(Property::density);

  PropertyVector out;
  std::optional<PropertyVector> exact, similar;
  if (db) {
    exact = db->lookup_exact(s.reduced_formula());
    if (const auto hit = db->lookup_similar(s)) similar = hit->values;
  }
  std::optional<PropertyVector> fetched;
  bool fetched_once = false;

  std::set<Property> pending;
  for (const auto p : wanted) {
    if (exact && exact->value(p)) {
      out.set(p, *exact->value(p), ValueSource::reference);
      continue;
    }
    if (remote && p != Property::electrical_conductivity) {
      if (!fetched_once) {
        fetched = remote->fetch(s.reduced_formula());
        fetched_once = true;
      }
      if (fetched && fetched->value(p)) {
        out.set(p, *fetched->value(p), ValueSource::reference);
        continue;
      }
    }
    if (similar && similar->value(p)) {
      out.set(p, *similar->value(p), ValueSource::reference);
      continue;
    }
    pending.insert(p);
  }

  out.set(Property::density, crystal::density(s, table), ValueSource::derived);

  pending.erase(Property::electrical_conductivity);
  predict_detail::ask_surrogates(s, pending, surrogates, out);

  if (want_sigma && !out.value(Property::electrical_conductivity)) {
    const auto S = out.value(Property::seebeck);
    const auto pf = out.value(Property::power_factor);
    bool derived = false;
    if (S && pf) {
      try {
        out.set(Property::electrical_conductivity, conductivity_from(*S, *pf),
                ValueSource::derived);
        derived = true;
      } catch (const Error&) {
        log::warn("zero_seebeck", {{"formula", s.reduced_formula()}});
      }
    }
    if (!derived)
      predict_detail::ask_surrogates(s, {Property::electrical_conductivity}, surrogates, out);
  }

  for (const auto p : wanted)
    if (!out.value(p)) out.set_missing(p);
  return out;
}

// The pieces a campaign needs to evaluate candidates.
struct Oracle {
  const ReferenceDB* db = nullptr;
  SurrogateList surrogates;
  std::shared_ptr<const RemoteReference> remote;

  PropertyVector operator()(const crystal::Structure& s, const std::set<Property>& needed) const {
    return predict(s, needed, db, surrogates, remote.get());
  }
};

}  // namespace llema::oracle
