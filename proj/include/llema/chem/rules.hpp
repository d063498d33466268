#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "llema/chem/element_table.hpp"
#include "llema/crystal/structure.hpp"
#include "llema/error.hpp"
#include "llema/random.hpp"

namespace llema::chem {

// The nineteen evolutionary generation rules. Values are the rule numbers.
enum class RuleId : int {
  same_group_substitution = 1,
  stoichiometry_preserving_substitution = 2,
  oxidation_state_substitution = 3,
  functional_group_substitution = 4,
  motif_replacement = 5,
  crystal_prototype_substitution = 6,
  layered_intercalation = 7,
  coordination_geometry_mutation = 8,
  redox_variant = 9,
  structural_isomer = 10,
  group_recombination = 11,
  surface_functionalization = 12,
  template_combinatorics = 13,
  inverse_property_conditioning = 14,
  phase_diagram_extrapolation = 15,
  retrosynthesis_forward_design = 16,
  functional_analog = 17,
  tolerance_factor_substitution = 18,
  periodicity_preserving_analog = 19,
};

enum class RuleCapability { concrete, prompt_only };

struct RuleInfo {
  RuleId id;
  std::string_view name;
  std::string_view guidance;  // injected into prompts
  RuleCapability capability;
};

inline constexpr std::array<RuleInfo, 19> kRules{{
    {RuleId::same_group_substitution, "Same-group substitution",
     "Swap elements for other members of the same periodic group, e.g. A2B3 -> C2D3 with C "
     "from group(A) and D from group(B).",
     RuleCapability::concrete},
    {RuleId::stoichiometry_preserving_substitution, "Stoichiometry-preserving substitution",
     "Keep the formula ratios and replace elements with chemically similar ones, e.g. A2B3C4 -> "
     "D2E3F4 with D~A, E~B, F~C.",
     RuleCapability::concrete},
    {RuleId::oxidation_state_substitution, "Oxidation-state substitution",
     "Replace an element with another that adopts the same oxidation state, e.g. A(2+)B(-) -> "
     "C(2+)D(-).",
     RuleCapability::concrete},
    {RuleId::functional_group_substitution, "Functional-group substitution",
     "Exchange a functional group for one with similar chemical behaviour, R-X -> R-Y.",
     RuleCapability::prompt_only},
    {RuleId::motif_replacement, "Motif replacement",
     "Replace a structural fragment with another that plays the same role, e.g. one ring motif "
     "for another.",
     RuleCapability::prompt_only},
    {RuleId::crystal_prototype_substitution, "Crystal prototype substitution",
     "Keep the structural prototype (such as perovskite ABX3) and change its elements, ABX3 -> "
     "CDY3.",
     RuleCapability::concrete},
    {RuleId::layered_intercalation, "Layered intercalation",
     "Insert guest atoms between the layers of a layered host, [ABC] -> [ABC].D.",
     RuleCapability::prompt_only},
    {RuleId::coordination_geometry_mutation, "Coordination geometry mutation",
     "Change the number of ligands around a central atom, e.g. A(L)4 -> A(L)6.",
     RuleCapability::prompt_only},
    {RuleId::redox_variant, "Oxidation/reduction variant",
     "Shift the stoichiometry to a neighbouring redox configuration, e.g. A2B3 -> A3B4.",
     RuleCapability::concrete},
    {RuleId::structural_isomer, "Structural isomer generation",
     "Rearrange atomic connectivity while keeping the formula, A-B-C-D -> A-C-B-D.",
     RuleCapability::prompt_only},
    {RuleId::group_recombination, "Group-based recombination",
     "Combine fragments of two known compounds, (A-B-C) + (D-E-F) -> A-E-C.",
     RuleCapability::prompt_only},
    {RuleId::surface_functionalization, "Surface functionalization",
     "Attach functional groups to the surface of a known material, ABC -> ABC-X.",
     RuleCapability::prompt_only},
    {RuleId::template_combinatorics, "Template-guided combinatorics",
     "Fill a known formula template with compatible elements, ABX3 -> C-D-E3.",
     RuleCapability::concrete},
    {RuleId::inverse_property_conditioning, "Inverse property conditioning",
     "Start from the target property and propose compositions known to deliver it.",
     RuleCapability::prompt_only},
    {RuleId::phase_diagram_extrapolation, "Phase-diagram extrapolation",
     "Propose compounds lying between two known stable phases, (A-B), (B-C) -> A-C.",
     RuleCapability::prompt_only},
    {RuleId::retrosynthesis_forward_design, "Retrosynthesis-based forward design",
     "Suggest plausible products reachable from available precursors, A + B -> C.",
     RuleCapability::prompt_only},
    {RuleId::functional_analog, "Functional analog discovery",
     "Replace a compound with a different one serving the same function, e.g. another "
     "insulator.",
     RuleCapability::prompt_only},
    {RuleId::tolerance_factor_substitution, "Tolerance-factor guided substitution",
     "Substitute atoms of comparable size so the structure stays stable, ABX3 -> A'BX3 with "
     "r(A') ~ r(A).",
     RuleCapability::concrete},
    {RuleId::periodicity_preserving_analog, "Periodicity-preserving analog search",
     "Replace atoms with their nearest neighbours down or up the same group, keeping periodic "
     "trends.",
     RuleCapability::concrete},
}};

inline const RuleInfo& rule_info(RuleId id) { return kRules[static_cast<int>(id) - 1]; }

inline RuleId rule_from_number(int number) {
  if (number < 1 || number > 19)
    throw Error(Errc::InvalidConfig, "rule number out of range: " + std::to_string(number));
  return static_cast<RuleId>(number);
}

inline bool is_concrete(RuleId id) { return rule_info(id).capability == RuleCapability::concrete; }

inline std::vector<RuleId> concrete_rules() {
  std::vector<RuleId> out;
  for (const auto& r : kRules)
    if (r.capability == RuleCapability::concrete) out.push_back(r.id);
  return out;
}

// Numbered rule lines for the prompt's rules section.
inline std::vector<std::string> rule_prompt_lines() {
  std::vector<std::string> out;
  for (const auto& r : kRules)
    out.push_back(std::to_string(static_cast<int>(r.id)) + ". " + std::string(r.name) + ": " +
                  std::string(r.guidance));
  return out;
}

// Substitute neighbourhoods used by the concrete rules.
inline bool similar_elements(const ElementInfo& x, const ElementInfo& y) {
  return x.group == y.group && x.electronegativity && y.electronegativity &&
         std::fabs(*x.electronegativity - *y.electronegativity) <= 0.5;
}

inline bool shares_positive_oxidation_state(const ElementInfo& x, const ElementInfo& y) {
  for (int a : x.common_oxidation_states)
    for (int b : y.common_oxidation_states)
      if (a == b && a > 0) return true;
  return false;
}

inline bool mass_compatible(const ElementInfo& original, const ElementInfo& substitute) {
  const double ratio = substitute.atomic_mass / original.atomic_mass;
  return ratio >= 0.5 && ratio <= 2.0;
}

inline std::vector<std::string> neighborhood(RuleId rule, const ElementInfo& x,
                                             const ElementTable& table) {
  std::vector<std::string> out;
  for (const auto& y : table.elements()) {
    if (y.symbol == x.symbol) continue;
    bool ok = false;
    switch (rule) {
      case RuleId::same_group_substitution:
      case RuleId::template_combinatorics: ok = y.group == x.group; break;
      case RuleId::stoichiometry_preserving_substitution: ok = similar_elements(x, y); break;
      case RuleId::oxidation_state_substitution: ok = x.shares_oxidation_state(y); break;
      case RuleId::crystal_prototype_substitution: ok = shares_positive_oxidation_state(x, y); break;
      case RuleId::tolerance_factor_substitution:
        ok = x.shares_oxidation_state(y) && mass_compatible(x, y);
        break;
      case RuleId::periodicity_preserving_analog:
        ok = y.group == x.group && std::abs(y.period - x.period) == 1;
        break;
      default: break;
    }
    if (ok) out.push_back(y.symbol);
  }
  return out;
}

namespace rules_detail {

using crystal::Site;
using crystal::Structure;

inline Structure relabel(const Structure& parent, const std::map<std::string, std::string>& swap) {
  std::vector<Site> sites;
  sites.reserve(parent.sites().size());
  for (const auto& site : parent.sites()) {
    const auto it = swap.find(site.element());
    sites.push_back(
        Site::make(it == swap.end() ? site.element() : it->second, site.frac()));
  }
  return Structure::make(parent.lattice(), std::move(sites), crystal::StructureSource::generated);
}

template <class T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[uniform_index(rng, items.size())];
}

inline std::vector<std::string> available(const std::vector<std::string>& candidates,
                                          const std::set<std::string>& taken) {
  std::vector<std::string> out;
  for (const auto& c : candidates)
    if (!taken.count(c)) out.push_back(c);
  return out;
}

// Substitution scheme shared by rules 1, 2, 3, 19: one randomly chosen
// attemptable element is always replaced, each other attemptable element with
// probability 1/2. Substitutes never collide with elements already present,
// so the multiset of counts is preserved.
inline std::vector<Structure> substitute_subset(RuleId rule, const Structure& parent, Rng& rng,
                                                const ElementTable& table, bool single) {
  std::vector<std::string> attemptable;
  std::map<std::string, std::vector<std::string>> hoods;
  for (const auto& [symbol, count] : parent.composition()) {
    auto hood = neighborhood(rule, table.at(symbol), table);
    if (!hood.empty()) {
      attemptable.push_back(symbol);
      hoods.emplace(symbol, std::move(hood));
    }
  }
  if (attemptable.empty())
    throw Error(Errc::NoValidSubstitute,
                std::string(rule_info(rule).name) + " has no substitutes for " +
                    parent.reduced_formula());
  const auto& forced = pick(rng, attemptable);
  std::set<std::string> taken;
  for (const auto& [symbol, count] : parent.composition()) taken.insert(symbol);
  std::map<std::string, std::string> swap;
  for (const auto& symbol : attemptable) {
    const bool chosen = symbol == forced || (!single && bernoulli(rng, 0.5));
    if (!chosen) continue;
    const auto options = available(hoods.at(symbol), taken);
    if (options.empty()) {
      if (symbol == forced) return {};
      continue;
    }
    const auto& substitute = pick(rng, options);
    taken.insert(substitute);
    swap.emplace(symbol, substitute);
  }
  return {relabel(parent, swap)};
}

inline std::vector<Structure> prototype_substitution(const Structure& parent, Rng& rng,
                                                     const ElementTable& table) {
  if (parent.composition().size() < 2)
    throw Error(Errc::NoValidSubstitute, "prototype substitution needs a cation and an anion");
  // The most electronegative species forms the anion sublattice and is kept.
  std::string anion;
  double best = -1.0;
  for (const auto& [symbol, count] : parent.composition()) {
    const double en = table.at(symbol).electronegativity.value_or(0.0);
    if (en > best) {
      best = en;
      anion = symbol;
    }
  }
  std::vector<std::string> cations;
  std::map<std::string, std::vector<std::string>> hoods;
  for (const auto& [symbol, count] : parent.composition()) {
    if (symbol == anion) continue;
    auto hood = neighborhood(RuleId::crystal_prototype_substitution, table.at(symbol), table);
    if (!hood.empty()) {
      cations.push_back(symbol);
      hoods.emplace(symbol, std::move(hood));
    }
  }
  if (cations.empty())
    throw Error(Errc::NoValidSubstitute, "no cation substitutes for " + parent.reduced_formula());
  const auto& cation = pick(rng, cations);
  std::set<std::string> taken;
  for (const auto& [symbol, count] : parent.composition()) taken.insert(symbol);
  const auto options = available(hoods.at(cation), taken);
  if (options.empty()) return {};
  return {relabel(parent, {{cation, pick(rng, options)}})};
}

// Every reduced count shifted by the same step (+1, or -1 when all counts
// allow it); sites are re-emitted on the parent lattice, keeping parent
// coordinates where available and drawing new ones otherwise.
inline std::vector<Structure> redox_variant(const Structure& parent, Rng& rng) {
  const auto reduced = crystal::reduced_composition(parent.composition());
  const long long multiplicity = parent.composition().begin()->second / reduced.begin()->second;
  // Equal counts (AB, A2B2, pure elements) shift to the same ratio.
  std::set<long long> distinct;
  for (const auto& [symbol, count] : reduced) distinct.insert(count);
  if (distinct.size() == 1)
    throw Error(Errc::NoValidSubstitute, "no adjacent ratio for " + parent.reduced_formula());
  bool can_shrink = true;
  for (const auto& [symbol, count] : reduced) can_shrink = can_shrink && count >= 2;
  const int step = (can_shrink && bernoulli(rng, 0.5)) ? -1 : 1;

  std::map<std::string, std::vector<crystal::Frac>> positions;
  std::vector<std::string> order;
  for (const auto& site : parent.sites()) {
    if (!positions.count(site.element())) order.push_back(site.element());
    positions[site.element()].push_back(site.frac());
  }
  std::vector<Site> sites;
  for (const auto& symbol : order) {
    const long long target = multiplicity * (reduced.at(symbol) + step);
    const auto& old = positions.at(symbol);
    for (long long i = 0; i < target; ++i) {
      if (static_cast<std::size_t>(i) < old.size()) {
        sites.push_back(Site::make(symbol, old[static_cast<std::size_t>(i)]));
      } else {
        sites.push_back(
            Site::make(symbol, {uniform_unit(rng), uniform_unit(rng), uniform_unit(rng)}));
      }
    }
  }
  return {Structure::make(parent.lattice(), std::move(sites), crystal::StructureSource::generated)};
}

// Every element slot of the parent's template is refilled from its own group
// (itself included); at least one slot must change.
inline std::vector<Structure> template_fill(const Structure& parent, Rng& rng,
                                            const ElementTable& table) {
  std::map<std::string, std::string> swap;
  std::set<std::string> picked;
  bool changed = false;
  bool any_group = false;
  for (const auto& [symbol, count] : parent.composition()) {
    auto options = neighborhood(RuleId::template_combinatorics, table.at(symbol), table);
    any_group = any_group || !options.empty();
    options.push_back(symbol);
    options = available(options, picked);
    if (options.empty()) return {};
    const auto& choice = pick(rng, options);
    picked.insert(choice);
    if (choice != symbol) {
      changed = true;
      swap.emplace(symbol, choice);
    }
  }
  if (!any_group)
    throw Error(Errc::NoValidSubstitute, "no group partners for " + parent.reduced_formula());
  if (!changed) return {};
  return {relabel(parent, swap)};
}

}  // namespace rules_detail

// Applies one concrete rule to `parent`. Returns zero or one mutant; lattice
// parameters are always copied from the parent.
inline std::vector<crystal::Structure> apply_rule(
    RuleId rule, const crystal::Structure& parent, Rng& rng,
    const ElementTable& table = ElementTable::builtin()) {
  using namespace rules_detail;
  if (!is_concrete(rule))
    throw Error(Errc::PromptOnlyRule, std::string(rule_info(rule).name) + " is prompt-only");
  std::vector<crystal::Structure> out;
  switch (rule) {
    case RuleId::same_group_substitution:
    case RuleId::stoichiometry_preserving_substitution:
    case RuleId::oxidation_state_substitution:
    case RuleId::periodicity_preserving_analog:
      out = substitute_subset(rule, parent, rng, table, false);
      break;
    case RuleId::tolerance_factor_substitution:
      out = substitute_subset(rule, parent, rng, table, true);
      break;
    case RuleId::crystal_prototype_substitution: out = prototype_substitution(parent, rng, table); break;
    case RuleId::redox_variant: out = redox_variant(parent, rng); break;
    case RuleId::template_combinatorics: out = template_fill(parent, rng, table); break;
    default: throw Error(Errc::PromptOnlyRule, std::string(rule_info(rule).name));
  }
  // Swapping two elements with equal counts (Na <-> K in NaK) gives the parent back.
  std::erase_if(out, [&](const crystal::Structure& s) { return s.reduced_formula() == parent.reduced_formula(); });
  return out;
}

}  // namespace llema::chem
