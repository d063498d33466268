#pragma once

#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "llema/crystal/formula.hpp"
#include "llema/crystal/structure.hpp"
#include "llema/detail/text.hpp"
#include "llema/error.hpp"
#include "llema/oracle/property_vector.hpp"

namespace llema::oracle {

// Columns of the reference CSV after `formula`, in file order.
inline constexpr std::array<Property, 9> kReferenceColumns{
    Property::band_gap,          Property::formation_energy,
    Property::energy_above_hull, Property::bulk_modulus,
    Property::shear_modulus,     Property::dielectric_constant,
    Property::piezoelectric_coefficient, Property::seebeck,
    Property::power_factor};

struct ReferenceHit {
  std::string formula;  // the DB key that answered
  PropertyVector values;
};

// Known materials keyed by canonical reduced formula, with a second index on
// (element set, anonymized prototype) for similarity matching.
class ReferenceDB {
 public:
  // Later rows for the same reduced formula fill cells the earlier ones left empty.
  void add(std::string_view formula, const PropertyVector& fragment) {
    const auto key = crystal::canonical_formula(formula);
    auto& entry = entries_[key];
    for (const auto& [p, v] : fragment.entries())
      if (v.present() && !entry.value(p)) entry.set(p, v.value, ValueSource::reference);
    const auto comp = crystal::parse_formula(key);
    index_[{crystal::element_set_key(comp), crystal::prototype_key(comp)}].insert(key);
  }

  static ReferenceDB from_csv(std::string_view text) {
    ReferenceDB db;
    int line_no = 0;
    bool header_seen = false;
    for (auto line : detail::split(text, '\n')) {
      ++line_no;
      line = detail::trim(line);
      if (line.empty() || line.front() == '#') continue;
      const auto cells = detail::split(line, ',');
      if (!header_seen) {
        header_seen = true;
        std::string expected = "formula";
        for (const auto p : kReferenceColumns) expected += "," + std::string(to_string(p));
        if (std::string(line) != expected)
          throw Error(Errc::CorruptStream, "reference DB header must be: " + expected);
        continue;
      }
      if (cells.size() != kReferenceColumns.size() + 1)
        throw Error(Errc::CorruptStream, "reference DB line " + std::to_string(line_no) +
                                             ": expected " +
                                             std::to_string(kReferenceColumns.size() + 1) +
                                             " cells");
      PropertyVector fragment;
      for (std::size_t i = 0; i < kReferenceColumns.size(); ++i) {
        const auto cell = detail::trim(cells[i + 1]);
        if (cell.empty()) continue;
        const auto v = detail::parse_double(cell);
        if (!v)
          throw Error(Errc::MalformedNumber, "reference DB line " + std::to_string(line_no) +
                                                 ": '" + std::string(cell) + "'");
        fragment.set(kReferenceColumns[i], *v, ValueSource::reference);
      }
      try {
        db.add(detail::trim(cells[0]), fragment);
      } catch (const Error& e) {
        throw Error(e.code(), "reference DB line " + std::to_string(line_no) + ": " + e.detail());
      }
    }
    return db;
  }

  static ReferenceDB load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot read reference DB " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_csv(buf.str());
  }

  // Non-canonical input is canonicalized first; unparseable input never matches.
  std::optional<PropertyVector> lookup_exact(std::string_view formula) const {
    std::string key;
    try {
      key = crystal::canonical_formula(formula);
    } catch (const Error&) {
      return std::nullopt;
    }
    const auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  // Same element set and same anonymized prototype; the lexicographically
  // smallest formula wins ties.
  std::optional<ReferenceHit> lookup_similar(const crystal::Composition& composition) const {
    const auto it = index_.find(
        {crystal::element_set_key(composition), crystal::prototype_key(composition)});
    if (it == index_.end() || it->second.empty()) return std::nullopt;
    const auto& formula = *it->second.begin();
    return ReferenceHit{formula, entries_.at(formula)};
  }

  std::optional<ReferenceHit> lookup_similar(const crystal::Structure& s) const {
    return lookup_similar(s.composition());
  }

  bool contains(std::string_view formula) const { return lookup_exact(formula).has_value(); }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  std::vector<std::string> formulas() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries_) out.push_back(k);
    return out;
  }

 private:
  std::map<std::string, PropertyVector, std::less<>> entries_;
  std::map<std::pair<std::string, std::string>, std::set<std::string>> index_;
};

}  // namespace llema::oracle
