#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "llema/chem/element_table_data.hpp"
#include "llema/detail/text.hpp"
#include "llema/error.hpp"

namespace llema::chem {

struct ElementInfo {
  std::string symbol;
  int atomic_number = 0;
  int group = 0;   // 1-18; f-block elements are filed under group 3
  int period = 0;  // 1-7
  double atomic_mass = 0.0;                // amu
  std::optional<double> electronegativity;  // Pauling
  std::vector<int> common_oxidation_states;
  bool earth_abundant = true;
  bool toxic = false;

  bool shares_oxidation_state(const ElementInfo& other) const {
    for (int a : common_oxidation_states)
      for (int b : other.common_oxidation_states)
        if (a == b) return true;
    return false;
  }
};

// Immutable periodic table keyed by symbol. The built-in instance is parsed
// once from the embedded CSV; a different table can be loaded from disk.
class ElementTable {
 public:
  static ElementTable from_csv(std::string_view text) {
    ElementTable table;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
      ++line_no;
      const auto row = ::llema::detail::trim(line);
      if (row.empty() || row.front() == '#') continue;
      if (!header_seen) {
        header_seen = true;
        continue;
      }
      const auto cols = ::llema::detail::split(row, ',');
      if (cols.size() != 9)
        throw Error(Errc::InvalidConfig, "element table line " + std::to_string(line_no) +
                                             ": expected 9 columns");
      ElementInfo info;
      info.symbol = std::string(::llema::detail::trim(cols[0]));
      const auto z = ::llema::detail::parse_int(cols[1]);
      const auto group = ::llema::detail::parse_int(cols[2]);
      const auto period = ::llema::detail::parse_int(cols[3]);
      const auto mass = ::llema::detail::parse_double(cols[4]);
      if (!z || !group || !period || !mass)
        throw Error(Errc::MalformedNumber, "element table line " + std::to_string(line_no));
      info.atomic_number = static_cast<int>(*z);
      info.group = static_cast<int>(*group);
      info.period = static_cast<int>(*period);
      info.atomic_mass = *mass;
      if (!::llema::detail::trim(cols[5]).empty()) {
        info.electronegativity = ::llema::detail::parse_double(cols[5]);
        if (!info.electronegativity)
          throw Error(Errc::MalformedNumber, "element table line " + std::to_string(line_no));
      }
      if (!::llema::detail::trim(cols[6]).empty()) {
        for (auto part : ::llema::detail::split(cols[6], ';')) {
          const auto state = ::llema::detail::parse_int(part);
          if (!state)
            throw Error(Errc::MalformedNumber, "element table line " + std::to_string(line_no));
          info.common_oxidation_states.push_back(static_cast<int>(*state));
        }
      }
      info.earth_abundant = ::llema::detail::trim(cols[7]) == "1";
      info.toxic = ::llema::detail::trim(cols[8]) == "1";
      if (info.group < 1 || info.group > 18 || info.period < 1 || info.period > 7)
        throw Error(Errc::InvalidConfig, "element table line " + std::to_string(line_no) +
                                             ": group/period out of range");
      if (table.index_.count(info.symbol))
        throw Error(Errc::InvalidConfig, "duplicate element symbol " + info.symbol);
      table.index_.emplace(info.symbol, table.elements_.size());
      table.elements_.push_back(std::move(info));
    }
    std::sort(table.elements_.begin(), table.elements_.end(),
              [](const ElementInfo& a, const ElementInfo& b) {
                return a.atomic_number < b.atomic_number;
              });
    table.index_.clear();
    for (std::size_t i = 0; i < table.elements_.size(); ++i)
      table.index_.emplace(table.elements_[i].symbol, i);
    return table;
  }

  static ElementTable load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot open element table " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_csv(buf.str());
  }

  static const ElementTable& builtin() {
    static const ElementTable table = from_csv(detail::kElementTableCsv);
    return table;
  }

  bool contains(std::string_view symbol) const {
    return index_.find(std::string(symbol)) != index_.end();
  }

  const ElementInfo* find(std::string_view symbol) const {
    const auto it = index_.find(std::string(symbol));
    return it == index_.end() ? nullptr : &elements_[it->second];
  }

  const ElementInfo& at(std::string_view symbol) const {
    if (const auto* info = find(symbol)) return *info;
    throw Error(Errc::UnknownElement, std::string(symbol));
  }

  const std::vector<ElementInfo>& elements() const noexcept { return elements_; }

 private:
  std::vector<ElementInfo> elements_;  // ascending atomic number
  std::map<std::string, std::size_t, std::less<>> index_;
};

inline const ElementInfo& element_info(std::string_view symbol,
                                       const ElementTable& table = ElementTable::builtin()) {
  return table.at(symbol);
}

// Other elements of the same group, by ascending atomic number.
inline std::vector<std::string> same_group_substitutes(
    std::string_view symbol, const ElementTable& table = ElementTable::builtin()) {
  const auto& self = table.at(symbol);
  std::vector<std::string> out;
  for (const auto& e : table.elements())
    if (e.group == self.group && e.symbol != self.symbol) out.push_back(e.symbol);
  return out;
}

}  // namespace llema::chem
