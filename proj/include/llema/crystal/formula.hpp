#pragma once

#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <string_view>

#include "llema/error.hpp"

namespace llema::crystal {

// Element symbol -> positive site count. std::map keeps symbols sorted.
using Composition = std::map<std::string, long long, std::less<>>;

// Counts divided by their gcd, symbols alphabetical with O moved last,
// unit counts omitted: {Hf:2, Zr:2, O:8} -> "HfZrO4".
inline std::string reduce_formula(const Composition& composition) {
  if (composition.empty()) throw Error(Errc::EmptyComposition, "no elements");
  long long divisor = 0;
  for (const auto& [symbol, count] : composition) {
    if (count <= 0)
      throw Error(Errc::MalformedFormula, "non-positive count for " + symbol);
    divisor = std::gcd(divisor, count);
  }
  std::string out;
  auto emit = [&](const std::string& symbol, long long count) {
    out += symbol;
    if (count / divisor != 1) out += std::to_string(count / divisor);
  };
  for (const auto& [symbol, count] : composition)
    if (symbol != "O") emit(symbol, count);
  if (const auto it = composition.find("O"); it != composition.end()) emit(it->first, it->second);
  return out;
}

inline Composition reduced_composition(const Composition& composition) {
  long long divisor = 0;
  for (const auto& [symbol, count] : composition) divisor = std::gcd(divisor, count);
  Composition out;
  for (const auto& [symbol, count] : composition) out.emplace(symbol, count / divisor);
  return out;
}

// Parses flat formulas such as "BaTiO3" or "O3Ti1Ba1". Repeated symbols are
// summed. Groups in parentheses and fractional counts are not supported.
inline Composition parse_formula(std::string_view text) {
  Composition out;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (!std::isupper(static_cast<unsigned char>(c)))
      throw Error(Errc::MalformedFormula, std::string(text));
    std::string symbol(1, c);
    ++i;
    while (i < text.size() && std::islower(static_cast<unsigned char>(text[i]))) symbol += text[i++];
    long long count = 0;
    bool has_digits = false;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      count = count * 10 + (text[i++] - '0');
      has_digits = true;
    }
    if (!has_digits) count = 1;
    if (count == 0) throw Error(Errc::MalformedFormula, std::string(text));
    out[symbol] += count;
  }
  if (out.empty()) throw Error(Errc::EmptyComposition, "empty formula");
  return out;
}

inline std::string canonical_formula(std::string_view text) {
  return reduce_formula(parse_formula(text));
}

// Anonymized stoichiometry: reduced counts sorted ascending, e.g. ABX3 -> "1:1:3".
inline std::string prototype_key(const Composition& composition) {
  const auto reduced = reduced_composition(composition);
  std::multiset<long long> counts;
  for (const auto& [symbol, count] : reduced) counts.insert(count);
  std::string out;
  for (long long count : counts) {
    if (!out.empty()) out += ':';
    out += std::to_string(count);
  }
  return out;
}

inline std::string element_set_key(const Composition& composition) {
  std::string out;
  for (const auto& [symbol, count] : composition) {
    if (!out.empty()) out += '-';
    out += symbol;
  }
  return out;
}

}  // namespace llema::crystal
