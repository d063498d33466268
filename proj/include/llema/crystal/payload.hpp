#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "llema/crystal/structure.hpp"
#include "llema/detail/text.hpp"
#include "llema/error.hpp"

namespace llema::crystal {

// Generation payload schema, shared by the LLM output format and replay files:
//   {"formula": "...", "lattice": {"a","b","c","alpha","beta","gamma"},
//    "sites": [{"element": "X", "frac": [x, y, z]}, ...]}
namespace payload_detail {

inline double number_field(const nlohmann::json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key))
    throw ValidationError(Errc::MissingTag, std::string("missing field '") + key + "'");
  const auto& v = obj.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    if (const auto parsed = detail::parse_double(v.get<std::string>())) return *parsed;
  }
  throw ValidationError(Errc::MalformedNumber, std::string("field '") + key + "' is not a number");
}

}  // namespace payload_detail

// Validates a generator payload into a Structure. The declared formula is not
// trusted; the reduced formula is recomputed from the sites. Every failure is
// reported as ValidationError with the underlying reason.
inline Structure candidate_from_generation(
    const nlohmann::json& payload, StructureSource source = StructureSource::generated,
    const chem::ElementTable& table = chem::ElementTable::builtin()) {
  using payload_detail::number_field;
  if (!payload.is_object()) throw ValidationError(Errc::MissingTag, "payload is not an object");
  if (!payload.contains("lattice")) throw ValidationError(Errc::MissingTag, "missing 'lattice'");
  if (!payload.contains("sites") || !payload.at("sites").is_array())
    throw ValidationError(Errc::MissingTag, "missing 'sites' array");
  const auto& lat = payload.at("lattice");
  try {
    auto lattice =
        Lattice::make(number_field(lat, "a"), number_field(lat, "b"), number_field(lat, "c"),
                      number_field(lat, "alpha"), number_field(lat, "beta"),
                      number_field(lat, "gamma"));
    std::vector<Site> sites;
    for (const auto& entry : payload.at("sites")) {
      if (!entry.is_object() || !entry.contains("element") || !entry.at("element").is_string())
        throw ValidationError(Errc::MissingTag, "site without 'element'");
      if (!entry.contains("frac") || !entry.at("frac").is_array() || entry.at("frac").size() != 3)
        throw ValidationError(Errc::MissingTag, "site without 3-component 'frac'");
      Frac frac{};
      for (std::size_t k = 0; k < 3; ++k) {
        const auto& x = entry.at("frac").at(k);
        if (x.is_number()) {
          frac[k] = x.get<double>();
        } else if (x.is_string() && detail::parse_double(x.get<std::string>())) {
          frac[k] = *detail::parse_double(x.get<std::string>());
        } else {
          throw ValidationError(Errc::MalformedNumber, "fractional coordinate is not a number");
        }
      }
      sites.push_back(Site::make(entry.at("element").get<std::string>(), frac, table));
    }
    return Structure::make(std::move(lattice), std::move(sites), source);
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(e.code(), e.detail());
  }
}

inline nlohmann::json to_payload(const Structure& s) {
  nlohmann::json sites = nlohmann::json::array();
  for (const auto& site : s.sites())
    sites.push_back({{"element", site.element()},
                     {"frac", {site.frac()[0], site.frac()[1], site.frac()[2]}}});
  const auto& l = s.lattice();
  return {{"formula", s.reduced_formula()},
          {"lattice",
           {{"a", l.a()},
            {"b", l.b()},
            {"c", l.c()},
            {"alpha", l.alpha()},
            {"beta", l.beta()},
            {"gamma", l.gamma()}}},
          {"sites", std::move(sites)}};
}

}  // namespace llema::crystal
