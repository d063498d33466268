#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "llema/chem/element_table.hpp"
#include "llema/crystal/cif.hpp"
#include "llema/crystal/structure.hpp"
#include "llema/detail/http.hpp"
#include "llema/random.hpp"
#include "llema/tasks/property.hpp"

namespace llema::oracle {

// A property predictor. Implementations must be deterministic in the
// structure; predict_many may throw TransportError, which the oracle turns
// into missing values.
class Surrogate {
 public:
  virtual ~Surrogate() = default;
  virtual std::string name() const = 0;
  virtual const std::set<Property>& capabilities() const = 0;
  virtual bool shareable() const { return false; }

  virtual std::map<Property, double> predict_many(const crystal::Structure& s,
                                                  const std::set<Property>& wanted) const = 0;

  bool can_predict(Property p) const { return capabilities().count(p) != 0; }

  std::optional<double> predict(const crystal::Structure& s, Property p) const {
    const auto out = predict_many(s, {p});
    const auto it = out.find(p);
    if (it == out.end()) return std::nullopt;
    return it->second;
  }
};

struct Descriptor {
  double mean_electronegativity = 0.0;  // mass weighted
  double mean_group = 0.0;
  double mean_period = 0.0;
  double density = 0.0;
};

inline Descriptor describe_structure(const crystal::Structure& s,
                                     const chem::ElementTable& table = chem::ElementTable::builtin()) {
  Descriptor d;
  double mass = 0.0;
  long long atoms = 0;
  for (const auto& [symbol, count] : s.composition()) {
    const auto& e = table.at(symbol);
    const double m = e.atomic_mass * static_cast<double>(count);
    // Noble gases carry no electronegativity; 0 keeps them at the ionic extreme.
    d.mean_electronegativity += m * e.electronegativity.value_or(0.0);
    d.mean_group += static_cast<double>(e.group * count);
    d.mean_period += static_cast<double>(e.period * count);
    mass += m;
    atoms += count;
  }
  d.mean_electronegativity /= mass;
  d.mean_group /= static_cast<double>(atoms);
  d.mean_period /= static_cast<double>(atoms);
  d.density = crystal::density(s, table);
  return d;
}

// Stand-in for trained models: a smooth squashing of the descriptor into a
// plausible range per property plus a per-formula jitter from the seed.
// Values are made up and only good for exercising the pipeline.
class SyntheticSurrogate final : public Surrogate {
 public:
  explicit SyntheticSurrogate(std::uint64_t seed = 0) : seed_(seed) {}

  std::string name() const override { return "synthetic"; }
  bool shareable() const override { return true; }

  const std::set<Property>& capabilities() const override {
    static const std::set<Property> caps{
        Property::band_gap,          Property::formation_energy,
        Property::energy_above_hull, Property::bulk_modulus,
        Property::shear_modulus,     Property::dielectric_constant,
        Property::piezoelectric_coefficient, Property::seebeck,
        Property::power_factor};
    return caps;
  }

  struct Range {
    double lo, hi;
  };

  static Range range_of(Property p) {
    switch (p) {
      case Property::band_gap: return {0.0, 8.0};
      case Property::formation_energy: return {-4.0, 1.0};
      case Property::energy_above_hull: return {0.0, 0.5};
      case Property::bulk_modulus:
      case Property::shear_modulus: return {10.0, 500.0};
      case Property::dielectric_constant: return {1.0, 100.0};
      case Property::piezoelectric_coefficient: return {0.0, 20.0};
      case Property::seebeck: return {-300.0, 300.0};
      case Property::power_factor: return {1e-5, 5e-3};
      default: return {0.0, 0.0};
    }
  }

  double value(const Descriptor& d, const std::string& formula, Property p) const {
    // Centered, roughly unit-scale features.
    const double en = d.mean_electronegativity - 2.2;
    const double grp = (d.mean_group - 9.0) / 6.0;
    const double per = (d.mean_period - 4.0) / 2.0;
    const double rho = (d.density - 5.0) / 3.0;
    double z = 0.0;
    switch (p) {
      case Property::band_gap: z = 1.6 * en + 0.5 * grp - 0.6 * per - 0.5; break;
      case Property::formation_energy: z = -1.4 * en - 0.3 * grp + 0.2 * per + 0.3; break;
      case Property::energy_above_hull: z = -0.6 * en + 0.3 * per - 1.5; break;
      case Property::bulk_modulus: z = 0.7 * rho - 0.4 * per + 0.3 * en - 0.6; break;
      case Property::shear_modulus: z = 0.5 * rho - 0.6 * per + 0.3 * en - 0.9; break;
      case Property::dielectric_constant: z = 0.8 * per - 0.5 * en + 0.2 * rho - 1.2; break;
      case Property::piezoelectric_coefficient: z = 0.6 * en + 0.4 * per - 0.2 * rho - 0.7; break;
      case Property::seebeck: z = 0.9 * grp - 0.7 * en + 0.2 * per; break;
      case Property::power_factor: z = 0.5 * per - 0.6 * en + 0.3 * rho - 0.5; break;
      default: break;
    }
    z += jitter(formula, p);
    const auto r = range_of(p);
    // tanh keeps the map smooth and 1-Lipschitz in z.
    const double t = 0.5 * (1.0 + std::tanh(z));
    return std::clamp(r.lo + (r.hi - r.lo) * t, r.lo, r.hi);
  }

  std::map<Property, double> predict_many(const crystal::Structure& s,
                                          const std::set<Property>& wanted) const override {
    std::map<Property, double> out;
    const auto d = describe_structure(s);
    for (const auto p : wanted)
      if (can_predict(p)) out[p] = value(d, s.reduced_formula(), p);
    return out;
  }

 private:
  // Uniform in [-0.75, 0.75), fixed by (seed, formula, property).
  double jitter(const std::string& formula, Property p) const {
    const auto h = mix64(fnv1a(formula) ^ mix64(seed_ + 0x9e37u * static_cast<std::uint64_t>(p)));
    return (static_cast<double>(h >> 11) * 0x1.0p-53 - 0.5) * 1.5;
  }

  std::uint64_t seed_;
};

// POST {base}/predict {"cif": ..., "properties": [...]} -> {"values": {...}}.
class RemoteSurrogate final : public Surrogate {
 public:
  explicit RemoteSurrogate(std::string base_url, detail::RetryPolicy policy = {},
                           std::set<Property> capabilities = default_capabilities())
      : base_(std::move(base_url)), policy_(policy), caps_(std::move(capabilities)) {}

  static std::set<Property> default_capabilities() {
    std::set<Property> caps(kAllProperties.begin(), kAllProperties.end());
    caps.erase(Property::density);
    caps.erase(Property::electrical_conductivity);
    return caps;
  }

  std::string name() const override { return "remote:" + base_; }
  bool shareable() const override { return true; }
  const std::set<Property>& capabilities() const override { return caps_; }

  std::map<Property, double> predict_many(const crystal::Structure& s,
                                          const std::set<Property>& wanted) const override {
    nlohmann::json body{{"cif", crystal::write_cif(s)}, {"properties", nlohmann::json::array()}};
    for (const auto p : wanted)
      if (can_predict(p)) body["properties"].push_back(std::string(to_string(p)));
    if (body["properties"].empty()) return {};
    const auto res = detail::http_request(base_, "/predict", "POST", body.dump(), {}, policy_);
    if (res.status != 200)
      throw Error(Errc::TransportError, "surrogate answered HTTP " + std::to_string(res.status));
    std::map<Property, double> out;
    try {
      const auto values = nlohmann::json::parse(res.body).at("values");
      for (const auto p : wanted) {
        const auto key = std::string(to_string(p));
        if (values.contains(key) && values[key].is_number()) out[p] = values[key].get<double>();
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::TransportError, std::string("surrogate reply: ") + e.what());
    }
    return out;
  }

 private:
  std::string base_;
  detail::RetryPolicy policy_;
  std::set<Property> caps_;
};

}  // namespace llema::oracle
