#pragma once

#include <array>
#include <string>
#include <string_view>

#include "llema/error.hpp"

namespace llema {

enum class Property {
  band_gap,
  formation_energy,
  energy_above_hull,
  bulk_modulus,
  shear_modulus,
  dielectric_constant,
  piezoelectric_coefficient,
  electrical_conductivity,
  density,
  seebeck,
  power_factor,
};

inline constexpr std::array<Property, 11> kAllProperties{
    Property::band_gap,          Property::formation_energy,
    Property::energy_above_hull, Property::bulk_modulus,
    Property::shear_modulus,     Property::dielectric_constant,
    Property::piezoelectric_coefficient, Property::electrical_conductivity,
    Property::density,           Property::seebeck,
    Property::power_factor,
};

constexpr std::string_view to_string(Property p) noexcept {
  switch (p) {
    case Property::band_gap: return "band_gap";
    case Property::formation_energy: return "formation_energy";
    case Property::energy_above_hull: return "energy_above_hull";
    case Property::bulk_modulus: return "bulk_modulus";
    case Property::shear_modulus: return "shear_modulus";
    case Property::dielectric_constant: return "dielectric_constant";
    case Property::piezoelectric_coefficient: return "piezoelectric_coefficient";
    case Property::electrical_conductivity: return "electrical_conductivity";
    case Property::density: return "density";
    case Property::seebeck: return "seebeck";
    case Property::power_factor: return "power_factor";
  }
  return "";
}

constexpr std::string_view unit_of(Property p) noexcept {
  switch (p) {
    case Property::band_gap: return "eV";
    case Property::formation_energy: return "eV/atom";
    case Property::energy_above_hull: return "eV/atom";
    case Property::bulk_modulus: return "GPa";
    case Property::shear_modulus: return "GPa";
    case Property::dielectric_constant: return "";
    case Property::piezoelectric_coefficient: return "pC/N";
    case Property::electrical_conductivity: return "S/cm";
    case Property::density: return "g/cm^3";
    case Property::seebeck: return "uV/K";
    case Property::power_factor: return "W/(m K^2)";
  }
  return "";
}

constexpr std::string_view display_name(Property p) noexcept {
  switch (p) {
    case Property::band_gap: return "Band gap";
    case Property::formation_energy: return "Formation energy";
    case Property::energy_above_hull: return "Energy above hull";
    case Property::bulk_modulus: return "Bulk modulus";
    case Property::shear_modulus: return "Shear modulus";
    case Property::dielectric_constant: return "Dielectric constant";
    case Property::piezoelectric_coefficient: return "Piezoelectric coefficient";
    case Property::electrical_conductivity: return "Electrical conductivity";
    case Property::density: return "Density";
    case Property::seebeck: return "Seebeck coefficient";
    case Property::power_factor: return "Power factor";
  }
  return "";
}

inline Property property_from(std::string_view name) {
  for (auto p : kAllProperties)
    if (to_string(p) == name) return p;
  throw Error(Errc::InvalidConstraint, "unknown property '" + std::string(name) + "'");
}

}  // namespace llema
