#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "llema/chem/element_table.hpp"
#include "llema/crystal/formula.hpp"
#include "llema/error.hpp"

namespace llema::crystal {

// 1 amu in grams.
inline constexpr double kAmuToGram = 1.66053906660e-24;

inline double degrees_to_radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

// abc * sqrt(1 - cos^2 a - cos^2 b - cos^2 g + 2 cos a cos b cos g); angles in degrees.
inline double cell_volume(double a, double b, double c, double alpha, double beta, double gamma) {
  const double ca = std::cos(degrees_to_radians(alpha));
  const double cb = std::cos(degrees_to_radians(beta));
  const double cg = std::cos(degrees_to_radians(gamma));
  if (alpha == 90.0 && beta == 90.0 && gamma == 90.0) return a * b * c;
  const double arg = 1.0 - ca * ca - cb * cb - cg * cg + 2.0 * ca * cb * cg;
  // Rounding leaves flat cells like (120, 120, 120) a hair above zero.
  if (!(arg > 1e-12)) throw Error(Errc::DegenerateCell, "non-realizable cell angles");
  return a * b * c * std::sqrt(arg);
}

class Lattice {
 public:
  // Throws InvalidLattice unless lengths are positive, angles lie in (0, 180)
  // and the angle triple spans a non-zero volume.
  static Lattice make(double a, double b, double c, double alpha, double beta, double gamma) {
    const std::array<double, 6> all{a, b, c, alpha, beta, gamma};
    for (double v : all)
      if (!std::isfinite(v)) throw Error(Errc::InvalidLattice, "non-finite lattice parameter");
    if (!(a > 0.0 && b > 0.0 && c > 0.0))
      throw Error(Errc::InvalidLattice, "cell lengths must be positive");
    for (double angle : {alpha, beta, gamma})
      if (!(angle > 0.0 && angle < 180.0))
        throw Error(Errc::InvalidLattice, "cell angles must lie in (0, 180) degrees");
    try {
      (void)cell_volume(a, b, c, alpha, beta, gamma);
    } catch (const Error&) {
      throw Error(Errc::InvalidLattice, "cell angles do not span a volume");
    }
    return Lattice(a, b, c, alpha, beta, gamma);
  }

  static Lattice cubic(double a) { return make(a, a, a, 90.0, 90.0, 90.0); }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double c() const noexcept { return c_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double gamma() const noexcept { return gamma_; }

  std::array<double, 6> parameters() const noexcept { return {a_, b_, c_, alpha_, beta_, gamma_}; }

 private:
  Lattice(double a, double b, double c, double alpha, double beta, double gamma)
      : a_(a), b_(b), c_(c), alpha_(alpha), beta_(beta), gamma_(gamma) {}

  double a_, b_, c_, alpha_, beta_, gamma_;
};

inline double cell_volume(const Lattice& lattice) {
  return cell_volume(lattice.a(), lattice.b(), lattice.c(), lattice.alpha(), lattice.beta(),
                     lattice.gamma());
}

// Maps a fractional coordinate into [0, 1).
inline double wrap_fractional(double x) {
  double w = x - std::floor(x);
  if (w >= 1.0) w = 0.0;
  return w == 0.0 ? 0.0 : w;
}

using Frac = std::array<double, 3>;

class Site {
 public:
  static Site make(std::string_view element, Frac frac,
                   const chem::ElementTable& table = chem::ElementTable::builtin()) {
    if (!table.contains(element)) throw Error(Errc::UnknownElement, std::string(element));
    for (double& x : frac) {
      if (!std::isfinite(x)) throw Error(Errc::InvalidSite, "non-finite fractional coordinate");
      x = wrap_fractional(x);
    }
    return Site(std::string(element), frac);
  }

  const std::string& element() const noexcept { return element_; }
  const Frac& frac() const noexcept { return frac_; }

 private:
  Site(std::string element, Frac frac) : element_(std::move(element)), frac_(frac) {}

  std::string element_;
  Frac frac_;
};

enum class StructureSource { generated, reference, replay };

constexpr std::string_view to_string(StructureSource s) noexcept {
  switch (s) {
    case StructureSource::generated: return "generated";
    case StructureSource::reference: return "reference";
    case StructureSource::replay: return "replay";
  }
  return "generated";
}

inline StructureSource structure_source_from(std::string_view s) {
  if (s == "reference") return StructureSource::reference;
  if (s == "replay") return StructureSource::replay;
  if (s == "generated") return StructureSource::generated;
  throw Error(Errc::ValidationError, "unknown structure source " + std::string(s));
}

inline Composition composition_of(const std::vector<Site>& sites) {
  Composition out;
  for (const auto& site : sites) ++out[site.element()];
  return out;
}

// A periodic crystal with explicit P1 sites. The reduced formula is always
// derived from the sites.
class Structure {
 public:
  static Structure make(Lattice lattice, std::vector<Site> sites,
                        StructureSource source = StructureSource::generated) {
    if (sites.empty()) throw Error(Errc::InvalidSite, "structure has no sites");
    auto composition = composition_of(sites);
    auto formula = reduce_formula(composition);
    return Structure(std::move(lattice), std::move(sites), std::move(composition),
                     std::move(formula), source);
  }

  const std::string& reduced_formula() const noexcept { return reduced_formula_; }
  const Lattice& lattice() const noexcept { return lattice_; }
  const std::vector<Site>& sites() const noexcept { return sites_; }
  const Composition& composition() const noexcept { return composition_; }
  StructureSource source() const noexcept { return source_; }

  Structure with_source(StructureSource source) const {
    Structure copy = *this;
    copy.source_ = source;
    return copy;
  }

 private:
  Structure(Lattice lattice, std::vector<Site> sites, Composition composition,
            std::string formula, StructureSource source)
      : reduced_formula_(std::move(formula)),
        lattice_(std::move(lattice)),
        sites_(std::move(sites)),
        composition_(std::move(composition)),
        source_(source) {}

  std::string reduced_formula_;
  Lattice lattice_;
  std::vector<Site> sites_;
  Composition composition_;
  StructureSource source_;
};

// Mass density in g/cm^3.
inline double density(const Structure& s,
                      const chem::ElementTable& table = chem::ElementTable::builtin()) {
  double mass_amu = 0.0;
  for (const auto& [symbol, count] : s.composition())
    mass_amu += static_cast<double>(count) * table.at(symbol).atomic_mass;
  const double volume_cm3 = cell_volume(s.lattice()) * 1e-24;
  return mass_amu * kAmuToGram / volume_cm3;
}

// Shortest distance between two fractional coordinates on the unit circle.
inline double periodic_delta(double x, double y) {
  const double d = std::fabs(x - y);
  return std::min(d, 1.0 - d);
}

// Field-wise comparison with an absolute tolerance on every numeric value;
// coordinates are compared modulo 1.
inline bool approx_equal(const Structure& x, const Structure& y, double tol = 1e-6) {
  if (x.reduced_formula() != y.reduced_formula() || x.source() != y.source()) return false;
  const auto px = x.lattice().parameters();
  const auto py = y.lattice().parameters();
  for (std::size_t i = 0; i < px.size(); ++i)
    if (std::fabs(px[i] - py[i]) > tol) return false;
  if (x.sites().size() != y.sites().size()) return false;
  for (std::size_t i = 0; i < x.sites().size(); ++i) {
    const auto& sx = x.sites()[i];
    const auto& sy = y.sites()[i];
    if (sx.element() != sy.element()) return false;
    for (std::size_t k = 0; k < 3; ++k)
      if (periodic_delta(sx.frac()[k], sy.frac()[k]) > tol) return false;
  }
  return true;
}

}  // namespace llema::crystal
