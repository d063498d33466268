#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "llema/crystal/formula.hpp"
#include "llema/crystal/structure.hpp"

namespace llema::crystal {

// Stand-in geometry for a composition known only by formula (reference
// database rows carry no structure). Atoms sit on a simple cubic grid with
// about 17.6 A^3 per atom; only the composition is meaningful.
inline Structure placeholder_structure(const Composition& composition,
                                       StructureSource source = StructureSource::reference) {
  const auto reduced = reduced_composition(composition);
  std::vector<std::string> atoms;
  for (const auto& [element, count] : reduced)
    for (long long i = 0; i < count; ++i) atoms.push_back(element);
  if (atoms.empty()) throw Error(Errc::EmptyComposition, "placeholder for empty composition");
  int g = 1;
  while (static_cast<std::size_t>(g) * g * g < atoms.size()) ++g;
  std::vector<Site> sites;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double x = static_cast<double>(i % g) / g;
    const double y = static_cast<double>((i / g) % g) / g;
    const double z = static_cast<double>(i / (static_cast<std::size_t>(g) * g)) / g;
    sites.push_back(Site::make(atoms[i], {x, y, z}));
  }
  const double a = 2.6 * g;
  return Structure::make(Lattice::make(a, a, a, 90, 90, 90), std::move(sites), source);
}

// A few textbook prototypes used to cold-start the rule-based generator when
// no reference database is configured.
inline std::vector<Structure> builtin_prototypes() {
  auto cubic = [](double a) { return Lattice::make(a, a, a, 90, 90, 90); };
  auto hex = [](double a, double c) { return Lattice::make(a, a, c, 90, 90, 120); };
  auto site = [](const char* e, double x, double y, double z) { return Site::make(e, {x, y, z}); };
  auto wurtzite = [&](const char* m, const char* x, double a, double c, double u) {
    return Structure::make(hex(a, c),
                           {site(m, 1.0 / 3, 2.0 / 3, 0), site(m, 2.0 / 3, 1.0 / 3, 0.5),
                            site(x, 1.0 / 3, 2.0 / 3, u), site(x, 2.0 / 3, 1.0 / 3, 0.5 + u)},
                           StructureSource::reference);
  };
  auto perovskite = [&](const char* a_site, const char* b_site, double a) {
    return Structure::make(cubic(a),
                           {site(a_site, 0, 0, 0), site(b_site, 0.5, 0.5, 0.5), site("O", 0.5, 0.5, 0),
                            site("O", 0.5, 0, 0.5), site("O", 0, 0.5, 0.5)},
                           StructureSource::reference);
  };
  const std::vector<std::array<double, 3>> fcc{{0, 0, 0}, {0, 0.5, 0.5}, {0.5, 0, 0.5}, {0.5, 0.5, 0}};
  std::vector<Site> rocksalt, fluorite;
  for (const auto& p : fcc) {
    rocksalt.push_back(site("Mg", p[0], p[1], p[2]));
    rocksalt.push_back(site("O", wrap_fractional(p[0] + 0.5), p[1], p[2]));
    fluorite.push_back(site("Ca", p[0], p[1], p[2]));
  }
  for (double x : {0.25, 0.75})
    for (double y : {0.25, 0.75})
      for (double z : {0.25, 0.75}) fluorite.push_back(site("F", x, y, z));
  return {Structure::make(cubic(4.21), std::move(rocksalt), StructureSource::reference),
          wurtzite("Zn", "O", 3.25, 5.21, 0.382),
          wurtzite("Ga", "N", 3.19, 5.19, 0.377),
          perovskite("Ba", "Ti", 4.0),
          perovskite("Sr", "Ti", 3.905),
          Structure::make(cubic(5.46), std::move(fluorite), StructureSource::reference)};
}

}  // namespace llema::crystal
