#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "llema/crystal/cif.hpp"
#include "llema/crystal/formula.hpp"
#include "llema/crystal/payload.hpp"
#include "llema/crystal/structure.hpp"
#include "support/fuzz.hpp"

using namespace llema;
using namespace llema::crystal;

namespace {

std::string read_fixture(const std::string& name) {
  std::ifstream in(std::string(LLEMA_FIXTURES) + "/" + name);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <class F>
Errc error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an llema::Error";
  return Errc::IoError;
}

Structure batio3() {
  return Structure::make(Lattice::cubic(4.0), {Site::make("Ba", {0, 0, 0}),
                                               Site::make("Ti", {0.5, 0.5, 0.5}),
                                               Site::make("O", {0.5, 0.5, 0}),
                                               Site::make("O", {0.5, 0, 0.5}),
                                               Site::make("O", {0, 0.5, 0.5})});
}

}  // namespace

TEST(ReduceFormula, DividesByGcdAndPutsOxygenLast) {
  EXPECT_EQ(reduce_formula({{"Hf", 2}, {"Zr", 2}, {"O", 8}}), "HfZrO4");
  EXPECT_EQ(reduce_formula({{"Si", 1}}), "Si");
  EXPECT_EQ(reduce_formula({{"Ba", 1}, {"Ti", 1}, {"O", 3}}), "BaTiO3");
  EXPECT_EQ(reduce_formula({{"Zn", 2}, {"O", 1}}), "Zn2O");
}

TEST(ReduceFormula, EmptyCompositionIsAnError) {
  EXPECT_EQ(error_code([] { reduce_formula({}); }), Errc::EmptyComposition);
}

TEST(ReduceFormula, ScaleInvariant) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Composition c;
    const auto& elements = chem::ElementTable::builtin().elements();
    const auto n = 1 + uniform_index(rng, 5);
    for (std::uint64_t i = 0; i < n; ++i)
      c[elements[uniform_index(rng, elements.size())].symbol] =
          1 + static_cast<long long>(uniform_index(rng, 12));
    const long long k = 1 + static_cast<long long>(uniform_index(rng, 9));
    Composition scaled;
    for (const auto& [s, count] : c) scaled[s] = count * k;
    EXPECT_EQ(reduce_formula(scaled), reduce_formula(c));
  }
}

TEST(ParseFormula, CanonicalizesAnyOrder) {
  EXPECT_EQ(canonical_formula("O3Ti1Ba1"), "BaTiO3");
  EXPECT_EQ(canonical_formula("Ba2Ti2O6"), "BaTiO3");
  EXPECT_EQ(canonical_formula("OZn2"), "Zn2O");
  EXPECT_EQ(error_code([] { parse_formula("ba"); }), Errc::MalformedFormula);
  EXPECT_EQ(error_code([] { parse_formula(""); }), Errc::EmptyComposition);
}

TEST(Prototype, AnonymizesStoichiometry) {
  EXPECT_EQ(prototype_key(parse_formula("BaTiO3")), "1:1:3");
  EXPECT_EQ(prototype_key(parse_formula("Ba2Ti2O6")), "1:1:3");
  EXPECT_EQ(prototype_key(parse_formula("BaZr2O5")), "1:2:5");
}

TEST(CellVolume, OrthogonalCells) {
  EXPECT_DOUBLE_EQ(cell_volume(Lattice::cubic(4.0)), 64.0);
  EXPECT_DOUBLE_EQ(cell_volume(Lattice::make(3, 4, 5, 90, 90, 90)), 60.0);
}

TEST(CellVolume, HexagonalCellMatchesAbcSinGamma) {
  const double oracle = 3.0 * 3.0 * 5.0 * std::sin(120.0 * std::numbers::pi / 180.0);
  const double v = cell_volume(Lattice::make(3, 3, 5, 90, 90, 120));
  EXPECT_NEAR(v, oracle, 1e-12);
  EXPECT_NEAR(v, 38.9711, 1e-4);
}

TEST(CellVolume, RightAnglesGiveExactProduct) {
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const double a = fuzz::uniform(rng, 0.5, 30), b = fuzz::uniform(rng, 0.5, 30),
                 c = fuzz::uniform(rng, 0.5, 30);
    EXPECT_EQ(cell_volume(Lattice::make(a, b, c, 90, 90, 90)), a * b * c);
  }
}

TEST(CellVolume, DegenerateAnglesRejected) {
  EXPECT_EQ(error_code([] { cell_volume(4, 4, 4, 120, 120, 120); }), Errc::DegenerateCell);
  EXPECT_EQ(error_code([] { Lattice::make(4, 4, 4, 120, 120, 120); }), Errc::InvalidLattice);
  EXPECT_EQ(error_code([] { Lattice::make(4, 4, 4, 90, 90, 180); }), Errc::InvalidLattice);
  EXPECT_EQ(error_code([] { Lattice::make(0, 4, 4, 90, 90, 90); }), Errc::InvalidLattice);
}

TEST(Density, RockSaltAgainstHandFormula) {
  std::vector<Site> sites;
  for (const Frac f : {Frac{0, 0, 0}, Frac{0.5, 0.5, 0}, Frac{0.5, 0, 0.5}, Frac{0, 0.5, 0.5}})
    sites.push_back(Site::make("Na", f));
  for (const Frac f : {Frac{0.5, 0, 0}, Frac{0, 0.5, 0}, Frac{0, 0, 0.5}, Frac{0.5, 0.5, 0.5}})
    sites.push_back(Site::make("Cl", f));
  const auto nacl = Structure::make(Lattice::cubic(5.64), std::move(sites));
  // sum(m) / (V * N_A) with m in g/mol and V in cm^3.
  const double oracle = (4 * 22.990 + 4 * 35.453) / (std::pow(5.64, 3) * 1e-24 * 6.02214076e23);
  EXPECT_NEAR(density(nacl), oracle, 1e-6 * oracle);
  EXPECT_NEAR(density(nacl), 2.164, 0.01 * 2.164);
}

TEST(Density, DiamondSilicon) {
  std::vector<Site> sites;
  for (const Frac f : {Frac{0, 0, 0}, Frac{0.5, 0.5, 0}, Frac{0.5, 0, 0.5}, Frac{0, 0.5, 0.5},
                       Frac{0.25, 0.25, 0.25}, Frac{0.75, 0.75, 0.25}, Frac{0.75, 0.25, 0.75},
                       Frac{0.25, 0.75, 0.75}})
    sites.push_back(Site::make("Si", f));
  const auto si = Structure::make(Lattice::cubic(5.431), std::move(sites));
  const double oracle = 8 * 28.085 / (std::pow(5.431, 3) * 1e-24 * 6.02214076e23);
  EXPECT_NEAR(density(si), oracle, 1e-6 * oracle);
  EXPECT_NEAR(density(si), 2.329, 0.002);
}

TEST(Density, InvariantUnderSupercells) {
  Rng rng(99);
  for (int i = 0; i < 200; ++i) {
    const auto s = fuzz::random_structure(rng, 6);
    const int k = 2 + static_cast<int>(uniform_index(rng, 3));
    const auto big = fuzz::replicate_along_a(s, k);
    EXPECT_NEAR(density(big), density(s), 1e-9 * density(s));
    EXPECT_EQ(big.reduced_formula(), s.reduced_formula());
  }
}

TEST(Site, CoordinatesWrapIntoUnitInterval) {
  const auto site = Site::make("Si", {1.25, -0.25, 3.0});
  EXPECT_DOUBLE_EQ(site.frac()[0], 0.25);
  EXPECT_DOUBLE_EQ(site.frac()[1], 0.75);
  EXPECT_DOUBLE_EQ(site.frac()[2], 0.0);
  const auto tiny = Site::make("Si", {-1e-18, 0, 0});
  EXPECT_GE(tiny.frac()[0], 0.0);
  EXPECT_LT(tiny.frac()[0], 1.0);
  EXPECT_EQ(error_code([] { Site::make("Xx", {0, 0, 0}); }), Errc::UnknownElement);
}

TEST(Structure, FormulaComesFromSites) {
  EXPECT_EQ(batio3().reduced_formula(), "BaTiO3");
  EXPECT_EQ(error_code([] { Structure::make(Lattice::cubic(3), {}); }), Errc::InvalidSite);
}

TEST(ParseCif, MinimalSilicon) {
  const auto s = parse_cif(read_fixture("cif/si_minimal.cif"));
  EXPECT_EQ(s.reduced_formula(), "Si");
  ASSERT_EQ(s.sites().size(), 1u);
  EXPECT_DOUBLE_EQ(s.lattice().a(), 5.431);
  EXPECT_DOUBLE_EQ(s.lattice().b(), s.lattice().a());
  EXPECT_DOUBLE_EQ(s.lattice().c(), s.lattice().a());
  EXPECT_DOUBLE_EQ(s.lattice().alpha(), 90.0);
  EXPECT_DOUBLE_EQ(s.lattice().gamma(), 90.0);
}

TEST(ParseCif, WrapsCoordinates) {
  const auto s = parse_cif(read_fixture("cif/wrapped_coordinate.cif"));
  EXPECT_DOUBLE_EQ(s.sites()[0].frac()[0], 0.25);
  EXPECT_DOUBLE_EQ(s.sites()[0].frac()[1], 0.75);
}

TEST(ParseCif, NegativeLengthIsInvalidLattice) {
  EXPECT_EQ(error_code([] { parse_cif(read_fixture("cif/negative_length.cif")); }),
            Errc::InvalidLattice);
}

TEST(ParseCif, ToleratesCommonCifSyntax) {
  const auto s = parse_cif(read_fixture("cif/nacl_verbose.cif"));
  EXPECT_EQ(s.reduced_formula(), "ClNa");
  EXPECT_EQ(s.sites().size(), 8u);
  EXPECT_DOUBLE_EQ(s.lattice().a(), 5.64);
  EXPECT_NEAR(density(s), 2.164, 0.01 * 2.164);
}

TEST(ParseCif, ErrorPaths) {
  const std::string cell =
      "data_x\n_cell_length_a 4\n_cell_length_b 4\n_cell_length_c 4\n"
      "_cell_angle_alpha 90\n_cell_angle_beta 90\n";
  const std::string loop =
      "loop_\n_atom_site_label\n_atom_site_fract_x\n_atom_site_fract_y\n_atom_site_fract_z\n";

  try {
    parse_cif(cell + loop + "Si1 0 0 0\n");
    FAIL() << "missing gamma accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MissingTag);
    EXPECT_NE(e.detail().find("_cell_angle_gamma"), std::string::npos);
  }
  try {
    parse_cif(cell + "_cell_angle_gamma 9O\n" + loop + "Si1 0 0 0\n");
    FAIL() << "bad number accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::MalformedNumber);
    EXPECT_NE(e.detail().find("line 7"), std::string::npos);
  }
  EXPECT_EQ(error_code([&] { parse_cif(cell + "_cell_angle_gamma 90\n" + loop + "Xq1 0 0 0\n"); }),
            Errc::UnknownElement);
  EXPECT_EQ(error_code([&] { parse_cif(cell + "_cell_angle_gamma 90\n"); }), Errc::MissingTag);
}

TEST(WriteCif, GoldenBaTiO3) {
  EXPECT_EQ(write_cif(batio3()), read_fixture("cif/batio3_golden.cif"));
}

TEST(WriteCif, RoundTripWithinTolerance) {
  Rng rng(2024);
  for (int i = 0; i < 300; ++i) {
    const auto source = static_cast<StructureSource>(uniform_index(rng, 3));
    const auto s = fuzz::random_structure(rng, 12, source);
    const auto back = parse_cif(write_cif(s));
    EXPECT_TRUE(approx_equal(s, back, 1e-6)) << write_cif(s);
  }
}

TEST(Payload, WellFormedZincOxide) {
  const auto payload = nlohmann::json::parse(R"({
    "formula": "ZnO",
    "lattice": {"a": 3.25, "b": 3.25, "c": 5.21, "alpha": 90, "beta": 90, "gamma": 120},
    "sites": [{"element": "Zn", "frac": [0.3333, 0.6667, 0.0]},
              {"element": "Zn", "frac": [0.6667, 0.3333, 0.5]},
              {"element": "O",  "frac": [0.3333, 0.6667, 0.375]},
              {"element": "O",  "frac": [0.6667, 0.3333, 0.875]}]})");
  const auto s = candidate_from_generation(payload);
  EXPECT_EQ(s.reduced_formula(), "ZnO");
  EXPECT_EQ(s.sites().size(), 4u);
  EXPECT_DOUBLE_EQ(s.lattice().gamma(), 120.0);
}

TEST(Payload, SitesOverrideDeclaredFormula) {
  const auto payload = nlohmann::json::parse(R"({
    "formula": "ZnO",
    "lattice": {"a": 4, "b": 4, "c": 4, "alpha": 90, "beta": 90, "gamma": 90},
    "sites": [{"element": "Zn", "frac": [0, 0, 0]}, {"element": "Zn", "frac": [0.5, 0.5, 0]},
              {"element": "O", "frac": [0.5, 0, 0.5]}]})");
  EXPECT_EQ(candidate_from_generation(payload).reduced_formula(), "Zn2O");
}

TEST(Payload, InvalidLatticeBecomesValidationError) {
  const auto payload = nlohmann::json::parse(R"({
    "formula": "Si",
    "lattice": {"a": 4, "b": 4, "c": 4, "alpha": 90, "beta": 90, "gamma": 200},
    "sites": [{"element": "Si", "frac": [0, 0, 0]}]})");
  try {
    candidate_from_generation(payload);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.code(), Errc::ValidationError);
    EXPECT_EQ(e.reason(), Errc::InvalidLattice);
  }
}

TEST(Payload, ReasonsForOtherDefects) {
  auto reason = [](const char* text) {
    try {
      candidate_from_generation(nlohmann::json::parse(text));
    } catch (const ValidationError& e) {
      return e.reason();
    }
    return Errc::IoError;
  };
  EXPECT_EQ(reason(R"({"lattice": {"a": 4, "b": 4, "c": 4, "alpha": 90, "beta": 90, "gamma": 90},
                       "sites": [{"element": "Qq", "frac": [0, 0, 0]}]})"),
            Errc::UnknownElement);
  EXPECT_EQ(reason(R"({"lattice": {"a": 4, "b": 4, "c": 4, "alpha": 90, "beta": 90, "gamma": 90},
                       "sites": []})"),
            Errc::InvalidSite);
  EXPECT_EQ(reason(R"({"lattice": {"a": "x", "b": 4, "c": 4, "alpha": 90, "beta": 90, "gamma": 90},
                       "sites": [{"element": "Si", "frac": [0, 0, 0]}]})"),
            Errc::MalformedNumber);
  EXPECT_EQ(reason(R"({"sites": []})"), Errc::MissingTag);
  EXPECT_EQ(reason(R"([1, 2])"), Errc::MissingTag);
}

TEST(Payload, RoundTripsThroughJson) {
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const auto s = fuzz::random_structure(rng);
    const auto back = candidate_from_generation(to_payload(s));
    EXPECT_TRUE(approx_equal(s, back, 0.0));
  }
}
