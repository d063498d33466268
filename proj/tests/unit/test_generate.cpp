#include <atomic>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "llema/generate/llm.hpp"
#include "llema/generate/parse.hpp"
#include "llema/generate/prompt.hpp"
#include "llema/generate/replay.hpp"
#include "llema/generate/rule_based.hpp"
#include "support/fuzz.hpp"
#include "support/stub_server.hpp"

using namespace llema;
using namespace llema::generate;

namespace {

std::string fixture_path(const std::string& name) { return std::string(LLEMA_FIXTURES) + "/" + name; }

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Demonstration demo(const Task& task, const std::string& formula,
                   std::vector<std::pair<Property, double>> values) {
  Demonstration d;
  const auto comp = crystal::parse_formula(formula);
  std::vector<std::pair<std::string, int>> counts;
  for (const auto& [e, n] : comp) counts.emplace_back(e, static_cast<int>(n));
  d.structure = fuzz::simple_structure(counts);
  d.formula = d.structure->reduced_formula();
  for (const auto& [p, v] : values) d.properties.set(p, v, ValueSource::reference);
  d.score = composite_score(d.properties, task, &d.structure->composition());
  d.pool = pool_of(d.score);
  return d;
}

GenerationRequest golden_request(const std::string& task_name) {
  GenerationRequest req;
  req.task = builtin_task(task_name);
  req.iteration = 3;
  req.batch = 2;
  req.rules = chem::rule_prompt_lines();
  using P = Property;
  if (task_name == "wide_bandgap") {
    req.demonstrations = {
        demo(req.task, "AlN", {{P::band_gap, 4.05}, {P::formation_energy, -1.61}, {P::energy_above_hull, 0}}),
        demo(req.task, "GaN", {{P::band_gap, 1.73}, {P::formation_energy, -0.66}, {P::energy_above_hull, 0}})};
  } else if (task_name == "toxic_free_perovskite") {
    req.demonstrations = {
        demo(req.task, "BaZrO3", {{P::band_gap, 3.1}, {P::bulk_modulus, 120}}),
        demo(req.task, "PbTiO3", {{P::band_gap, 1.7}, {P::bulk_modulus, 100}})};
  } else {
    req.demonstrations = {demo(req.task, "ZnO", {{P::seebeck, -180}})};
  }
  return req;
}

void check_golden(const std::string& task_name) {
  const auto text = build_prompt(golden_request(task_name));
  const auto path = fixture_path("prompts/" + task_name + ".txt");
  if (std::getenv("LLEMA_UPDATE_GOLDEN")) {
    std::ofstream(path) << text;
    GTEST_SKIP() << "rewrote " << path;
  }
  EXPECT_EQ(text, read_file(path));
}

const char* kTwoCandidates = R"([
  {"formula": "ZnO", "lattice": {"a": 3.25, "b": 3.25, "c": 5.21, "alpha": 90, "beta": 90, "gamma": 120},
   "sites": [{"element": "Zn", "frac": [0.3333, 0.6667, 0.0]}, {"element": "O", "frac": [0.3333, 0.6667, 0.375]}]},
  {"formula": "MgO", "lattice": {"a": 4.21, "b": 4.21, "c": 4.21, "alpha": 90, "beta": 90, "gamma": 90},
   "sites": [{"element": "Mg", "frac": [0, 0, 0]}, {"element": "O", "frac": [0.5, 0.5, 0.5]}]}
])";

}  // namespace

TEST(Prompt, FirstIterationHasNoRules) {
  GenerationRequest req;
  req.task = builtin_task("wide_bandgap");
  const auto text = build_prompt(req);
  EXPECT_NE(text.find("2.5"), std::string::npos);
  EXPECT_NE(text.find("eV"), std::string::npos);
  EXPECT_EQ(text.find("## Design rules"), std::string::npos);
  EXPECT_NE(text.find("exactly 2 new candidates"), std::string::npos);
}

TEST(Prompt, SectionsInOrderWithDemoBlocks) {
  auto req = golden_request("wide_bandgap");
  req.demonstrations.push_back(req.demonstrations[0]);
  req.demonstrations.push_back(req.demonstrations[1]);
  req.batch = 5;
  const auto text = build_prompt(req);
  const auto objective = text.find("## Objective");
  const auto rules = text.find("## Design rules");
  const auto examples = text.find("## Examples");
  const auto format = text.find("## Output format");
  EXPECT_LT(objective, rules);
  EXPECT_LT(rules, examples);
  EXPECT_LT(examples, format);
  std::size_t blocks = 0;
  for (auto pos = text.find("### Example"); pos != std::string::npos;
       pos = text.find("### Example", pos + 1))
    ++blocks;
  EXPECT_EQ(blocks, 4u);
  EXPECT_NE(text.find("exactly 5 new candidates"), std::string::npos);
  EXPECT_EQ(build_prompt(req), text);
}

TEST(Prompt, GoldenWideBandgap) { check_golden("wide_bandgap"); }
TEST(Prompt, GoldenToxicFreePerovskite) { check_golden("toxic_free_perovskite"); }
TEST(Prompt, GoldenTransparentConductors) { check_golden("transparent_conductors"); }

TEST(Parse, CleanArray) {
  const auto out = parse_candidates(kTwoCandidates);
  EXPECT_EQ(out.candidates.size(), 2u);
  EXPECT_TRUE(out.rejects.empty());
  EXPECT_EQ(out.candidates[1].reduced_formula(), "MgO");
}

TEST(Parse, ProseFencesAndCitations) {
  const auto text = std::string("Based on rule [1], here you go:\n```json\n") + kTwoCandidates +
                    "\n```\nLet me know [if] you need more.";
  const auto out = parse_candidates(text);
  EXPECT_EQ(out.candidates.size(), 2u);
}

TEST(Parse, InvalidEntryBecomesReject) {
  const auto out = parse_candidates(R"([
    {"lattice": {"a": 4, "b": 4, "c": 4, "alpha": 90, "beta": 90, "gamma": 90},
     "sites": [{"element": "Si", "frac": [0, 0, 0]}]},
    {"lattice": {"a": -4, "b": 4, "c": 4, "alpha": 90, "beta": 90, "gamma": 90},
     "sites": [{"element": "Si", "frac": [0, 0, 0]}]}])");
  ASSERT_EQ(out.candidates.size(), 1u);
  ASSERT_EQ(out.rejects.size(), 1u);
  EXPECT_EQ(out.rejects[0].reason, Errc::InvalidLattice);
  EXPECT_EQ(out.rejects[0].payload["lattice"]["a"], -4);
}

TEST(Parse, NoArray) {
  try {
    parse_candidates("I cannot help with that.");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoJsonFound);
  }
  EXPECT_THROW(parse_candidates("[1, 2] and [unclosed"), Error);
}

TEST(Parse, BracketsInsideStrings) {
  const auto out = parse_candidates(R"(["]", {"formula": "x]"}])");
  EXPECT_EQ(out.rejects.size(), 2u);
}

TEST(Replay, BatchesCursorAndEof) {
  ReplayGenerator gen(fixture_path("replay/four_lines.jsonl"));
  EXPECT_EQ(gen.size(), 5u);
  GenerationRequest req;
  req.batch = 2;
  auto first = gen.generate(req);
  ASSERT_EQ(first.candidates.size(), 2u);
  EXPECT_EQ(first.candidates[0].reduced_formula(), "ZnO");
  EXPECT_EQ(first.candidates[0].source(), crystal::StructureSource::replay);
  auto second = gen.generate(req);
  EXPECT_EQ(second.candidates.size(), 1u);
  ASSERT_EQ(second.rejects.size(), 1u);
  EXPECT_EQ(second.rejects[0].reason, Errc::UnknownElement);
  auto third = gen.generate(req);
  EXPECT_TRUE(third.candidates.empty());
  ASSERT_EQ(third.rejects.size(), 1u);
  EXPECT_EQ(third.rejects[0].reason, Errc::CorruptStream);
  EXPECT_EQ(third.rejects[0].payload, "this line is not json");
  const auto past = gen.generate(req);
  EXPECT_TRUE(past.candidates.empty());
  EXPECT_TRUE(past.rejects.empty());
  EXPECT_THROW(ReplayGenerator("/nonexistent.jsonl"), Error);
}

TEST(RuleBased, SameGroupFromGalliumOxide) {
  const auto task = builtin_task("wide_bandgap");
  GenerationRequest req;
  req.task = task;
  req.batch = 1;
  auto parent = demo(task, "Ga2O3", {{Property::band_gap, 4.8}, {Property::formation_energy, -2.3},
                                     {Property::energy_above_hull, 0.0}});
  ASSERT_EQ(parent.pool, Pool::success);
  req.demonstrations = {parent};
  std::set<std::string> seen;
  bool found = false;
  for (std::uint64_t seed = 0; seed < 200 && !found; ++seed) {
    RuleBasedGenerator gen(seed, {}, {chem::RuleId::same_group_substitution});
    const auto out = gen.generate(req);
    ASSERT_EQ(out.candidates.size(), 1u);
    const auto& f = out.candidates[0].reduced_formula();
    seen.insert(f);
    found = f == "Al2O3";
  }
  EXPECT_TRUE(found);
  for (const auto& f : seen) {
    const auto comp = crystal::parse_formula(f);
    for (const auto& [e, n] : comp) {
      const int g = chem::ElementTable::builtin().at(e).group;
      EXPECT_TRUE(g == 13 || g == 16) << f;
    }
  }
}

TEST(RuleBased, NothingToMutate) {
  RuleBasedGenerator gen(1);
  GenerationRequest req;
  req.task = builtin_task("wide_bandgap");
  try {
    gen.generate(req);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ExhaustedAttempts);
  }
}

TEST(RuleBased, SeedsAndDeterminism) {
  const std::vector<crystal::Structure> seeds{fuzz::simple_structure({{"Zn", 1}, {"O", 1}}),
                                              fuzz::simple_structure({{"Ba", 1}, {"Ti", 1}, {"O", 3}})};
  GenerationRequest req;
  req.task = builtin_task("wide_bandgap");
  req.batch = 4;
  RuleBasedGenerator a(77, seeds), b(77, seeds);
  for (int round = 0; round < 10; ++round) {
    const auto x = a.generate(req);
    const auto y = b.generate(req);
    ASSERT_EQ(x.candidates.size(), y.candidates.size());
    std::set<std::string> formulas;
    for (std::size_t i = 0; i < x.candidates.size(); ++i) {
      EXPECT_TRUE(crystal::approx_equal(x.candidates[i], y.candidates[i], 0.0));
      EXPECT_TRUE(formulas.insert(x.candidates[i].reduced_formula()).second);
    }
    EXPECT_LE(x.candidates.size(), 4u);
  }
}

TEST(RuleBased, FuzzedParentsAlwaysGiveValidStructures) {
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    std::vector<crystal::Structure> seeds{fuzz::random_structure(rng, 6)};
    RuleBasedGenerator gen(static_cast<std::uint64_t>(i), seeds);
    GenerationRequest req;
    req.batch = 3;
    try {
      for (const auto& s : gen.generate(req).candidates) {
        const auto back = crystal::candidate_from_generation(crystal::to_payload(s));
        EXPECT_EQ(back.reduced_formula(), s.reduced_formula());
      }
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::ExhaustedAttempts);
    }
  }
}

TEST(Llm, PassThroughWithDefaults) {
  fuzz::StubServer stub;
  nlohmann::json seen;
  std::string auth;
  stub.server.Post("/api/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    seen = nlohmann::json::parse(req.body);
    auth = req.get_header_value("Authorization");
    nlohmann::json reply = {{"choices", {{{"message", {{"role", "assistant"}, {"content", kTwoCandidates}}}}}}};
    res.set_content(reply.dump(), "application/json");
  });
  stub.start();
  LlmConfig cfg;
  cfg.base_url = stub.url() + "/api";
  cfg.api_key = "k";
  cfg.model = "test-model";
  LlmGenerator gen(cfg);
  GenerationRequest req;
  req.task = builtin_task("wide_bandgap");
  const auto out = gen.generate(req);
  const auto expected = parse_candidates(kTwoCandidates);
  ASSERT_EQ(out.candidates.size(), expected.candidates.size());
  for (std::size_t i = 0; i < out.candidates.size(); ++i)
    EXPECT_TRUE(crystal::approx_equal(out.candidates[i], expected.candidates[i], 0.0));
  EXPECT_EQ(out.transcript, std::string(kTwoCandidates));
  EXPECT_EQ(seen["temperature"], 0.8);
  EXPECT_EQ(seen["model"], "test-model");
  EXPECT_EQ(seen["messages"][0]["content"], build_prompt(req));
  EXPECT_EQ(auth, "Bearer k");
  EXPECT_EQ(gen.tag(), "llm:test-model");
}

TEST(Llm, ServerErrorsExhaustRetries) {
  fuzz::StubServer stub;
  std::atomic<int> calls{0};
  stub.server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 500;
  });
  stub.start();
  LlmConfig cfg;
  cfg.base_url = stub.url();
  cfg.policy.backoff = std::chrono::milliseconds(1);
  LlmGenerator gen(cfg);
  GenerationRequest req;
  req.task = builtin_task("wide_bandgap");
  try {
    gen.generate(req);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::GeneratorUnavailable);
  }
  EXPECT_EQ(calls.load(), 3);
}

TEST(Llm, ProseReplyBecomesSingleReject) {
  fuzz::StubServer stub;
  stub.server.Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
    nlohmann::json reply = {{"choices", {{{"message", {{"content", "Sorry, no."}}}}}}};
    res.set_content(reply.dump(), "application/json");
  });
  stub.start();
  LlmConfig cfg;
  cfg.base_url = stub.url();
  LlmGenerator gen(cfg);
  GenerationRequest req;
  req.task = builtin_task("wide_bandgap");
  const auto out = gen.generate(req);
  EXPECT_TRUE(out.candidates.empty());
  ASSERT_EQ(out.rejects.size(), 1u);
  EXPECT_EQ(out.rejects[0].reason, Errc::NoJsonFound);
  EXPECT_THROW(LlmGenerator(LlmConfig{}), Error);
}
