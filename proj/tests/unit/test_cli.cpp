#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "llema/cli/app.hpp"
#include "support/quiet_log.hpp"
#include "support/stub_server.hpp"

using namespace llema;
namespace fs = std::filesystem;

namespace {

std::string fixture_path(const std::string& name) { return std::string(LLEMA_FIXTURES) + "/" + name; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("llema_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    ::unsetenv("LLEMA_SURROGATE_URL");
    ::unsetenv("LLEMA_MP_BASE_URL");
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    args.insert(args.begin(), "llema");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    stdout_.str("");
    return cli::main(static_cast<int>(argv.size()), argv.data(), stdout_);
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
  std::ostringstream stdout_;
  fuzz::QuietLog log_;
};

}  // namespace

TEST_F(Cli, RunWritesAllOutputs) {
  const auto out = path("run");
  EXPECT_EQ(run({"run", "--task", "wide_bandgap", "--generator", "rules", "--iterations", "50", "--seed", "7",
                 "--out", out, "--surrogate", "synthetic"}),
            0);
  for (const char* f : evolve::kRunFiles) EXPECT_TRUE(fs::exists(fs::path(out) / f)) << f;
  std::ifstream in(fs::path(out) / "candidates.jsonl");
  EXPECT_EQ(evolve::read_records(in).size(), 100u);

  EXPECT_EQ(run({"run", "--task", "wide_bandgap", "--out", out}), 2);
  EXPECT_TRUE(log_.saw("command_failed"));
  EXPECT_EQ(run({"run", "--task", "wide_bandgap", "--iterations", "2", "--out", out, "--force"}), 0);
}

TEST_F(Cli, ConfigErrors) {
  EXPECT_EQ(run({"run", "--task", "no_such_task", "--out", path("x")}), 2);
  EXPECT_EQ(log_.lines.back()["code"], "UnknownTask");
  EXPECT_EQ(run({"run", "--task", "wide_bandgap", "--generator", "replay:" + path("missing.jsonl"), "--out",
                 path("y")}),
            2);
  EXPECT_EQ(run({"run", "--task", "wide_bandgap", "--generator", "magic", "--out", path("z")}), 2);
  EXPECT_EQ(run({"run", "--task", "wide_bandgap", "--iterations", "0", "--out", path("z")}), 2);
  EXPECT_EQ(run({"run", "--task", "wide_bandgap", "--surrogate", "oracle", "--out", path("z")}), 2);
  EXPECT_EQ(run({"run", "--iterations", "abc"}), 2);
  EXPECT_EQ(run({"frobnicate"}), 2);
  EXPECT_EQ(run({"run", "--out", path("z")}), 2);
}

TEST_F(Cli, ConfigFileWithFlagOverride) {
  const auto cfg = path("run.toml");
  std::ofstream(cfg) << "task = \"hard_coatings\"\niterations = 7\nbatch = 3\nout = \"" << path("from_file")
                     << "\"\nfallback_rules = true\nsurrogate = \"synthetic\"\n";
  EXPECT_EQ(run({"run", "--config", cfg, "--iterations", "4"}), 0);
  std::ifstream in(fs::path(path("from_file")) / "candidates.jsonl");
  const auto records = evolve::read_records(in);
  EXPECT_EQ(records.size(), 12u);
  EXPECT_EQ(records.back().iteration, 4);

  std::ofstream(path("bad.toml")) << "itrations = 3\n";
  EXPECT_EQ(run({"run", "--config", path("bad.toml"), "--task", "wide_bandgap"}), 2);
  std::ofstream(path("typed.toml")) << "iterations = \"three\"\n";
  EXPECT_EQ(run({"run", "--config", path("typed.toml"), "--task", "wide_bandgap"}), 2);
  EXPECT_EQ(run({"run", "--config", path("absent.toml"), "--task", "wide_bandgap"}), 2);
}

TEST_F(Cli, ReportIsIdempotent) {
  const auto out = path("run");
  ASSERT_EQ(run({"run", "--task", "wide_bandgap", "--generator", "replay:" + fixture_path("campaign/wide_bandgap_20.jsonl"),
                 "--iterations", "10", "--db", fixture_path("reference_db.csv"), "--out", out}),
            0);
  const auto rep = path("report");
  ASSERT_EQ(run({"report", "--task", "wide_bandgap", "--records", out + "/candidates.jsonl", "--db",
                 fixture_path("reference_db.csv"), "--out", rep}),
            0);
  EXPECT_EQ(slurp(fs::path(rep) / "summary.json"), slurp(fs::path(out) / "summary.json"));
  EXPECT_EQ(stdout_.str(), slurp(fs::path(out) / "summary.json"));
  EXPECT_EQ(slurp(fs::path(rep) / "pareto.csv"), slurp(fs::path(out) / "pareto.csv"));
  EXPECT_TRUE(fs::exists(fs::path(rep) / "coverage.csv"));
  EXPECT_EQ(slurp(fs::path(rep) / "coverage.csv").rfind("element,ratio\n", 0), 0u);
}

TEST_F(Cli, ReportWindowsAndEmptyFront) {
  const auto out = path("run");
  ASSERT_EQ(run({"run", "--task", "wide_bandgap", "--generator", "replay:" + fixture_path("replay/four_lines.jsonl"),
                 "--iterations", "60", "--batch", "1", "--out", out, "--surrogate", "none"}),
            0);
  EXPECT_EQ(slurp(fs::path(out) / "pareto.csv"), "x,y,formula,on_front\n");
  ASSERT_EQ(run({"report", "--task", "wide_bandgap", "--records", out + "/candidates.jsonl", "--window", "25",
                 "--out", path("rep")}),
            0);
  const auto summary = nlohmann::json::parse(stdout_.str());
  EXPECT_EQ(summary["trace"].size(), 1u);
  EXPECT_EQ(summary["hit_rate"], 0.0);
  EXPECT_TRUE(summary["pareto_front"].empty());
}

TEST_F(Cli, ReportBadStreams) {
  EXPECT_EQ(run({"report", "--task", "wide_bandgap", "--records", path("none.jsonl")}), 2);
  std::ofstream(path("corrupt.jsonl")) << "{\"iteration\": 1}\n";
  EXPECT_EQ(run({"report", "--task", "wide_bandgap", "--records", path("corrupt.jsonl")}), 2);
  EXPECT_EQ(log_.lines.back()["code"], "CorruptStream");
}

TEST_F(Cli, ScoreKnownAndUnknown) {
  ASSERT_EQ(run({"score", "--task", "wide_bandgap", "--cif", fixture_path("cif/batio3_golden.cif"), "--db",
                 fixture_path("reference_db.csv")}),
            0);
  auto j = nlohmann::json::parse(stdout_.str());
  EXPECT_EQ(j["formula"], "BaTiO3");
  for (const char* p : {"band_gap", "formation_energy", "energy_above_hull"})
    EXPECT_EQ(j["properties"][p]["source"], "reference") << p;
  EXPECT_EQ(j["properties"]["band_gap"]["value"], 1.9);
  // Gap 1.9 < 2.5 fails; formation energy and hull pass.
  EXPECT_EQ(j["score"]["success"], false);
  EXPECT_DOUBLE_EQ(j["score"]["constraints"][0]["phi"].get<double>(), -0.6 / 2.5);
  EXPECT_EQ(j["score"]["constraints"][1]["phi"], 1.0);

  ASSERT_EQ(run({"score", "--task", "wide_bandgap", "--cif", fixture_path("cif/si_minimal.cif")}), 0);
  j = nlohmann::json::parse(stdout_.str());
  EXPECT_EQ(j["properties"]["band_gap"]["source"], "missing");
  for (const auto& c : j["score"]["constraints"]) EXPECT_EQ(c["phi"], -1.0);

  EXPECT_EQ(run({"score", "--task", "wide_bandgap", "--cif", fixture_path("cif/negative_length.cif")}), 2);
  EXPECT_EQ(run({"score", "--task", "wide_bandgap", "--cif", path("nothing.cif")}), 2);
}

TEST_F(Cli, UnavailableLlm) {
  fuzz::StubServer stub;
  stub.server.Post("/v1/chat/completions", [](const httplib::Request&, httplib::Response& res) { res.status = 503; });
  stub.start();
  ::setenv("LLEMA_LLM_BASE_URL", stub.url().c_str(), 1);
  EXPECT_EQ(run({"run", "--task", "wide_bandgap", "--generator", "llm", "--iterations", "1", "--out", path("a")}), 3);
  EXPECT_EQ(log_.lines.back()["code"], "GeneratorUnavailable");
  EXPECT_EQ(run({"run", "--task", "wide_bandgap", "--generator", "llm", "--iterations", "2", "--fallback-rules",
                 "--out", path("b")}),
            0);
  EXPECT_TRUE(log_.saw("generator_fallback"));
  ::unsetenv("LLEMA_LLM_BASE_URL");
  EXPECT_EQ(run({"run", "--task", "wide_bandgap", "--generator", "llm", "--out", path("c")}), 2);
}
