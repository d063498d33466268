#pragma once

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <toml.hpp>

#include "llema/crystal/cif.hpp"
#include "llema/crystal/prototypes.hpp"
#include "llema/detail/log.hpp"
#include "llema/evolve/campaign.hpp"
#include "llema/evolve/outputs.hpp"
#include "llema/generate/llm.hpp"
#include "llema/generate/replay.hpp"
#include "llema/generate/rule_based.hpp"
#include "llema/oracle/remote_reference.hpp"
#include "llema/tasks/task_io.hpp"

namespace llema::cli {

enum ExitCode : int { kOk = 0, kInternal = 1, kConfig = 2, kGeneratorUnavailable = 3 };

struct OracleOptions {
  std::string db;
  std::string surrogate = "auto";  // auto | none | synthetic | an http(s) URL
  std::uint64_t surrogate_seed = 0;
};

struct RunOptions {
  std::string task;
  std::string generator = "rules";
  int iterations = 50;
  int batch = 2;
  int islands = 5;
  int demos = 2;
  std::uint64_t seed = 0;
  std::string out = "out";
  int window = 10;
  bool force = false;
  bool fallback_rules = false;
  std::string model = "gpt-4o-mini";
  double sampling_temperature = 0.8;
  OracleOptions oracle;
};

// Owns the pieces an Oracle points into.
struct OracleBundle {
  std::optional<oracle::ReferenceDB> db;
  oracle::Oracle oracle;
};

inline std::unique_ptr<OracleBundle> make_oracle(const OracleOptions& opt) {
  auto out = std::make_unique<OracleBundle>();
  if (!opt.db.empty()) {
    out->db = oracle::ReferenceDB::load(opt.db);
    out->oracle.db = &*out->db;
  }
  out->oracle.remote = oracle::RemoteReference::from_env();
  std::string spec = opt.surrogate;
  if (spec == "auto") {
    const char* url = std::getenv("LLEMA_SURROGATE_URL");
    spec = url && *url ? url : "none";
  }
  if (spec == "synthetic")
    out->oracle.surrogates.push_back(std::make_shared<oracle::SyntheticSurrogate>(opt.surrogate_seed));
  else if (spec.rfind("http://", 0) == 0 || spec.rfind("https://", 0) == 0)
    out->oracle.surrogates.push_back(std::make_shared<oracle::RemoteSurrogate>(spec));
  else if (spec != "none")
    throw Error(Errc::InvalidConfig, "unknown surrogate '" + opt.surrogate + "'");
  return out;
}

inline std::unique_ptr<generate::Generator> make_generator(const RunOptions& opt) {
  const auto& g = opt.generator;
  if (g == "rules") return std::make_unique<generate::RuleBasedGenerator>(opt.seed, crystal::builtin_prototypes());
  if (g.rfind("replay:", 0) == 0) return std::make_unique<generate::ReplayGenerator>(g.substr(7));
  if (g == "llm" || g.rfind("llm:", 0) == 0) {
    auto cfg = generate::LlmConfig::from_env(g == "llm" ? opt.model : g.substr(4));
    if (cfg.base_url.empty()) throw Error(Errc::InvalidConfig, "LLEMA_LLM_BASE_URL is not set");
    return std::make_unique<generate::LlmGenerator>(std::move(cfg));
  }
  throw Error(Errc::InvalidConfig, "unknown generator '" + g + "'");
}

inline int cmd_run(const RunOptions& opt) {
  const auto task = load_task(opt.task);
  evolve::CampaignConfig cfg;
  cfg.islands = opt.islands;
  cfg.iterations = opt.iterations;
  cfg.batch = opt.batch;
  cfg.demos_per_pool = opt.demos;
  cfg.seed = opt.seed;
  cfg.window = opt.window;
  cfg.sampling_temperature = opt.sampling_temperature;
  cfg.validate();
  const auto bundle = make_oracle(opt.oracle);
  if (!bundle->oracle.db) cfg.seeds = crystal::builtin_prototypes();
  auto generator = make_generator(opt);
  std::unique_ptr<generate::Generator> fallback;
  if (opt.fallback_rules && opt.generator != "rules")
    fallback = std::make_unique<generate::RuleBasedGenerator>(opt.seed, crystal::builtin_prototypes());
  evolve::prepare_output_dir(opt.out, opt.force);
  const auto result = evolve::run_campaign(task, {&bundle->oracle, generator.get(), fallback.get()}, cfg);
  evolve::write_run(opt.out, result, task);
  log::info("run_complete", {{"records", result.records.size()},
                             {"hit_rate", result.metrics.hit_rate},
                             {"out", opt.out}});
  return kOk;
}

inline int cmd_score(const std::string& task_name, const std::string& cif_path, const OracleOptions& opt,
                     std::ostream& out) {
  const auto task = load_task(task_name);
  std::ifstream in(cif_path);
  if (!in) throw Error(Errc::IoError, "cannot open " + cif_path);
  std::stringstream buf;
  buf << in.rdbuf();
  const auto s = crystal::parse_cif(buf.str());
  const auto bundle = make_oracle(opt);
  const auto props = bundle->oracle(s, task.required_properties());
  const auto r = evolve::make_record(0, 0, s, props, task, "score");
  nlohmann::json phis = nlohmann::json::array();
  for (std::size_t i = 0; i < task.constraints.size(); ++i)
    phis.push_back({{"constraint", task.constraints[i].describe()},
                    {"weight", task.constraints[i].weight},
                    {"phi", r.score.per_constraint_phi[i]}});
  out << nlohmann::json{{"formula", s.reduced_formula()},
                        {"task", task.name},
                        {"properties", evolve::to_json(props)},
                        {"score", {{"composite", r.score.composite}, {"success", r.score.success}, {"constraints", phis}}}}
             .dump(2)
      << "\n";
  return kOk;
}

inline int cmd_report(const std::string& task_name, const std::string& records_path, const std::string& db,
                      int window, std::string out_dir, std::ostream& out) {
  const auto task = load_task(task_name);
  const auto records = evolve::load_records(records_path);
  std::optional<oracle::ReferenceDB> ref;
  if (!db.empty()) ref = oracle::ReferenceDB::load(db);
  const auto m = metrics::compute_metrics(records, task, ref ? &*ref : nullptr, window);
  if (out_dir.empty()) out_dir = std::filesystem::path(records_path).parent_path().string();
  if (out_dir.empty()) out_dir = ".";
  std::filesystem::create_directories(out_dir);
  evolve::write_report(out_dir, records, m, task);
  out << metrics::canonical_summary(m);
  return kOk;
}

// Keys are flag names without the dashes ('_' may stand for '-'). Flags
// given on the command line win over the file.
inline void apply_config_file(const std::string& path, const CLI::App& cmd, RunOptions& opt) {
  toml::table tbl;
  try {
    tbl = toml::parse_file(path);
  } catch (const toml::parse_error& e) {
    throw Error(Errc::InvalidConfig, path + ": " + std::string(e.description()));
  }
  for (const auto& [raw_key, node] : tbl) {
    std::string key(raw_key.str());
    std::replace(key.begin(), key.end(), '_', '-');
    const CLI::Option* flag = nullptr;
    try {
      flag = cmd.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw Error(Errc::InvalidConfig, path + ": unknown key '" + std::string(raw_key.str()) + "'");
    }
    if (flag->count() > 0 || key == "config") continue;
    auto text = [&] {
      if (auto v = node.value<std::string>()) return *v;
      throw Error(Errc::InvalidConfig, path + ": '" + key + "' must be a string");
    };
    auto integer = [&] {
      if (auto v = node.value<std::int64_t>()) return *v;
      throw Error(Errc::InvalidConfig, path + ": '" + key + "' must be an integer");
    };
    auto boolean = [&] {
      if (auto v = node.value<bool>()) return *v;
      throw Error(Errc::InvalidConfig, path + ": '" + key + "' must be a boolean");
    };
    if (key == "task") opt.task = text();
    else if (key == "generator") opt.generator = text();
    else if (key == "iterations") opt.iterations = static_cast<int>(integer());
    else if (key == "batch") opt.batch = static_cast<int>(integer());
    else if (key == "islands") opt.islands = static_cast<int>(integer());
    else if (key == "demos") opt.demos = static_cast<int>(integer());
    else if (key == "seed") opt.seed = static_cast<std::uint64_t>(integer());
    else if (key == "out") opt.out = text();
    else if (key == "window") opt.window = static_cast<int>(integer());
    else if (key == "force") opt.force = boolean();
    else if (key == "fallback-rules") opt.fallback_rules = boolean();
    else if (key == "model") opt.model = text();
    else if (key == "sampling-temperature") {
      if (auto v = node.value<double>()) opt.sampling_temperature = *v;
      else throw Error(Errc::InvalidConfig, path + ": 'sampling-temperature' must be a number");
    }
    else if (key == "db") opt.oracle.db = text();
    else if (key == "surrogate") opt.oracle.surrogate = text();
    else if (key == "surrogate-seed") opt.oracle.surrogate_seed = static_cast<std::uint64_t>(integer());
  }
}

inline void add_oracle_options(CLI::App* app, OracleOptions& opt) {
  app->add_option("--db", opt.db, "Reference database CSV");
  app->add_option("--surrogate", opt.surrogate, "auto, none, synthetic, or a surrogate service URL");
  app->add_option("--surrogate-seed", opt.surrogate_seed, "Seed of the synthetic surrogate");
}

inline int main(int argc, const char* const* argv, std::ostream& out = std::cout) {
  CLI::App app{"Constrained evolutionary materials search"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a campaign and write its outputs");
  std::string config;
  run_cmd->add_option("--config", config, "TOML file with the same keys as the flags");
  run_cmd->add_option("--task", run.task, "Builtin task name or task TOML file");
  run_cmd->add_option("--generator", run.generator, "rules, llm[:model] or replay:PATH");
  run_cmd->add_option("--iterations", run.iterations);
  run_cmd->add_option("--batch", run.batch);
  run_cmd->add_option("--islands", run.islands);
  run_cmd->add_option("--demos", run.demos, "Demonstrations per pool");
  run_cmd->add_option("--seed", run.seed);
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--window", run.window, "Iterations per convergence window");
  run_cmd->add_flag("--force", run.force, "Overwrite an existing summary.json");
  run_cmd->add_flag("--fallback-rules", run.fallback_rules, "Switch to the rule generator if the LLM is down");
  run_cmd->add_option("--model", run.model, "LLM model name");
  run_cmd->add_option("--sampling-temperature", run.sampling_temperature, "LLM sampling temperature");
  add_oracle_options(run_cmd, run.oracle);

  std::string score_task, cif;
  OracleOptions score_oracle;
  auto* score_cmd = app.add_subcommand("score", "Predict properties and score one CIF");
  score_cmd->add_option("--task", score_task)->required();
  score_cmd->add_option("--cif", cif)->required();
  add_oracle_options(score_cmd, score_oracle);

  std::string report_task, records, report_db, report_out;
  int report_window = 10;
  auto* report_cmd = app.add_subcommand("report", "Recompute metrics from candidates.jsonl");
  report_cmd->add_option("--task", report_task)->required();
  report_cmd->add_option("--records", records, "candidates.jsonl")->required();
  report_cmd->add_option("--db", report_db);
  report_cmd->add_option("--window", report_window);
  report_cmd->add_option("--out", report_out, "Defaults to the directory of --records");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    log::error("bad_arguments", {{"code", "InvalidConfig"}, {"detail", e.what()}});
    return kConfig;
  }

  try {
    if (*run_cmd) {
      if (!config.empty()) apply_config_file(config, *run_cmd, run);
      if (run.task.empty()) throw Error(Errc::InvalidConfig, "--task is required");
      return cmd_run(run);
    }
    if (*score_cmd) return cmd_score(score_task, cif, score_oracle, out);
    return cmd_report(report_task, records, report_db, report_window, report_out, out);
  } catch (const Error& e) {
    log::error("command_failed", {{"code", std::string(errc_name(e.code()))}, {"detail", e.detail()}});
    return e.code() == Errc::GeneratorUnavailable ? kGeneratorUnavailable : kConfig;
  } catch (const std::exception& e) {
    log::error("internal_error", {{"detail", e.what()}});
    return kInternal;
  }
}

}  // namespace llema::cli
