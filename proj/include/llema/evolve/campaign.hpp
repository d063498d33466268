#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "llema/chem/rules.hpp"
#include "llema/crystal/prototypes.hpp"
#include "llema/detail/log.hpp"
#include "llema/evolve/population.hpp"
#include "llema/generate/request.hpp"
#include "llema/metrics/metrics.hpp"
#include "llema/oracle/predict.hpp"

namespace llema::evolve {

struct CampaignConfig {
  int islands = 5;
  int iterations = 10;
  int batch = 2;
  int demos_per_pool = 2;
  double t0 = 0.1;
  std::uint64_t schedule_n = 10000;
  std::uint64_t seed = 0;
  int seeds_per_island = 3;
  std::optional<std::size_t> pool_capacity;
  double sampling_temperature = 0.8;
  int window = 10;
  // Cold-start structures; when empty, islands are seeded from the reference DB.
  std::vector<crystal::Structure> seeds;

  void validate() const {
    auto bad = [](const char* what) { throw Error(Errc::InvalidConfig, what); };
    if (islands < 1) bad("islands must be at least 1");
    if (iterations < 1) bad("iterations must be at least 1");
    if (batch < 1) bad("batch must be at least 1");
    if (demos_per_pool < 0) bad("demos must be non-negative");
    if (!(t0 > 0)) bad("T0 must be positive");
    if (schedule_n < 1) bad("schedule length must be at least 1");
    if (seeds_per_island < 0) bad("seeds per island must be non-negative");
    if (window < 1) bad("window must be at least 1");
    if (pool_capacity && *pool_capacity == 0) bad("pool capacity must be positive");
  }
};

struct TraceRow {
  int iteration = 0;
  int island = 0;
  double temperature = 0.0;
  std::vector<double> mean_scores;  // per island, before selection
  double cumulative_hit_rate = 0.0;
  std::optional<double> elite;      // best success score over all islands after the update
};

struct CampaignResult {
  std::vector<CandidateRecord> records;
  std::vector<Island> islands;
  std::vector<TraceRow> trace;
  metrics::MetricsBlock metrics;

  // Union of the success pools, best first, one entry per formula.
  std::vector<CandidateRecord> elite() const {
    MemoryPool all;
    for (const auto& island : islands)
      for (const auto& r : island.success.entries()) all.insert(r);
    return all.entries();
  }
};

struct Wiring {
  const oracle::Oracle* oracle = nullptr;
  generate::Generator* generator = nullptr;
  generate::Generator* fallback = nullptr;  // used once the primary reports GeneratorUnavailable
};

namespace campaign_detail {

inline std::vector<PropertyVector> evaluate_all(const oracle::Oracle& oracle,
                                                const std::vector<crystal::Structure>& batch,
                                                const std::set<Property>& needed) {
  const bool parallel = batch.size() > 1 &&
                        std::all_of(oracle.surrogates.begin(), oracle.surrogates.end(),
                                    [](const auto& s) { return s->shareable(); });
  std::vector<PropertyVector> out;
  out.reserve(batch.size());
  if (!parallel) {
    for (const auto& s : batch) out.push_back(oracle(s, needed));
    return out;
  }
  std::vector<std::future<PropertyVector>> jobs;
  for (const auto& s : batch)
    jobs.push_back(std::async(std::launch::async, [&oracle, &s, &needed] { return oracle(s, needed); }));
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

// Reference rows ranked by score (ties by formula), dealt round-robin so
// every island gets a share of the better ones.
inline std::vector<crystal::Structure> database_seeds(const oracle::ReferenceDB& db, const Task& task,
                                                      std::size_t count) {
  struct Ranked {
    double score;
    std::string formula;
  };
  std::vector<Ranked> ranked;
  for (const auto& f : db.formulas()) {
    const auto comp = crystal::parse_formula(f);
    ranked.push_back({composite_score(*db.lookup_exact(f), task, &comp).composite, f});
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const Ranked& a, const Ranked& b) { return a.score > b.score; });
  std::vector<crystal::Structure> out;
  for (std::size_t i = 0; i < std::min(count, ranked.size()); ++i)
    out.push_back(crystal::placeholder_structure(crystal::parse_formula(ranked[i].formula)));
  return out;
}

}  // namespace campaign_detail

// Iteration 0 seeding. Seeds fill the pools but are not candidate records
// and do not advance u.
inline void seed_islands(std::vector<Island>& islands, const Task& task, const CampaignConfig& cfg,
                         const oracle::Oracle& oracle) {
  const std::size_t want = islands.size() * static_cast<std::size_t>(cfg.seeds_per_island);
  auto seeds = cfg.seeds;
  if (seeds.empty() && oracle.db) seeds = campaign_detail::database_seeds(*oracle.db, task, want);
  if (seeds.size() > want) seeds.erase(seeds.begin() + static_cast<std::ptrdiff_t>(want), seeds.end());
  const auto props = campaign_detail::evaluate_all(oracle, seeds, task.required_properties());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    auto& island = islands[i % islands.size()];
    route(island, make_record(0, island.id, seeds[i], props[i], task, "seed"));
  }
}

inline CampaignResult run_campaign(const Task& task, const Wiring& wiring, const CampaignConfig& cfg) {
  cfg.validate();
  if (!wiring.oracle || !wiring.generator) throw Error(Errc::InvalidConfig, "campaign needs an oracle and a generator");
  const auto& oracle = *wiring.oracle;
  generate::Generator* generator = wiring.generator;
  const auto needed = task.required_properties();

  CampaignResult result;
  for (int i = 0; i < cfg.islands; ++i) result.islands.emplace_back(i, cfg.pool_capacity);
  seed_islands(result.islands, task, cfg, oracle);

  Rng rng(cfg.seed);
  std::size_t hits = 0;
  std::size_t selected = 0;
  const auto rules = chem::rule_prompt_lines();
  for (int n = 1; n <= cfg.iterations; ++n) {
    std::vector<double> means;
    for (const auto& island : result.islands) means.push_back(island.mean_score());
    // The schedule runs on the u of the island chosen last round.
    const double tau = temperature(result.islands[selected].u, cfg.t0, cfg.schedule_n);
    selected = boltzmann_select(means, tau, rng);
    auto& island = result.islands[selected];

    generate::GenerationRequest req;
    req.task = task;
    req.iteration = n;
    req.demonstrations = sample_demonstrations(island, static_cast<std::size_t>(cfg.demos_per_pool));
    req.rules = rules;
    req.batch = cfg.batch;
    req.sampling_temperature = cfg.sampling_temperature;
    req.island = island.id;

    generate::GenerationOutcome outcome;
    try {
      outcome = generator->generate(req);
    } catch (const Error& e) {
      if (e.code() == Errc::GeneratorUnavailable && wiring.fallback && generator != wiring.fallback) {
        log::warn("generator_fallback", {{"iteration", n}, {"from", generator->tag()},
                                         {"to", wiring.fallback->tag()}, {"detail", e.detail()}});
        generator = wiring.fallback;
        try {
          outcome = generator->generate(req);
        } catch (const Error& e2) {
          if (e2.code() != Errc::ExhaustedAttempts) throw;
          log::warn("generator_exhausted", {{"iteration", n}, {"island", island.id}});
        }
      } else if (e.code() == Errc::ExhaustedAttempts) {
        log::warn("generator_exhausted", {{"iteration", n}, {"island", island.id}});
      } else {
        throw;
      }
    }

    const auto props = campaign_detail::evaluate_all(oracle, outcome.candidates, needed);
    const auto tag = generator->tag();
    for (std::size_t i = 0; i < outcome.candidates.size(); ++i) {
      auto record = make_record(n, island.id, outcome.candidates[i], props[i], task, tag);
      hits += record.score.success ? 1 : 0;
      result.records.push_back(record);
      update_population(island, std::move(record));
    }
    for (const auto& rej : outcome.rejects) {
      auto record = make_reject_record(n, island.id, rej, task, tag);
      result.records.push_back(record);
      update_population(island, std::move(record));
    }

    TraceRow row;
    row.iteration = n;
    row.island = island.id;
    row.temperature = tau;
    row.mean_scores = std::move(means);
    row.cumulative_hit_rate = metrics::detail::percent(hits, result.records.size());
    for (const auto& isl : result.islands)
      if (const auto best = isl.best_success(); best && (!row.elite || *best > *row.elite)) row.elite = best;
    result.trace.push_back(std::move(row));
  }
  result.metrics = metrics::compute_metrics(result.records, task, oracle.db, cfg.window);
  return result;
}

}  // namespace llema::evolve
