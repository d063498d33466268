#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "llema/detail/text.hpp"
#include "llema/evolve/campaign.hpp"

namespace llema::evolve {

inline constexpr const char* kRunFiles[] = {"candidates.jsonl", "pools.json", "summary.json", "trace.csv",
                                            "pareto.csv"};

namespace outputs_detail {

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(Errc::IoError, "failed writing " + path.string());
}

}  // namespace outputs_detail

inline std::string pools_json(const std::vector<Island>& islands) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& island : islands) {
    nlohmann::json success = nlohmann::json::array(), failure = nlohmann::json::array();
    for (const auto& r : island.success.entries()) success.push_back(to_json(r));
    for (const auto& r : island.failure.entries()) failure.push_back(to_json(r));
    arr.push_back({{"id", island.id}, {"u", island.u}, {"success", success}, {"failure", failure}});
  }
  return nlohmann::json{{"islands", arr}}.dump(2) + "\n";
}

inline std::string trace_csv(const std::vector<TraceRow>& rows, int islands) {
  std::ostringstream out;
  out << "iteration,island,temperature";
  for (int i = 0; i < islands; ++i) out << ",mean_score_" << i;
  out << ",cumulative_hit_rate,elite\n";
  for (const auto& r : rows) {
    out << r.iteration << ',' << r.island << ',' << detail::shortest(r.temperature);
    for (double m : r.mean_scores) out << ',' << detail::shortest(m);
    out << ',' << detail::shortest(r.cumulative_hit_rate) << ','
        << (r.elite ? detail::shortest(*r.elite) : std::string()) << '\n';
  }
  return out.str();
}

// Every plottable success with a flag for front membership.
inline std::string pareto_csv(const std::vector<CandidateRecord>& records, const Task& task) {
  const auto points = metrics::pareto_candidates(records, task);
  const auto mask = metrics::pareto_mask(points, task.pareto_x.direction, task.pareto_y.direction);
  std::ostringstream out;
  out << "x,y,formula,on_front\n";
  for (std::size_t i = 0; i < points.size(); ++i)
    out << detail::shortest(points[i].x) << ',' << detail::shortest(points[i].y) << ','
        << points[i].formula << ',' << (mask[i] ? 1 : 0) << '\n';
  return out.str();
}

inline std::string coverage_csv(const metrics::MetricsBlock& m) {
  std::ostringstream out;
  out << "element,ratio\n";
  for (const auto& [e, v] : m.element_coverage) out << e << ',' << detail::shortest(v) << '\n';
  return out.str();
}

// Refuses to replace an existing summary unless `force` is set.
inline void prepare_output_dir(const std::filesystem::path& dir, bool force) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
  if (!force && std::filesystem::exists(dir / "summary.json"))
    throw Error(Errc::InvalidConfig, (dir / "summary.json").string() + " exists; pass --force to overwrite");
}

inline void write_run(const std::filesystem::path& dir, const CampaignResult& result, const Task& task) {
  using outputs_detail::write_file;
  std::ostringstream records;
  write_records(records, result.records);
  write_file(dir / "candidates.jsonl", records.str());
  write_file(dir / "pools.json", pools_json(result.islands));
  write_file(dir / "summary.json", metrics::canonical_summary(result.metrics));
  write_file(dir / "trace.csv", trace_csv(result.trace, static_cast<int>(result.islands.size())));
  write_file(dir / "pareto.csv", pareto_csv(result.records, task));
}

inline void write_report(const std::filesystem::path& dir, const std::vector<CandidateRecord>& records,
                         const metrics::MetricsBlock& m, const Task& task) {
  using outputs_detail::write_file;
  write_file(dir / "summary.json", metrics::canonical_summary(m));
  write_file(dir / "pareto.csv", pareto_csv(records, task));
  write_file(dir / "coverage.csv", coverage_csv(m));
}

inline std::vector<CandidateRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
  return read_records(in);
}

}  // namespace llema::evolve
