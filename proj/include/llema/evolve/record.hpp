#pragma once

#include <cmath>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "llema/crystal/formula.hpp"
#include "llema/crystal/payload.hpp"
#include "llema/generate/request.hpp"
#include "llema/tasks/score.hpp"

namespace llema::evolve {

using generate::Pool;

// Why a generator payload never became a structure.
struct RejectInfo {
  Errc reason = Errc::ValidationError;
  std::string detail;
  nlohmann::json payload;

  friend bool operator==(const RejectInfo&, const RejectInfo&) = default;
};

struct CandidateRecord {
  int iteration = 0;
  int island = 0;
  std::optional<crystal::Structure> structure;
  std::string formula;  // reduced formula, or whatever a rejected payload declared
  PropertyVector properties;
  ScoreBreakdown score;
  Pool pool = Pool::failure;
  std::string generator;
  std::optional<RejectInfo> reject;

  // Pool identity. Rejects without a parseable formula share the empty key.
  std::string key() const {
    if (structure) return structure->reduced_formula();
    try {
      return crystal::canonical_formula(formula);
    } catch (const Error&) {
      return formula;
    }
  }

  std::optional<crystal::Composition> composition() const {
    if (structure) return structure->composition();
    try {
      return crystal::parse_formula(formula);
    } catch (const Error&) {
      return std::nullopt;
    }
  }
};

inline CandidateRecord make_record(int iteration, int island, crystal::Structure s,
                                   PropertyVector props, const Task& task, std::string generator) {
  CandidateRecord r;
  r.iteration = iteration;
  r.island = island;
  r.score = composite_score(props, task, &s.composition());
  r.pool = generate::pool_of(r.score);
  r.formula = s.reduced_formula();
  r.structure = std::move(s);
  r.properties = std::move(props);
  r.generator = std::move(generator);
  return r;
}

inline CandidateRecord make_reject_record(int iteration, int island, const generate::Reject& rej,
                                          const Task& task, std::string generator) {
  CandidateRecord r;
  r.iteration = iteration;
  r.island = island;
  r.score = failure_score(task);
  r.pool = Pool::failure;
  if (rej.payload.is_object() && rej.payload.contains("formula") && rej.payload["formula"].is_string())
    r.formula = rej.payload["formula"].get<std::string>();
  r.generator = std::move(generator);
  r.reject = RejectInfo{rej.reason, rej.detail, rej.payload};
  return r;
}

inline generate::Demonstration to_demonstration(const CandidateRecord& r) {
  generate::Demonstration d;
  d.structure = r.structure;
  d.formula = r.formula.empty() ? "(unnamed)" : r.formula;
  d.properties = r.properties;
  d.score = r.score;
  d.pool = r.pool;
  if (r.reject) d.note = "rejected before evaluation, " + std::string(errc_name(r.reject->reason)) + ": " + r.reject->detail;
  return d;
}

inline nlohmann::json to_json(const PropertyVector& props) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [p, v] : props.entries()) {
    nlohmann::json value = v.present() ? nlohmann::json(v.value) : nlohmann::json(nullptr);
    out[std::string(to_string(p))] = {{"value", value}, {"source", std::string(to_string(v.source))}};
  }
  return out;
}

inline PropertyVector properties_from_json(const nlohmann::json& j) {
  PropertyVector out;
  for (const auto& [name, entry] : j.items()) {
    const auto p = property_from(name);
    const auto source = value_source_from(entry.at("source").get<std::string>());
    if (entry.at("value").is_null() || source == ValueSource::missing)
      out.set_missing(p);
    else
      out.set(p, entry.at("value").get<double>(), source);
  }
  return out;
}

inline nlohmann::json to_json(const CandidateRecord& r) {
  nlohmann::json out{{"iteration", r.iteration},
                     {"island", r.island},
                     {"formula", r.formula},
                     {"generator", r.generator},
                     {"pool", std::string(to_string(r.pool))},
                     {"properties", to_json(r.properties)},
                     {"score",
                      {{"phi", r.score.per_constraint_phi},
                       {"composite", r.score.composite},
                       {"success", r.score.success}}}};
  if (r.structure) {
    out["structure"] = crystal::to_payload(*r.structure);
    out["source"] = std::string(to_string(r.structure->source()));
  } else {
    out["structure"] = nullptr;
  }
  if (r.reject)
    out["reject"] = {{"reason", std::string(errc_name(r.reject->reason))},
                     {"detail", r.reject->detail},
                     {"payload", r.reject->payload}};
  return out;
}

inline Errc errc_from(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(Errc::CorruptStream); ++i)
    if (errc_name(static_cast<Errc>(i)) == name) return static_cast<Errc>(i);
  throw Error(Errc::CorruptStream, "unknown error code '" + std::string(name) + "'");
}

inline CandidateRecord record_from_json(const nlohmann::json& j) {
  try {
    CandidateRecord r;
    r.iteration = j.at("iteration").get<int>();
    r.island = j.at("island").get<int>();
    r.formula = j.at("formula").get<std::string>();
    r.generator = j.at("generator").get<std::string>();
    r.pool = generate::pool_from(j.at("pool").get<std::string>());
    r.properties = properties_from_json(j.at("properties"));
    const auto& score = j.at("score");
    r.score.per_constraint_phi = score.at("phi").get<std::vector<double>>();
    r.score.composite = score.at("composite").get<double>();
    r.score.success = score.at("success").get<bool>();
    if (!j.at("structure").is_null())
      r.structure = crystal::candidate_from_generation(
          j.at("structure"), crystal::structure_source_from(j.value("source", "generated")));
    if (j.contains("reject")) {
      const auto& rej = j.at("reject");
      r.reject = RejectInfo{errc_from(rej.at("reason").get<std::string>()),
                            rej.at("detail").get<std::string>(), rej.at("payload")};
    }
    if (r.pool != generate::pool_of(r.score))
      throw Error(Errc::CorruptStream, "pool tag disagrees with score for " + r.formula);
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::CorruptStream, e.what());
  } catch (const ValidationError& e) {
    throw Error(Errc::CorruptStream, e.detail());
  }
}

inline void write_records(std::ostream& out, const std::vector<CandidateRecord>& records) {
  for (const auto& r : records) out << to_json(r).dump() << '\n';
}

inline std::vector<CandidateRecord> read_records(std::istream& in) {
  std::vector<CandidateRecord> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::CorruptStream, "line " + std::to_string(number) + ": " + e.what());
    }
    try {
      out.push_back(record_from_json(j));
    } catch (const Error& e) {
      throw Error(Errc::CorruptStream, "line " + std::to_string(number) + ": " + e.detail());
    }
  }
  return out;
}

}  // namespace llema::evolve
