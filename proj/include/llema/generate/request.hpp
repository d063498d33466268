#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "llema/crystal/structure.hpp"
#include "llema/error.hpp"
#include "llema/oracle/property_vector.hpp"
#include "llema/tasks/score.hpp"
#include "llema/tasks/task.hpp"

namespace llema::generate {

enum class Pool { success, failure };

constexpr std::string_view to_string(Pool p) noexcept {
  return p == Pool::success ? "success" : "failure";
}

inline Pool pool_from(std::string_view s) {
  if (s == "success") return Pool::success;
  if (s == "failure") return Pool::failure;
  throw Error(Errc::CorruptStream, "unknown pool '" + std::string(s) + "'");
}

inline Pool pool_of(const ScoreBreakdown& score) {
  return score.success ? Pool::success : Pool::failure;
}

// A previously evaluated candidate shown to the generator. Rejected payloads
// have no structure; `formula` then carries whatever the payload declared.
struct Demonstration {
  std::optional<crystal::Structure> structure;
  std::string formula;
  PropertyVector properties;
  ScoreBreakdown score;
  Pool pool = Pool::failure;
  std::string note;  // e.g. why a payload was rejected
};

struct GenerationRequest {
  Task task;
  int iteration = 0;
  std::vector<Demonstration> demonstrations;  // successes first
  std::vector<std::string> rules;             // empty at iteration 0
  int batch = 2;
  double sampling_temperature = 0.8;
  int island = 0;
};

struct Reject {
  nlohmann::json payload;  // the raw element, or the raw text when nothing parsed
  Errc reason = Errc::ValidationError;
  std::string detail;
};

struct GenerationOutcome {
  std::vector<crystal::Structure> candidates;
  std::vector<Reject> rejects;
  std::optional<std::string> transcript;
};

class Generator {
 public:
  virtual ~Generator() = default;
  virtual std::string tag() const = 0;  // recorded on every candidate
  virtual GenerationOutcome generate(const GenerationRequest& req) = 0;
};

}  // namespace llema::generate
