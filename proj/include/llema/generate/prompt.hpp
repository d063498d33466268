#pragma once

#include <cstdio>
#include <string>

#include "llema/generate/request.hpp"

namespace llema::generate {

namespace prompt_detail {

inline std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

inline std::string with_unit(Property p, double v) {
  std::string out = format_value(v);
  const auto unit = unit_of(p);
  if (!unit.empty()) out += " " + std::string(unit);
  return out;
}

inline void demonstration_block(std::string& out, const Task& task, const Demonstration& d,
                                int number) {
  out += "### Example " + std::to_string(number) + " (" +
         (d.pool == Pool::success ? "successful" : "failed") + "): " +
         (d.formula.empty() ? "unnamed" : d.formula) + "\n";
  if (!d.note.empty()) out += "Note: " + d.note + "\n";
  std::string props;
  for (const auto p : task.required_properties()) {
    if (!props.empty()) props += "; ";
    const auto v = d.properties.value(p);
    props += std::string(display_name(p)) + " = " + (v ? with_unit(p, *v) : "unknown");
  }
  out += "Properties: " + props + "\n";
  out += "Constraints:\n";
  for (std::size_t i = 0; i < task.constraints.size(); ++i) {
    const auto& c = task.constraints[i];
    const bool ok = i < d.score.per_constraint_phi.size() && d.score.per_constraint_phi[i] >= 0.0;
    out += "- " + c.describe() + ": " + (ok ? "satisfied" : "violated") + "\n";
  }
  out += "Score: " + format_value(d.score.composite) + "\n\n";
}

}  // namespace prompt_detail

// Four sections in fixed order: objective, design rules (omitted when the
// request carries none), examples, output format. Pure in the request.
inline std::string build_prompt(const GenerationRequest& req) {
  using namespace prompt_detail;
  std::string out;
  out += "You are an expert materials scientist proposing new inorganic crystalline materials.\n\n";

  out += "## Objective\n";
  out += req.task.description + "\n";
  out += "A candidate succeeds only if it meets every constraint below:\n";
  for (const auto& c : req.task.constraints) out += "- " + c.describe() + "\n";
  out += "\n";

  if (!req.rules.empty()) {
    out += "## Design rules\n";
    out += "Derive new candidates from the examples by applying these design rules:\n";
    for (const auto& rule : req.rules) out += rule + "\n";
    out += "\n";
  }

  out += "## Examples\n";
  if (req.demonstrations.empty()) {
    out += "No candidates have been evaluated yet. Start from your chemical knowledge.\n\n";
  } else {
    out += "Candidates evaluated earlier in this search. Learn from the successful ones and "
           "avoid the mistakes of the failed ones.\n\n";
    int n = 0;
    for (const auto& d : req.demonstrations) demonstration_block(out, req.task, d, ++n);
  }

  const auto count = std::to_string(req.batch);
  out += "## Output format\n";
  out += "Return exactly " + count + " new candidate" + (req.batch == 1 ? "" : "s") +
         " as a JSON array with " + count + " entr" + (req.batch == 1 ? "y" : "ies") +
         ". Each entry must have the form:\n";
  out += R"({"formula": "BaTiO3", "lattice": {"a": 4.0, "b": 4.0, "c": 4.0, "alpha": 90, )"
         R"("beta": 90, "gamma": 90}, "sites": [{"element": "Ba", "frac": [0.0, 0.0, 0.0]}, )"
         R"({"element": "Ti", "frac": [0.5, 0.5, 0.5]}, {"element": "O", "frac": [0.5, 0.5, 0.0]}, )"
         R"({"element": "O", "frac": [0.5, 0.0, 0.5]}, {"element": "O", "frac": [0.0, 0.5, 0.5]}]})"
         "\n";
  out += "Lengths are in angstrom and angles in degrees. List every atom in the unit cell as its "
         "own site with fractional coordinates in [0, 1). Do not repeat the examples. Reply with "
         "the JSON array only.\n";
  return out;
}

}  // namespace llema::generate
