#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "llema/crystal/payload.hpp"
#include "llema/generate/request.hpp"

namespace llema::generate {

namespace parse_detail {

// End (exclusive) of the bracketed value opening at `start`, skipping string
// contents; npos when unbalanced.
inline std::size_t matching_bracket(std::string_view text, std::size_t start) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (c == '\\') ++i;
      else if (c == '"') in_string = false;
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == '[' || c == '{') ++depth;
    else if (c == ']' || c == '}') {
      if (--depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

inline bool holds_objects(const nlohmann::json& array) {
  if (array.empty()) return true;
  for (const auto& e : array)
    if (e.is_object()) return true;
  return false;
}

}  // namespace parse_detail

// The first JSON array in `text` that is empty or holds objects. Prose, code
// fences and scalar arrays such as "[1]" before it are skipped.
inline std::optional<nlohmann::json> first_json_array(std::string_view text) {
  for (auto pos = text.find('['); pos != std::string_view::npos; pos = text.find('[', pos + 1)) {
    const auto end = parse_detail::matching_bracket(text, pos);
    if (end == std::string_view::npos) continue;
    const auto parsed = nlohmann::json::parse(text.substr(pos, end - pos), nullptr, false);
    if (parsed.is_array() && parse_detail::holds_objects(parsed)) return parsed;
  }
  return std::nullopt;
}

inline GenerationOutcome parse_candidates(std::string_view model_text,
                                          crystal::StructureSource source =
                                              crystal::StructureSource::generated) {
  const auto array = first_json_array(model_text);
  if (!array) throw Error(Errc::NoJsonFound, "no JSON array of candidates in model output");
  GenerationOutcome out;
  for (const auto& element : *array) {
    try {
      out.candidates.push_back(crystal::candidate_from_generation(element, source));
    } catch (const ValidationError& e) {
      out.rejects.push_back({element, e.reason(), e.detail()});
    }
  }
  return out;
}

}  // namespace llema::generate
