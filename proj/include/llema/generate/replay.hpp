#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "llema/crystal/payload.hpp"
#include "llema/detail/text.hpp"
#include "llema/generate/request.hpp"

namespace llema::generate {

// Serves payloads from a JSONL file, `batch` non-blank lines per call, in
// file order. Past the end every call returns an empty outcome.
class ReplayGenerator final : public Generator {
 public:
  explicit ReplayGenerator(const std::string& path) : path_(path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot read replay file " + path);
    std::string line;
    while (std::getline(in, line))
      if (!detail::trim(line).empty()) lines_.push_back(line);
  }

  std::string tag() const override { return "replay"; }
  std::size_t cursor() const noexcept { return cursor_; }
  std::size_t size() const noexcept { return lines_.size(); }

  GenerationOutcome generate(const GenerationRequest& req) override {
    GenerationOutcome out;
    for (int i = 0; i < req.batch && cursor_ < lines_.size(); ++i) {
      const auto& line = lines_[cursor_++];
      const auto payload = nlohmann::json::parse(line, nullptr, false);
      if (payload.is_discarded()) {
        out.rejects.push_back({line, Errc::CorruptStream,
                               "replay line " + std::to_string(cursor_) + " is not JSON"});
        continue;
      }
      try {
        out.candidates.push_back(
            crystal::candidate_from_generation(payload, crystal::StructureSource::replay));
      } catch (const ValidationError& e) {
        out.rejects.push_back({payload, e.reason(), e.detail()});
      }
    }
    return out;
  }

 private:
  std::string path_;
  std::vector<std::string> lines_;
  std::size_t cursor_ = 0;
};

}  // namespace llema::generate
