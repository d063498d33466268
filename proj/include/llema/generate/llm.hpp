#pragma once

#include <chrono>
#include <cstdlib>
#include <string>
#include <utility>

#include <json.hpp>

#include "llema/detail/http.hpp"
#include "llema/generate/parse.hpp"
#include "llema/generate/prompt.hpp"
#include "llema/generate/request.hpp"

namespace llema::generate {

struct LlmConfig {
  std::string base_url;  // POSTs go to {base_url}/v1/chat/completions
  std::string api_key;
  std::string model = "gpt-4o-mini";
  detail::RetryPolicy policy{2, std::chrono::milliseconds(120000), std::chrono::milliseconds(500)};

  // LLEMA_LLM_BASE_URL and LLEMA_LLM_API_KEY; an empty base means "not configured".
  static LlmConfig from_env(std::string model = "gpt-4o-mini") {
    LlmConfig cfg;
    if (const char* base = std::getenv("LLEMA_LLM_BASE_URL")) cfg.base_url = base;
    if (const char* key = std::getenv("LLEMA_LLM_API_KEY")) cfg.api_key = key;
    cfg.model = std::move(model);
    return cfg;
  }
};

// Chat-completions client. One call per request; the reply text goes through
// parse_candidates and is kept as the transcript.
class LlmGenerator final : public Generator {
 public:
  explicit LlmGenerator(LlmConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.base_url.empty())
      throw Error(Errc::InvalidConfig, "LLM generator needs a base URL (LLEMA_LLM_BASE_URL)");
  }

  std::string tag() const override { return "llm:" + cfg_.model; }

  nlohmann::json request_body(const GenerationRequest& req) const {
    return {{"model", cfg_.model},
            {"temperature", req.sampling_temperature},
            {"messages", nlohmann::json::array({{{"role", "user"}, {"content", build_prompt(req)}}})}};
  }

  GenerationOutcome generate(const GenerationRequest& req) override {
    httplib::Headers headers;
    if (!cfg_.api_key.empty()) headers.emplace("Authorization", "Bearer " + cfg_.api_key);
    detail::HttpResponse res;
    try {
      res = detail::http_request(cfg_.base_url, "/v1/chat/completions", "POST",
                                 request_body(req).dump(), headers, cfg_.policy);
    } catch (const Error& e) {
      throw Error(Errc::GeneratorUnavailable, e.detail());
    }
    if (res.status != 200)
      throw Error(Errc::GeneratorUnavailable, "chat completion answered HTTP " +
                                                  std::to_string(res.status));
    std::string text;
    try {
      text = nlohmann::json::parse(res.body)
                 .at("choices")
                 .at(0)
                 .at("message")
                 .at("content")
                 .get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::GeneratorUnavailable, std::string("unexpected completion body: ") + e.what());
    }
    GenerationOutcome out;
    try {
      out = parse_candidates(text);
    } catch (const Error& e) {
      // A reply without candidates still counts as one failed generation.
      out.rejects.push_back({text, e.code(), e.detail()});
    }
    out.transcript = std::move(text);
    return out;
  }

 private:
  LlmConfig cfg_;
};

}  // namespace llema::generate
