#pragma once

#include <cstdlib>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "llema/crystal/formula.hpp"
#include "llema/detail/http.hpp"
#include "llema/detail/log.hpp"
#include "llema/oracle/property_vector.hpp"
#include "llema/oracle/reference_db.hpp"

namespace llema::oracle {

// GET {base}/materials?formula=F -> {"band_gap": ..., ...}. Any failure is
// logged and treated as "not found" so campaigns keep running on the local DB.
class RemoteReference {
 public:
  RemoteReference(std::string base_url, std::string api_key, detail::RetryPolicy policy = {})
      : base_(std::move(base_url)), key_(std::move(api_key)), policy_(policy) {}

  // Configured from LLEMA_MP_BASE_URL / LLEMA_MP_API_KEY; none without a base URL.
  static std::shared_ptr<const RemoteReference> from_env() {
    const char* base = std::getenv("LLEMA_MP_BASE_URL");
    if (!base || !*base) return nullptr;
    const char* key = std::getenv("LLEMA_MP_API_KEY");
    return std::make_shared<const RemoteReference>(base, key ? key : "");
  }

  const std::string& base_url() const noexcept { return base_; }

  std::optional<PropertyVector> fetch(const std::string& formula) const {
    {
      std::lock_guard lock(mutex_);
      const auto it = cache_.find(formula);
      if (it != cache_.end()) return it->second;
    }
    auto result = fetch_uncached(formula);
    std::lock_guard lock(mutex_);
    cache_.emplace(formula, result);
    return result;
  }

 private:
  std::optional<PropertyVector> fetch_uncached(const std::string& formula) const {
    httplib::Headers headers;
    if (!key_.empty()) headers.emplace("X-API-KEY", key_);
    try {
      const auto res = detail::http_request(
          base_, "/materials?formula=" + detail::url_encode(formula), "GET", "", headers, policy_);
      if (res.status == 404) return std::nullopt;
      if (res.status != 200) {
        log::warn("reference_http_status", {{"formula", formula}, {"status", res.status}});
        return std::nullopt;
      }
      const auto body = nlohmann::json::parse(res.body);
      if (!body.is_object()) return std::nullopt;
      PropertyVector out;
      for (const auto p : kReferenceColumns) {
        const auto key = std::string(to_string(p));
        if (body.contains(key) && body[key].is_number())
          out.set(p, body[key].get<double>(), ValueSource::reference);
      }
      return out;
    } catch (const Error& e) {
      log::warn("reference_unavailable", {{"formula", formula}, {"detail", e.what()}});
    } catch (const nlohmann::json::exception& e) {
      log::warn("reference_bad_reply", {{"formula", formula}, {"detail", e.what()}});
    }
    return std::nullopt;
  }

  std::string base_;
  std::string key_;
  detail::RetryPolicy policy_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::optional<PropertyVector>> cache_;
};

}  // namespace llema::oracle
