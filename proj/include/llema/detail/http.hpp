#pragma once

#include <chrono>
#include <string>
#include <thread>
#include <utility>

#include <httplib.h>

#include "llema/error.hpp"

namespace llema::detail {

struct Endpoint {
  std::string origin;  // scheme://host[:port]
  std::string prefix;  // path below the origin, no trailing '/'
};

// "http://host:8080/api/" -> {"http://host:8080", "/api"}.
inline Endpoint split_url(const std::string& base) {
  const auto scheme_end = base.find("://");
  const auto host_start = scheme_end == std::string::npos ? 0 : scheme_end + 3;
  const auto slash = base.find('/', host_start);
  Endpoint out;
  out.origin = slash == std::string::npos ? base : base.substr(0, slash);
  out.prefix = slash == std::string::npos ? "" : base.substr(slash);
  while (!out.prefix.empty() && out.prefix.back() == '/') out.prefix.pop_back();
  return out;
}

struct RetryPolicy {
  int retries = 2;
  std::chrono::milliseconds timeout{10000};
  std::chrono::milliseconds backoff{0};  // doubled after each failed attempt
};

struct HttpResponse {
  int status = 0;
  std::string body;
};

// One request plus up to `retries` more. Transport errors and 5xx/429 answers
// are retried; anything else is returned to the caller. Throws TransportError
// when every attempt fails.
inline HttpResponse http_request(const std::string& base, const std::string& path,
                                 const std::string& method, const std::string& body,
                                 const httplib::Headers& headers, const RetryPolicy& policy) {
  const auto endpoint = split_url(base);
  httplib::Client client(endpoint.origin);
  if (!client.is_valid()) throw Error(Errc::TransportError, "unsupported URL " + base);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(policy.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(policy.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  std::string last_error;
  auto delay = policy.backoff;
  for (int attempt = 0; attempt <= policy.retries; ++attempt) {
    if (attempt > 0 && delay.count() > 0) {
      std::this_thread::sleep_for(delay);
      delay *= 2;
    }
    const auto full = endpoint.prefix + path;
    auto res = method == "POST" ? client.Post(full, headers, body, "application/json")
                                : client.Get(full, headers);
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500 || res->status == 429) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    return {res->status, res->body};
  }
  throw Error(Errc::TransportError, method + " " + base + path + ": " + last_error);
}

inline std::string url_encode(const std::string& s) {
  return httplib::detail::encode_query_param(s);
}

}  // namespace llema::detail
