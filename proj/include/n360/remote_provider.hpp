#pragma once

// HTTP client for an external description service. Each request is POSTed as
// a JSON document; the service answers {"text": "..."}.

#include <chrono>
#include <cstdlib>
#include <string>

#include <httplib.h>
#include <json.hpp>

#include "n360/error.hpp"
#include "n360/planner.hpp"

namespace n360 {

inline constexpr const char* kProviderUrlEnv = "N360_PROVIDER_URL";

class RemoteProvider final : public DescriptionProvider {
 public:
  /// `url` like "http://host:8080/describe".
  explicit RemoteProvider(const std::string& url, std::chrono::seconds timeout = std::chrono::seconds(30)) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("provider url needs a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    origin_ = url.substr(0, path_start);
    path_ = path_start == std::string::npos ? "/" : url.substr(path_start);
    timeout_ = timeout;
  }

  /// Endpoint from the N360_PROVIDER_URL environment variable.
  static RemoteProvider from_environment() {
    const char* url = std::getenv(kProviderUrlEnv);
    if (url == nullptr || *url == '\0') throw ConfigError(std::string(kProviderUrlEnv) + " is not set");
    return RemoteProvider(url);
  }

  std::string describe(const DescriptionRequest& request) override {
    httplib::Client client(origin_);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    const auto res = client.Post(path_, request_to_json(request).dump(), "application/json");
    if (!res) throw ProviderError("provider unreachable: " + httplib::to_string(res.error()));
    if (res->status != 200) throw ProviderError("provider returned HTTP " + std::to_string(res->status));
    try {
      return nlohmann::json::parse(res->body).at("text").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ProviderError(std::string("malformed provider response: ") + e.what());
    }
  }

 private:
  std::string origin_;
  std::string path_;
  std::chrono::seconds timeout_{30};
};

}  // namespace n360
