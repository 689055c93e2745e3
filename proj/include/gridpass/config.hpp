#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "gridpass/charset.hpp"

namespace gridpass {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::filesystem::path store_path = "gridpass.store";
  std::string charset = "default80";
  std::chrono::seconds challenge_ttl{120};
  std::chrono::seconds session_ttl{3600};
  std::size_t rate_limit_per_minute = 10;  // login attempts per source address; 0 disables
  std::optional<std::filesystem::path> web_root;
};

using EnvLookup = std::function<std::optional<std::string>(const char*)>;

/// Process environment lookup.
std::optional<std::string> getenv_lookup(const char* name);

/// Defaults, then the JSON config file (when given), then GRIDPASS_*
/// environment overrides. Throws Error(parse_error) on bad values.
///
/// File keys: listen ("host:port"), store, charset, challenge_ttl_seconds,
/// session_ttl_seconds, rate_limit_per_minute, web_root.
/// Environment: GRIDPASS_LISTEN, GRIDPASS_STORE, GRIDPASS_CHARSET,
/// GRIDPASS_CHALLENGE_TTL, GRIDPASS_SESSION_TTL, GRIDPASS_RATE_LIMIT,
/// GRIDPASS_WEB_ROOT.
ServiceConfig load_service_config(const std::optional<std::filesystem::path>& file,
                                  const EnvLookup& env = getenv_lookup);

/// Splits "host:port"; throws Error(parse_error).
void apply_listen(ServiceConfig& config, const std::string& listen);

/// Built-in charsets by id; nullopt for unknown ids.
std::optional<CharacterSet> charset_by_id(const std::string& id);

}  // namespace gridpass
