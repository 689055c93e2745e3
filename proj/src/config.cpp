#include "gridpass/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>

#include <nlohmann/json.hpp>

namespace gridpass {

namespace {

long long parse_number(const std::string& text, const std::string& key, long long min, long long max) {
  long long value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || value < min || value > max)
    throw Error(Errc::parse_error, key + ": expected an integer in [" + std::to_string(min) + ", " +
                                       std::to_string(max) + "], got '" + text + "'");
  return value;
}

}  // namespace

std::optional<std::string> getenv_lookup(const char* name) {
  const char* value = std::getenv(name);
  return value ? std::optional<std::string>(value) : std::nullopt;
}

void apply_listen(ServiceConfig& config, const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos || colon == 0)
    throw Error(Errc::parse_error, "listen: expected host:port, got '" + listen + "'");
  config.host = listen.substr(0, colon);
  config.port = static_cast<int>(parse_number(listen.substr(colon + 1), "listen port", 0, 65535));
}

std::optional<CharacterSet> charset_by_id(const std::string& id) {
  if (id == default_charset().id()) return default_charset();
  return std::nullopt;
}

ServiceConfig load_service_config(const std::optional<std::filesystem::path>& file,
                                  const EnvLookup& env) {
  ServiceConfig config;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw Error(Errc::io_error, "cannot open config " + file->string());
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::parse_error, "config " + file->string() + ": " + e.what());
    }
    try {
      if (j.contains("listen")) apply_listen(config, j.at("listen").get<std::string>());
      if (j.contains("store")) config.store_path = j.at("store").get<std::string>();
      if (j.contains("charset")) config.charset = j.at("charset").get<std::string>();
      if (j.contains("challenge_ttl_seconds"))
        config.challenge_ttl = std::chrono::seconds(j.at("challenge_ttl_seconds").get<unsigned>());
      if (j.contains("session_ttl_seconds"))
        config.session_ttl = std::chrono::seconds(j.at("session_ttl_seconds").get<unsigned>());
      if (j.contains("rate_limit_per_minute"))
        config.rate_limit_per_minute = j.at("rate_limit_per_minute").get<std::size_t>();
      if (j.contains("web_root")) config.web_root = j.at("web_root").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::parse_error, "config " + file->string() + ": " + e.what());
    }
  }

  if (auto v = env("GRIDPASS_LISTEN")) apply_listen(config, *v);
  if (auto v = env("GRIDPASS_STORE")) config.store_path = *v;
  if (auto v = env("GRIDPASS_CHARSET")) config.charset = *v;
  if (auto v = env("GRIDPASS_CHALLENGE_TTL"))
    config.challenge_ttl = std::chrono::seconds(parse_number(*v, "GRIDPASS_CHALLENGE_TTL", 1, 86400));
  if (auto v = env("GRIDPASS_SESSION_TTL"))
    config.session_ttl = std::chrono::seconds(parse_number(*v, "GRIDPASS_SESSION_TTL", 1, 30 * 86400));
  if (auto v = env("GRIDPASS_RATE_LIMIT"))
    config.rate_limit_per_minute = static_cast<std::size_t>(parse_number(*v, "GRIDPASS_RATE_LIMIT", 0, 1'000'000));
  if (auto v = env("GRIDPASS_WEB_ROOT")) config.web_root = *v;

  if (config.challenge_ttl.count() <= 0) throw Error(Errc::parse_error, "challenge TTL must be positive");
  if (!charset_by_id(config.charset))
    throw Error(Errc::parse_error, "unknown charset '" + config.charset + "'");
  return config;
}

}  // namespace gridpass
