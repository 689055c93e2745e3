#pragma once

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "gridpass/auth_service.hpp"

namespace gridpass {

/// {challenge_id, grid: [{ch, code}...], expires_at} with expires_at in
/// milliseconds since the Unix epoch.
nlohmann::json challenge_to_json(const Challenge& challenge);

/// HTTP binding of AuthService:
///   POST /api/challenge, POST /api/login, POST /api/logout, GET /api/health.
/// Serves static files from the configured web_root, when set.
class HttpServer {
 public:
  explicit HttpServer(AuthService& service);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds host:port (port 0 picks a free port). Returns the bound port, or
  /// -1 when binding fails.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Requires a successful bind().
  bool listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gridpass
