#pragma once

#include <chrono>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>

#include "gridpass/codegrid.hpp"
#include "gridpass/config.hpp"
#include "gridpass/credential_store.hpp"

namespace gridpass {

using Clock = std::chrono::system_clock;
using TimePoint = Clock::time_point;

struct Challenge {
  std::string id;  // 128-bit random hex token
  CodeGrid grid;
  TimePoint issued_at;
  TimePoint expires_at;
};

enum class LoginFailure {
  unknown_challenge,
  challenge_expired,
  challenge_already_used,
  malformed_digits,
  authentication_failed,
  throttled,
  service_unavailable,
};

std::string_view to_string(LoginFailure reason) noexcept;

struct LoginResult {
  bool ok = false;
  std::string session;                       // set on success
  std::optional<std::string> username;       // set on username-scoped success
  std::optional<LoginFailure> reason;        // set on failure
  std::optional<Challenge> next_challenge;   // fresh grid on failure
};

enum class ServiceErrc { service_unavailable, throttled };

class ServiceError : public std::runtime_error {
 public:
  ServiceError(ServiceErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ServiceErrc code() const noexcept { return code_; }

 private:
  ServiceErrc code_;
};

struct Health {
  bool store_loaded;
  std::size_t store_size;
  std::size_t active_challenges;
};

/// Transport-independent login service.
///
/// Every challenge carries its own grid and verifies at most once: login()
/// removes the challenge from the active registry under the registry lock
/// before doing anything else, so concurrent duplicate submissions see
/// exactly one winner. Every failure response carries a newly issued
/// challenge so the client always shows a fresh grid.
class AuthService {
 public:
  using Now = std::function<TimePoint()>;
  using GridSource = std::function<CodeGrid(const CharacterSet&)>;

  /// `grids` defaults to grids drawn from the kernel CSPRNG.
  AuthService(std::shared_ptr<StoreHandle> store, ServiceConfig config, Now now = Clock::now,
              GridSource grids = {});

  /// Throws ServiceError(service_unavailable) without a loaded store and
  /// ServiceError(throttled) once `source` is over its attempt limit.
  Challenge issue_challenge(std::string_view source = {});

  LoginResult login(std::string_view challenge_id, std::string_view digits,
                    std::optional<std::string_view> username = std::nullopt,
                    std::string_view source = {});

  /// False when the session was unknown or already expired.
  bool logout(std::string_view session);
  bool session_active(std::string_view session) const;

  bool challenge_active(std::string_view id) const;
  Health health() const;
  const ServiceConfig& config() const noexcept { return config_; }

 private:
  struct Consumed {
    TimePoint forget_at;
  };
  struct Session {
    TimePoint expires_at;
    std::optional<std::string> username;
  };
  struct RateWindow {
    TimePoint start;
    std::size_t attempts = 0;
  };

  bool throttled_locked(std::string_view source, TimePoint now) const;
  void count_attempt_locked(std::string_view source, TimePoint now);
  void prune_locked(TimePoint now);
  Challenge issue_locked(const CredentialStore& store, TimePoint now);
  LoginResult fail(LoginFailure reason, std::string_view source);

  std::shared_ptr<StoreHandle> store_;
  ServiceConfig config_;
  Now now_;
  GridSource grids_;

  mutable std::mutex mutex_;
  std::unordered_map<std::string, Challenge> active_;
  std::unordered_map<std::string, Consumed> consumed_;
  std::unordered_map<std::string, Session> sessions_;
  std::unordered_map<std::string, RateWindow> rate_;
  std::size_t issues_since_prune_ = 0;
};

}  // namespace gridpass
