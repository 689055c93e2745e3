#include "gridpass/auth_service.hpp"

#include "gridpass/random.hpp"
#include "gridpass/verifier.hpp"

namespace gridpass {

namespace {

constexpr std::size_t kPruneEvery = 64;
constexpr auto kRateWindow = std::chrono::minutes(1);

}  // namespace

std::string_view to_string(LoginFailure reason) noexcept {
  switch (reason) {
    case LoginFailure::unknown_challenge: return "unknown-challenge";
    case LoginFailure::challenge_expired: return "challenge-expired";
    case LoginFailure::challenge_already_used: return "challenge-already-used";
    case LoginFailure::malformed_digits: return "malformed-digits";
    case LoginFailure::authentication_failed: return "authentication-failed";
    case LoginFailure::throttled: return "throttled";
    case LoginFailure::service_unavailable: return "service-unavailable";
  }
  return "authentication-failed";
}

AuthService::AuthService(std::shared_ptr<StoreHandle> store, ServiceConfig config, Now now,
                         GridSource grids)
    : store_(std::move(store)), config_(std::move(config)), now_(std::move(now)), grids_(std::move(grids)) {
  if (!grids_) {
    grids_ = [](const CharacterSet& charset) {
      SystemRandom rng;
      return generate(charset, rng);
    };
  }
}

bool AuthService::throttled_locked(std::string_view source, TimePoint now) const {
  if (config_.rate_limit_per_minute == 0) return false;
  const auto it = rate_.find(std::string(source));
  if (it == rate_.end() || now - it->second.start >= kRateWindow) return false;
  return it->second.attempts >= config_.rate_limit_per_minute;
}

void AuthService::count_attempt_locked(std::string_view source, TimePoint now) {
  if (config_.rate_limit_per_minute == 0) return;
  auto& window = rate_[std::string(source)];
  if (window.attempts == 0 || now - window.start >= kRateWindow) window = RateWindow{now, 0};
  ++window.attempts;
}

void AuthService::prune_locked(TimePoint now) {
  // Expired challenges stay visible for one extra TTL so late submissions
  // still get challenge-expired rather than unknown-challenge.
  std::erase_if(active_, [&](const auto& kv) { return now >= kv.second.expires_at + config_.challenge_ttl; });
  std::erase_if(consumed_, [&](const auto& kv) { return now >= kv.second.forget_at; });
  std::erase_if(sessions_, [&](const auto& kv) { return now >= kv.second.expires_at; });
  std::erase_if(rate_, [&](const auto& kv) { return now - kv.second.start >= kRateWindow; });
}

Challenge AuthService::issue_locked(const CredentialStore& store, TimePoint now) {
  if (++issues_since_prune_ >= kPruneEvery) {
    prune_locked(now);
    issues_since_prune_ = 0;
  }
  Challenge challenge{random_token(16), grids_(store.charset()), now, now + config_.challenge_ttl};
  active_.emplace(challenge.id, challenge);
  return challenge;
}

Challenge AuthService::issue_challenge(std::string_view source) {
  const auto store = store_ ? store_->snapshot() : nullptr;
  if (!store) throw ServiceError(ServiceErrc::service_unavailable, "credential store not loaded");
  const TimePoint now = now_();
  std::lock_guard lock(mutex_);
  if (throttled_locked(source, now)) throw ServiceError(ServiceErrc::throttled, "too many attempts");
  return issue_locked(*store, now);
}

LoginResult AuthService::fail(LoginFailure reason, std::string_view source) {
  LoginResult result;
  result.reason = reason;
  if (reason == LoginFailure::throttled || reason == LoginFailure::service_unavailable) return result;
  const auto store = store_ ? store_->snapshot() : nullptr;
  if (!store) return result;
  const TimePoint now = now_();
  std::lock_guard lock(mutex_);
  if (!throttled_locked(source, now)) result.next_challenge = issue_locked(*store, now);
  return result;
}

LoginResult AuthService::login(std::string_view challenge_id, std::string_view digits,
                               std::optional<std::string_view> username, std::string_view source) {
  const auto store = store_ ? store_->snapshot() : nullptr;
  if (!store) return fail(LoginFailure::service_unavailable, source);

  std::optional<Challenge> challenge;
  std::optional<LoginFailure> early;
  {
    const TimePoint now = now_();
    std::lock_guard lock(mutex_);
    if (throttled_locked(source, now)) return fail(LoginFailure::throttled, source);
    count_attempt_locked(source, now);
    const std::string id(challenge_id);
    // Consuming is the single linearization point for verify-once.
    if (auto node = active_.extract(id)) {
      consumed_.emplace(id, Consumed{node.mapped().expires_at + config_.challenge_ttl});
      if (now >= node.mapped().expires_at)
        early = LoginFailure::challenge_expired;
      else
        challenge = std::move(node.mapped());
    } else {
      early = consumed_.contains(id) ? LoginFailure::challenge_already_used
                                     : LoginFailure::unknown_challenge;
    }
  }
  // The follow-up challenge is issued after the registry lock is released.
  if (early) return fail(*early, source);

  std::optional<DigitSequence> typed;
  try {
    typed = DigitSequence::parse(digits);
  } catch (const Error&) {
    return fail(LoginFailure::malformed_digits, source);
  }

  bool ok = false;
  std::optional<std::string> user;
  try {
    if (username) {
      const CredentialRecord* record = store->find_user(*username);
      ok = record && encodes_to(record->password, *typed, challenge->grid);
      if (ok) user = std::string(*username);
    } else {
      ok = verify_inverted(*typed, challenge->grid, *store).accepted();
    }
  } catch (const Error&) {
    ok = false;
  }
  if (!ok) return fail(LoginFailure::authentication_failed, source);

  LoginResult result;
  result.ok = true;
  result.session = random_token(32);
  result.username = std::move(user);
  const TimePoint now = now_();
  std::lock_guard lock(mutex_);
  sessions_.emplace(result.session, Session{now + config_.session_ttl, result.username});
  return result;
}

bool AuthService::logout(std::string_view session) {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(std::string(session));
  if (it == sessions_.end()) return false;
  const bool live = now_() < it->second.expires_at;
  sessions_.erase(it);
  return live;
}

bool AuthService::session_active(std::string_view session) const {
  std::lock_guard lock(mutex_);
  const auto it = sessions_.find(std::string(session));
  return it != sessions_.end() && now_() < it->second.expires_at;
}

bool AuthService::challenge_active(std::string_view id) const {
  std::lock_guard lock(mutex_);
  const auto it = active_.find(std::string(id));
  return it != active_.end() && now_() < it->second.expires_at;
}

Health AuthService::health() const {
  const auto store = store_ ? store_->snapshot() : nullptr;
  std::lock_guard lock(mutex_);
  return Health{store != nullptr, store ? store->size() : 0, active_.size()};
}

}  // namespace gridpass
