#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridpass/charset.hpp"

namespace gridpass {

enum class StoreMode { password_only, username_scoped };

std::string_view to_string(StoreMode mode) noexcept;

struct CredentialRecord {
  std::optional<std::string> username;
  std::string password;

  friend bool operator==(const CredentialRecord&, const CredentialRecord&) = default;
};

/// Throws contains_space, empty_password, over_length or invalid_character
/// when `password` cannot be stored over `charset`.
void check_password(std::string_view password, const CharacterSet& charset);

/// Sorted password database.
///
/// Records are kept in ascending order of password under the charset's
/// index order (ties broken by username), so lookup is a binary search.
/// Every mutation returns a new store; a CredentialStore never changes after
/// construction, which lets readers share snapshots freely.
///
/// Passwords are held in the clear. The server has to re-encode each stored
/// password under every fresh grid, which a one-way hash cannot support.
class CredentialStore {
 public:
  explicit CredentialStore(CharacterSet charset, StoreMode mode = StoreMode::password_only);

  const CharacterSet& charset() const noexcept { return charset_; }
  StoreMode mode() const noexcept { return mode_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  std::span<const CredentialRecord> records() const noexcept { return records_; }

  /// Errors: contains_space, over_length, empty_password, invalid_character,
  /// invalid_username, duplicate_password (password-only),
  /// duplicate_username (username-scoped).
  CredentialStore add(CredentialRecord record) const;

  /// Removes the record holding `password` (password-only mode) or every
  /// record holding it (username-scoped). Throws not_found.
  CredentialStore remove_password(std::string_view password) const;
  /// Throws not_found.
  CredentialStore remove_user(std::string_view username) const;

  /// Binary search for an exact password.
  bool lookup(std::string_view password) const;
  const CredentialRecord* find_user(std::string_view username) const;

  /// Writes the store to `path` through a temp file and an atomic rename.
  /// The file is created owner read/write only. Throws io_error.
  void save(const std::filesystem::path& path) const;

  /// Errors: io_error, parse_error (with line diagnostics), charset_mismatch
  /// (file charset differs from `expected`), unsorted_file.
  static CredentialStore load(const std::filesystem::path& path,
                              const std::optional<CharacterSet>& expected = std::nullopt);

  /// Text form written by save(); parse() is its inverse.
  std::string serialize() const;
  static CredentialStore parse(std::string_view text,
                               const std::optional<CharacterSet>& expected = std::nullopt);

  friend bool operator==(const CredentialStore& a, const CredentialStore& b) {
    return a.mode_ == b.mode_ && a.charset_ == b.charset_ && a.records_ == b.records_;
  }

 private:
  bool record_less(const CredentialRecord& a, const CredentialRecord& b) const;
  void check_record(const CredentialRecord& record) const;

  CharacterSet charset_;
  StoreMode mode_;
  std::vector<CredentialRecord> records_;
};

/// Shared, mutable reference to the current store snapshot.
///
/// Readers take a snapshot and keep using it while a writer publishes a new
/// one. Writers are serialized; when a path is attached the new store is
/// persisted before it becomes visible.
class StoreHandle {
 public:
  StoreHandle() = default;
  explicit StoreHandle(CredentialStore initial,
                       std::optional<std::filesystem::path> path = std::nullopt);

  StoreHandle(const StoreHandle&) = delete;
  StoreHandle& operator=(const StoreHandle&) = delete;

  static std::shared_ptr<StoreHandle> open(
      const std::filesystem::path& path,
      const std::optional<CharacterSet>& expected = std::nullopt);

  /// Null when no store has been loaded.
  std::shared_ptr<const CredentialStore> snapshot() const;

  template <typename Mutation>
  void update(Mutation&& mutate) {
    std::lock_guard writer(write_mutex_);
    auto current = snapshot();
    if (!current) throw Error(Errc::io_error, "no store loaded");
    publish_locked(std::forward<Mutation>(mutate)(*current));
  }

  void replace(CredentialStore next);

 private:
  void publish_locked(CredentialStore next);

  mutable std::mutex snapshot_mutex_;
  std::mutex write_mutex_;
  std::shared_ptr<const CredentialStore> current_;
  std::optional<std::filesystem::path> path_;
};

}  // namespace gridpass
