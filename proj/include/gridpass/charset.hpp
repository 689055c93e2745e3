#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "gridpass/error.hpp"

namespace gridpass {

// Size of the code alphabet {0..9}.
inline constexpr std::size_t kCodeAlphabetSize = 10;

struct CharsetViolation {
  Errc rule;
  std::size_t position;  // index of the offending character (or size for length rule)
  std::string message;
};

/// Ordered alphabet of characters a password may be composed of.
///
/// A CharacterSet is an immutable value with cheap copies. It may hold an
/// invalid alphabet; validate() reports the first broken rule and every
/// consumer that needs the invariants (grid generation, stores) rejects an
/// invalid set with Errc::invalid_charset.
class CharacterSet {
 public:
  CharacterSet(std::string id, std::string chars);

  const std::string& id() const noexcept { return impl_->id; }
  const std::string& chars() const noexcept { return impl_->chars; }
  std::size_t size() const noexcept { return impl_->chars.size(); }

  /// Characters per code digit, |X| / 10. Only meaningful for valid sets.
  std::size_t per_digit() const noexcept { return size() / kCodeAlphabetSize; }

  char at(std::size_t index) const { return impl_->chars.at(index); }
  bool contains(char ch) const noexcept { return index_of(ch).has_value(); }

  /// First position of ch, or nullopt when ch is not a member.
  std::optional<std::size_t> index_of(char ch) const noexcept {
    const auto byte = static_cast<unsigned char>(ch);
    if (byte >= impl_->index.size() || impl_->index[byte] < 0) return std::nullopt;
    return static_cast<std::size_t>(impl_->index[byte]);
  }

  /// Lexicographic "less" over strings of members, ordering characters by
  /// their index in this set rather than by byte value.
  bool less(std::string_view lhs, std::string_view rhs) const noexcept;

  friend bool operator==(const CharacterSet& a, const CharacterSet& b) noexcept {
    return a.id() == b.id() && a.chars() == b.chars();
  }

 private:
  struct Impl {
    std::string id;
    std::string chars;
    std::array<std::int16_t, 128> index;
  };
  std::shared_ptr<const Impl> impl_;
};

/// The canonical 80-character alphabet "default80": A-Z, a-z, 0-9 and the
/// 18 specials `.+*/(){}-_%=@!^$,#`, giving 8 characters per digit.
const CharacterSet& default_charset();

/// Nullopt when the set is valid, otherwise the first violated rule.
std::optional<CharsetViolation> validate(const CharacterSet& set);

/// Throws Error(invalid_charset) describing the violation, if any.
void require_valid(const CharacterSet& set);

}  // namespace gridpass
