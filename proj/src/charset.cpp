#include "gridpass/charset.hpp"

#include <algorithm>

namespace gridpass {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::duplicate_character: return "duplicate-character";
    case Errc::length_not_divisible_by_10: return "length-not-divisible-by-10";
    case Errc::forbidden_character: return "forbidden-character";
    case Errc::invalid_charset: return "invalid-charset";
    case Errc::character_not_in_charset: return "character-not-in-charset";
    case Errc::empty_password: return "empty-password";
    case Errc::over_length: return "over-length";
    case Errc::contains_space: return "contains-space";
    case Errc::invalid_character: return "invalid-character";
    case Errc::invalid_username: return "invalid-username";
    case Errc::duplicate_password: return "duplicate-password";
    case Errc::duplicate_username: return "duplicate-username";
    case Errc::not_found: return "not-found";
    case Errc::invalid_grid: return "invalid-grid";
    case Errc::empty_sequence: return "empty-sequence";
    case Errc::malformed_digits: return "malformed-digits";
    case Errc::length_mismatch: return "length-mismatch";
    case Errc::budget_exceeded: return "budget-exceeded";
    case Errc::invalid_parameters: return "invalid-parameters";
    case Errc::parse_error: return "parse-error";
    case Errc::charset_mismatch: return "charset-mismatch";
    case Errc::unsorted_file: return "unsorted-file";
    case Errc::io_error: return "io-error";
  }
  return "unknown";
}

CharacterSet::CharacterSet(std::string id, std::string chars) {
  auto impl = std::make_shared<Impl>();
  impl->id = std::move(id);
  impl->chars = std::move(chars);
  impl->index.fill(-1);
  for (std::size_t i = 0; i < impl->chars.size(); ++i) {
    const auto byte = static_cast<unsigned char>(impl->chars[i]);
    if (byte < impl->index.size() && impl->index[byte] < 0)
      impl->index[byte] = static_cast<std::int16_t>(i);
  }
  impl_ = std::move(impl);
}

bool CharacterSet::less(std::string_view lhs, std::string_view rhs) const noexcept {
  const auto rank = [this](char ch) -> int {
    const auto idx = index_of(ch);
    // Non-members sort after every member, by byte value.
    return idx ? static_cast<int>(*idx) : 256 + static_cast<unsigned char>(ch);
  };
  return std::lexicographical_compare(lhs.begin(), lhs.end(), rhs.begin(), rhs.end(),
                                      [&](char a, char b) { return rank(a) < rank(b); });
}

const CharacterSet& default_charset() {
  static const CharacterSet set(
      "default80",
      "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
      "abcdefghijklmnopqrstuvwxyz"
      "0123456789"
      ".+*/(){}-_%=@!^$,#");
  return set;
}

std::optional<CharsetViolation> validate(const CharacterSet& set) {
  const std::string& chars = set.chars();
  for (std::size_t i = 0; i < chars.size(); ++i) {
    const auto byte = static_cast<unsigned char>(chars[i]);
    if (byte == ' ')
      return CharsetViolation{Errc::forbidden_character, i, "space at position " + std::to_string(i)};
    if (byte < 0x21 || byte > 0x7e)
      return CharsetViolation{Errc::forbidden_character, i,
                              "non-printable byte " + std::to_string(byte) + " at position " +
                                  std::to_string(i)};
    if (set.index_of(chars[i]) != i)
      return CharsetViolation{Errc::duplicate_character, i,
                              std::string("'") + chars[i] + "' repeated at position " +
                                  std::to_string(i)};
  }
  if (chars.empty() || chars.size() % kCodeAlphabetSize != 0)
    return CharsetViolation{Errc::length_not_divisible_by_10, chars.size(),
                            "length " + std::to_string(chars.size()) +
                                " is not a positive multiple of 10"};
  return std::nullopt;
}

void require_valid(const CharacterSet& set) {
  if (auto violation = validate(set))
    throw Error(Errc::invalid_charset, "charset '" + set.id() + "': " +
                                           std::string(to_string(violation->rule)) + ": " +
                                           violation->message);
}

}  // namespace gridpass
