#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gridpass/charset.hpp"

namespace gridpass {

using Digit = std::uint8_t;

// Longest password, and therefore longest digit sequence, the scheme accepts.
inline constexpr std::size_t kMaxLength = 255;

/// What the user types: one code digit per password character.
class DigitSequence {
 public:
  /// Throws Error(malformed_digits) unless 1 <= size <= 255 and every value <= 9.
  explicit DigitSequence(std::vector<Digit> digits);

  /// Parses text such as "27318081174". Anything but ASCII digits, an empty
  /// string or more than 255 digits is malformed_digits.
  static DigitSequence parse(std::string_view text);

  std::size_t size() const noexcept { return digits_.size(); }
  Digit operator[](std::size_t i) const noexcept { return digits_[i]; }
  std::span<const Digit> digits() const noexcept { return digits_; }
  std::string to_string() const;

  friend bool operator==(const DigitSequence&, const DigitSequence&) = default;

 private:
  std::vector<Digit> digits_;
};

/// One random labelling of every charset character with a digit, each digit
/// labelling exactly per_digit() characters.
class CodeGrid {
 public:
  /// codes[i] labels charset.at(i). Throws invalid_charset or invalid_grid.
  static CodeGrid from_codes(CharacterSet charset, std::vector<Digit> codes);

  const CharacterSet& charset() const noexcept { return charset_; }
  std::span<const Digit> codes() const noexcept { return codes_; }
  std::size_t per_digit() const noexcept { return charset_.per_digit(); }

  /// Throws Error(character_not_in_charset).
  Digit code_of(char ch) const;
  Digit code_at(std::size_t index) const { return codes_.at(index); }

  friend bool operator==(const CodeGrid& a, const CodeGrid& b) noexcept {
    return a.codes_ == b.codes_ && a.charset_ == b.charset_;
  }

 private:
  CodeGrid(CharacterSet charset, std::vector<Digit> codes)
      : charset_(std::move(charset)), codes_(std::move(codes)) {}

  CharacterSet charset_;
  std::vector<Digit> codes_;
};

/// Uniformly random grid: an unbiased shuffle of the multiset holding each
/// digit exactly per_digit() times, laid over the charset positions.
template <std::uniform_random_bit_generator Rng>
CodeGrid generate(const CharacterSet& charset, Rng& rng) {
  require_valid(charset);
  std::vector<Digit> codes(charset.size());
  for (std::size_t i = 0; i < codes.size(); ++i)
    codes[i] = static_cast<Digit>(i % kCodeAlphabetSize);
  std::shuffle(codes.begin(), codes.end(), rng);
  return CodeGrid::from_codes(charset, std::move(codes));
}

/// Digits the user must type for `password` under `grid`.
/// Errors: empty_password, over_length, character_not_in_charset.
DigitSequence encode(std::string_view password, const CodeGrid& grid);

}  // namespace gridpass
