#include "gridpass/codegrid.hpp"

#include <array>

namespace gridpass {

DigitSequence::DigitSequence(std::vector<Digit> digits) : digits_(std::move(digits)) {
  if (digits_.empty()) throw Error(Errc::malformed_digits, "digit sequence is empty");
  if (digits_.size() > kMaxLength)
    throw Error(Errc::malformed_digits,
                "digit sequence longer than " + std::to_string(kMaxLength));
  for (Digit d : digits_)
    if (d > 9) throw Error(Errc::malformed_digits, "digit value out of range");
}

DigitSequence DigitSequence::parse(std::string_view text) {
  std::vector<Digit> digits;
  digits.reserve(text.size());
  for (char ch : text) {
    if (ch < '0' || ch > '9') throw Error(Errc::malformed_digits, "non-digit character in input");
    digits.push_back(static_cast<Digit>(ch - '0'));
  }
  return DigitSequence(std::move(digits));
}

std::string DigitSequence::to_string() const {
  std::string out;
  out.reserve(digits_.size());
  for (Digit d : digits_) out.push_back(static_cast<char>('0' + d));
  return out;
}

CodeGrid CodeGrid::from_codes(CharacterSet charset, std::vector<Digit> codes) {
  require_valid(charset);
  if (codes.size() != charset.size())
    throw Error(Errc::invalid_grid, "grid has " + std::to_string(codes.size()) +
                                        " codes for " + std::to_string(charset.size()) +
                                        " characters");
  std::array<std::size_t, kCodeAlphabetSize> freq{};
  for (Digit d : codes) {
    if (d >= kCodeAlphabetSize) throw Error(Errc::invalid_grid, "code out of range 0..9");
    ++freq[d];
  }
  for (std::size_t y = 0; y < freq.size(); ++y)
    if (freq[y] != charset.per_digit())
      throw Error(Errc::invalid_grid, "digit " + std::to_string(y) + " labels " +
                                          std::to_string(freq[y]) + " characters, expected " +
                                          std::to_string(charset.per_digit()));
  return CodeGrid(std::move(charset), std::move(codes));
}

Digit CodeGrid::code_of(char ch) const {
  const auto idx = charset_.index_of(ch);
  if (!idx)
    throw Error(Errc::character_not_in_charset,
                "character is not in charset '" + charset_.id() + "'");
  return codes_[*idx];
}

DigitSequence encode(std::string_view password, const CodeGrid& grid) {
  if (password.empty()) throw Error(Errc::empty_password, "password is empty");
  if (password.size() > kMaxLength)
    throw Error(Errc::over_length, "password longer than " + std::to_string(kMaxLength));
  std::vector<Digit> digits;
  digits.reserve(password.size());
  for (char ch : password) digits.push_back(grid.code_of(ch));
  return DigitSequence(std::move(digits));
}

}  // namespace gridpass
