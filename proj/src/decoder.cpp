#include "gridpass/decoder.hpp"

namespace gridpass {

CandidateSet candidates(Digit digit, const CodeGrid& grid) {
  if (digit > 9) throw Error(Errc::malformed_digits, "digit value out of range");
  CandidateSet out{digit, {}};
  out.chars.reserve(grid.per_digit());
  const auto codes = grid.codes();
  for (std::size_t i = 0; i < codes.size(); ++i)
    if (codes[i] == digit) out.chars.push_back(grid.charset().at(i));
  return out;
}

std::vector<CandidateSet> decode_sequence(const DigitSequence& digits, const CodeGrid& grid) {
  // A DigitSequence is never empty; the check guards moved-from values.
  if (digits.size() == 0) throw Error(Errc::empty_sequence, "digit sequence is empty");
  std::vector<CandidateSet> columns;
  columns.reserve(digits.size());
  for (Digit d : digits.digits()) columns.push_back(candidates(d, grid));
  return columns;
}

}  // namespace gridpass
