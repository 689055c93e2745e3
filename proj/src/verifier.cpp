#include "gridpass/verifier.hpp"

#include "gridpass/decoder.hpp"

namespace gridpass {

namespace {

void require_same_charset(const CodeGrid& grid, const CredentialStore& store) {
  if (!(grid.charset() == store.charset()))
    throw Error(Errc::charset_mismatch, "grid charset '" + grid.charset().id() +
                                            "' differs from store charset '" +
                                            store.charset().id() + "'");
}

}  // namespace

BigCount combination_count(const DigitSequence& digits, const CodeGrid& grid) {
  BigCount total = 1;
  for (Digit d : digits.digits()) total *= candidates(d, grid).chars.size();
  return total;
}

AuthResult verify_naive(const DigitSequence& digits, const CodeGrid& grid,
                        const CredentialStore& store, std::uint64_t budget) {
  require_same_charset(grid, store);
  if (budget == 0) throw Error(Errc::invalid_parameters, "budget must be at least 1");
  if (combination_count(digits, grid) > budget)
    throw Error(Errc::budget_exceeded,
                "d^n = " + combination_count(digits, grid).str() + " combinations exceed budget " +
                    std::to_string(budget));

  const auto columns = decode_sequence(digits, grid);
  const std::size_t n = columns.size();
  std::vector<std::size_t> index(n, 0);
  std::string candidate(n, '\0');
  for (std::size_t i = 0; i < n; ++i) candidate[i] = columns[i].chars[0];

  AuthResult result;
  for (;;) {
    ++result.combinations_examined;
    if (store.lookup(candidate)) {
      result.outcome = Outcome::accepted;
      result.matched_password = candidate;
      return result;
    }
    // Advance the odometer; the last position turns fastest.
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++index[pos] < columns[pos].chars.size()) {
        candidate[pos] = columns[pos].chars[index[pos]];
        break;
      }
      index[pos] = 0;
      candidate[pos] = columns[pos].chars[0];
      if (pos == 0) return result;
    }
  }
}

bool encodes_to(std::string_view password, const DigitSequence& digits, const CodeGrid& grid) {
  if (password.size() != digits.size()) return false;
  unsigned diff = 0;
  for (std::size_t i = 0; i < password.size(); ++i) {
    const auto idx = grid.charset().index_of(password[i]);
    diff |= idx ? static_cast<unsigned>(grid.code_at(*idx) ^ digits[i]) : 0x100u;
  }
  return diff == 0;
}

std::vector<std::string> matching_passwords(const DigitSequence& digits, const CodeGrid& grid,
                                            const CredentialStore& store) {
  require_same_charset(grid, store);
  std::vector<std::string> out;
  for (const auto& record : store.records())
    if (encodes_to(record.password, digits, grid)) out.push_back(record.password);
  return out;
}

AuthResult verify_inverted(const DigitSequence& digits, const CodeGrid& grid,
                           const CredentialStore& store) {
  const auto matches = matching_passwords(digits, grid, store);
  AuthResult result;
  result.combinations_examined = matches.size();
  if (!matches.empty()) {
    // Records are sorted in charset order, so the first match is the minimum.
    result.outcome = Outcome::accepted;
    result.matched_password = matches.front();
  }
  return result;
}

}  // namespace gridpass
