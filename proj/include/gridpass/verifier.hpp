#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gridpass/codegrid.hpp"
#include "gridpass/credential_store.hpp"

namespace gridpass {

using BigCount = boost::multiprecision::cpp_int;

enum class Outcome { accepted, rejected };

struct AuthResult {
  Outcome outcome = Outcome::rejected;
  std::optional<std::string> matched_password;  // present iff accepted
  std::uint64_t combinations_examined = 0;

  bool accepted() const noexcept { return outcome == Outcome::accepted; }
};

inline constexpr std::uint64_t kDefaultNaiveBudget = 1'000'000;

/// Exhaustive decoder-driven search.
///
/// Builds every string consistent with the typed digits in odometer order
/// (position 0 outermost, candidates in charset order) and binary-searches
/// each one in the store, stopping at the first hit. Odometer order over
/// charset-ordered candidate lists is lexicographic order by charset index,
/// so the first hit is the charset-smallest matching password.
///
/// Throws Error(budget_exceeded) before enumerating anything when
/// combination_count(digits, grid) > budget.
AuthResult verify_naive(const DigitSequence& digits, const CodeGrid& grid,
                        const CredentialStore& store,
                        std::uint64_t budget = kDefaultNaiveBudget);

/// Encodes each stored password of the right length and compares digit
/// strings. O(p * n). When several passwords match, returns the smallest in
/// charset order, which is exactly what verify_naive finds first.
/// combinations_examined counts stored passwords that encoded to `digits`.
AuthResult verify_inverted(const DigitSequence& digits, const CodeGrid& grid,
                           const CredentialStore& store);

/// Every stored password that encodes to `digits`, in store (charset) order.
std::vector<std::string> matching_passwords(const DigitSequence& digits, const CodeGrid& grid,
                                            const CredentialStore& store);

/// Digit-for-digit comparison of encode(password, grid) and `digits` that
/// does not stop at the first mismatching position.
bool encodes_to(std::string_view password, const DigitSequence& digits, const CodeGrid& grid);

/// Product of candidate-set sizes, d^n, exact.
BigCount combination_count(const DigitSequence& digits, const CodeGrid& grid);

}  // namespace gridpass
