#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gridpass/verifier.hpp"

namespace gridpass {

struct CrosscheckOptions {
  std::vector<std::size_t> charset_sizes{10, 20};  // each a multiple of 10, at most 80
  std::size_t max_length = 4;
  std::size_t max_store = 8;
  std::size_t cases = 10'000;
  std::uint64_t seed = 1;
  // Harness self-test: makes the inverted side return the largest match
  // instead of the smallest, which must be reported as a divergence.
  bool break_tie_break = false;
};

struct Counterexample {
  CodeGrid grid;
  DigitSequence digits;
  CredentialStore store;
  AuthResult naive;
  AuthResult inverted;
};

struct CrosscheckReport {
  std::size_t cases = 0;
  std::size_t accepted = 0;
  std::size_t collisions = 0;  // cases where more than one stored password matched
  std::optional<Counterexample> divergence;
};

/// Runs verify_naive and verify_inverted on random (grid, digits, store)
/// triples over small charsets and stops at the first case where outcome or
/// matched password differ.
CrosscheckReport crosscheck(const CrosscheckOptions& options);

std::string describe(const Counterexample& ce);

}  // namespace gridpass
