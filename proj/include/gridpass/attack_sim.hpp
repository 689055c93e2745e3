#pragma once

#include <array>
#include <bitset>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "gridpass/codegrid.hpp"
#include "gridpass/credential_store.hpp"
#include "gridpass/verifier.hpp"

namespace gridpass {

struct Observation {
  CodeGrid grid;
  DigitSequence digits;
};

/// What an observer who sees both the displayed grid and the typed digits
/// learns across sessions: per position, the characters consistent with
/// every observation so far.
class AttackTranscript {
 public:
  /// Intersects each position's survivors with the candidates of the typed
  /// digit. Throws length_mismatch when digits.size() differs from earlier
  /// observations, charset_mismatch when the grid's charset does.
  void observe(const CodeGrid& grid, const DigitSequence& digits);

  std::size_t length() const noexcept { return survivors_.size(); }
  const std::vector<Observation>& observations() const noexcept { return observations_; }

  /// Surviving characters at each position, in charset order.
  std::vector<std::string> survivors() const;
  std::vector<std::size_t> survivor_counts() const;
  /// Product of survivor counts: how many passwords remain consistent.
  BigCount residual_space() const;

 private:
  std::optional<CharacterSet> charset_;
  std::vector<Observation> observations_;
  std::vector<std::bitset<128>> survivors_;  // bit i = charset index i
};

/// Closed-form mean survivor count per position after k independent
/// observations: 1 + (N - 1) * ((d - 1) / (N - 1))^k. Throws
/// invalid_parameters unless d * 10 == N and k >= 1.
double expected_survivors(std::size_t charset_size, std::size_t per_digit, std::size_t k);

struct SimulationResult {
  AttackTranscript transcript;
  std::vector<std::size_t> survivor_counts;
  BigCount residual_space;
};

/// Watches `sessions` logins of `password`, each under a fresh grid.
template <std::uniform_random_bit_generator Rng>
SimulationResult simulate(std::string_view password, const CharacterSet& charset,
                          std::size_t sessions, Rng& rng) {
  check_password(password, charset);
  SimulationResult result;
  for (std::size_t s = 0; s < sessions; ++s) {
    const CodeGrid grid = generate(charset, rng);
    result.transcript.observe(grid, encode(password, grid));
  }
  result.survivor_counts = result.transcript.survivor_counts();
  result.residual_space = result.transcript.residual_space();
  return result;
}

struct ConvergenceOptions {
  CharacterSet charset = default_charset();
  std::size_t max_k = 6;
  std::size_t trials = 10'000;
  std::optional<std::string> password;  // random password per trial when absent
  std::size_t random_length = 8;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct ConvergenceRow {
  std::size_t k;
  double mean_survivors;     // mean over trials of the per-trial mean across positions
  double closed_form;
  double standard_error;
  double recovered_fraction;  // trials where every position is down to one character
};

/// Monte Carlo of the intersection attack for k = 1..max_k.
std::vector<ConvergenceRow> run_convergence(const ConvergenceOptions& options);

/// CSV with header k,mean_survivors,closed_form,stderr.
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);

/// Observer who sees the typed digits but never the grid.
struct WeakObserverSummary {
  std::size_t length = 0;
  std::size_t sessions = 0;
  std::vector<std::array<std::size_t, kCodeAlphabetSize>> digit_counts;  // per position
  std::vector<double> chi_square;  // per position, typed digits vs uniform (9 dof)
  std::vector<double> p_value;
  std::size_t candidates_per_position = 0;  // always the full charset size
};

WeakObserverSummary simulate_weak_observer(std::string_view password, const CharacterSet& charset,
                                           std::size_t sessions, std::uint64_t seed);

}  // namespace gridpass
