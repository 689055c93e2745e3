#include "gridpass/attack_sim.hpp"

#include <cmath>
#include <iomanip>
#include <random>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>

namespace gridpass {

void AttackTranscript::observe(const CodeGrid& grid, const DigitSequence& digits) {
  if (!charset_) {
    charset_ = grid.charset();
    std::bitset<128> all;
    for (std::size_t i = 0; i < charset_->size(); ++i) all.set(i);
    survivors_.assign(digits.size(), all);
  } else if (!(grid.charset() == *charset_)) {
    throw Error(Errc::charset_mismatch, "observation grid uses a different charset");
  } else if (digits.size() != survivors_.size()) {
    throw Error(Errc::length_mismatch, "observed " + std::to_string(digits.size()) +
                                           " digits, transcript has " +
                                           std::to_string(survivors_.size()));
  }

  std::array<std::bitset<128>, kCodeAlphabetSize> by_digit;
  const auto codes = grid.codes();
  for (std::size_t i = 0; i < codes.size(); ++i) by_digit[codes[i]].set(i);
  for (std::size_t pos = 0; pos < survivors_.size(); ++pos) survivors_[pos] &= by_digit[digits[pos]];
  observations_.push_back(Observation{grid, digits});
}

std::vector<std::string> AttackTranscript::survivors() const {
  std::vector<std::string> out;
  out.reserve(survivors_.size());
  for (const auto& bits : survivors_) {
    std::string chars;
    for (std::size_t i = 0; i < charset_->size(); ++i)
      if (bits.test(i)) chars.push_back(charset_->at(i));
    out.push_back(std::move(chars));
  }
  return out;
}

std::vector<std::size_t> AttackTranscript::survivor_counts() const {
  std::vector<std::size_t> out;
  out.reserve(survivors_.size());
  for (const auto& bits : survivors_) out.push_back(bits.count());
  return out;
}

BigCount AttackTranscript::residual_space() const {
  BigCount total = 1;
  for (const auto& bits : survivors_) total *= bits.count();
  return total;
}

double expected_survivors(std::size_t charset_size, std::size_t per_digit, std::size_t k) {
  if (per_digit == 0 || per_digit * kCodeAlphabetSize != charset_size || k == 0)
    throw Error(Errc::invalid_parameters,
                "need per_digit * 10 == charset_size and at least one observation");
  const double others = static_cast<double>(charset_size - 1);
  const double share = static_cast<double>(per_digit - 1) / others;
  return 1.0 + others * std::pow(share, static_cast<double>(k));
}

namespace {

struct Accumulator {
  std::vector<double> sum, sum_sq;
  std::vector<std::size_t> recovered;
  std::size_t trials = 0;

  explicit Accumulator(std::size_t max_k) : sum(max_k), sum_sq(max_k), recovered(max_k) {}

  void merge(const Accumulator& other) {
    for (std::size_t i = 0; i < sum.size(); ++i) {
      sum[i] += other.sum[i];
      sum_sq[i] += other.sum_sq[i];
      recovered[i] += other.recovered[i];
    }
    trials += other.trials;
  }
};

Accumulator run_trials(const ConvergenceOptions& options, std::size_t trials, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<std::size_t> pick(0, options.charset.size() - 1);
  Accumulator acc(options.max_k);
  std::string password;

  for (std::size_t t = 0; t < trials; ++t) {
    if (options.password) {
      password = *options.password;
    } else {
      password.resize(options.random_length);
      for (char& ch : password) ch = options.charset.at(pick(rng));
    }
    AttackTranscript transcript;
    for (std::size_t k = 0; k < options.max_k; ++k) {
      const CodeGrid grid = generate(options.charset, rng);
      transcript.observe(grid, encode(password, grid));
      const auto counts = transcript.survivor_counts();
      double mean = 0;
      bool all_single = true;
      for (std::size_t c : counts) {
        mean += static_cast<double>(c);
        all_single = all_single && c == 1;
      }
      mean /= static_cast<double>(counts.size());
      acc.sum[k] += mean;
      acc.sum_sq[k] += mean * mean;
      acc.recovered[k] += all_single ? 1 : 0;
    }
    ++acc.trials;
  }
  return acc;
}

}  // namespace

std::vector<ConvergenceRow> run_convergence(const ConvergenceOptions& options) {
  require_valid(options.charset);
  if (options.max_k == 0 || options.trials < 2)
    throw Error(Errc::invalid_parameters, "need max_k >= 1 and at least 2 trials");
  if (options.password)
    check_password(*options.password, options.charset);
  else if (options.random_length == 0 || options.random_length > kMaxLength)
    throw Error(Errc::invalid_parameters, "random password length must be 1..255");

  const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, options.trials));
  std::vector<Accumulator> parts(threads, Accumulator(options.max_k));
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t share = options.trials / threads + (w < options.trials % threads ? 1 : 0);
      workers.emplace_back([&, w, share] { parts[w] = run_trials(options, share, w); });
    }
  }
  Accumulator total(options.max_k);
  for (const auto& part : parts) total.merge(part);

  std::vector<ConvergenceRow> rows;
  const double n = static_cast<double>(total.trials);
  for (std::size_t k = 0; k < options.max_k; ++k) {
    const double mean = total.sum[k] / n;
    const double var = std::max(0.0, (total.sum_sq[k] - n * mean * mean) / (n - 1));
    rows.push_back(ConvergenceRow{
        k + 1, mean,
        expected_survivors(options.charset.size(), options.charset.per_digit(), k + 1),
        std::sqrt(var / n), static_cast<double>(total.recovered[k]) / n});
  }
  return rows;
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "k,mean_survivors,closed_form,stderr\n";
  const auto flags = out.flags();
  out << std::setprecision(10);
  for (const auto& r : rows)
    out << r.k << ',' << r.mean_survivors << ',' << r.closed_form << ',' << r.standard_error << '\n';
  out.flags(flags);
}

WeakObserverSummary simulate_weak_observer(std::string_view password, const CharacterSet& charset,
                                           std::size_t sessions, std::uint64_t seed) {
  check_password(password, charset);
  if (sessions == 0) throw Error(Errc::invalid_parameters, "need at least one session");
  std::mt19937_64 rng(seed);
  WeakObserverSummary out;
  out.length = password.size();
  out.sessions = sessions;
  out.digit_counts.assign(password.size(), {});
  for (std::size_t s = 0; s < sessions; ++s) {
    const DigitSequence typed = encode(password, generate(charset, rng));
    for (std::size_t i = 0; i < typed.size(); ++i) ++out.digit_counts[i][typed[i]];
  }
  // Each position's typed digit is uniform whatever the character, so the
  // digits carry no information beyond the length.
  const double expected = static_cast<double>(sessions) / kCodeAlphabetSize;
  const boost::math::chi_squared dist(static_cast<double>(kCodeAlphabetSize - 1));
  for (const auto& counts : out.digit_counts) {
    double stat = 0;
    for (std::size_t c : counts) stat += std::pow(static_cast<double>(c) - expected, 2) / expected;
    out.chi_square.push_back(stat);
    out.p_value.push_back(boost::math::cdf(boost::math::complement(dist, stat)));
  }
  out.candidates_per_position = charset.size();
  return out;
}

}  // namespace gridpass
