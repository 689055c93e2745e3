#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "gridpass/attack_sim.hpp"
#include "gridpass/decoder.hpp"
#include "gridpass/fixtures.hpp"
#include "support/oracles.hpp"

namespace gridpass {
namespace {

TEST(AttackSimTest, OneObservationLeavesCandidateSets) {
  AttackTranscript t;
  t.observe(reference_grid(), encode("Lagos(2006)", reference_grid()));
  EXPECT_EQ(t.survivor_counts(), std::vector<std::size_t>(11, 8));
  const auto survivors = t.survivors();
  for (std::size_t i = 0; i < survivors.size(); ++i)
    EXPECT_EQ(oracle::as_set(survivors[i]), oracle::as_set(oracle::kReferenceColumns[i]));
  EXPECT_EQ(t.residual_space(), BigCount(8589934592ULL));
}

TEST(AttackSimTest, TrueCharactersSurviveAndSetsShrink) {
  std::mt19937_64 rng(3);
  const std::string password = "Lagos(2006)";
  AttackTranscript t;
  std::vector<std::size_t> previous(password.size(), 80);
  for (int k = 0; k < 40; ++k) {
    const CodeGrid g = generate(default_charset(), rng);
    t.observe(g, encode(password, g));
    const auto survivors = t.survivors();
    const auto counts = t.survivor_counts();
    for (std::size_t i = 0; i < password.size(); ++i) {
      ASSERT_NE(survivors[i].find(password[i]), std::string::npos);
      ASSERT_LE(counts[i], previous[i]);
    }
    previous = counts;
  }
  // Forty observations pin every position to the true character.
  EXPECT_EQ(t.survivor_counts(), std::vector<std::size_t>(password.size(), 1));
  EXPECT_EQ(t.observations().size(), 40u);
}

TEST(AttackSimTest, ObserveRejectsLengthMismatch) {
  AttackTranscript t;
  t.observe(reference_grid(), DigitSequence::parse("123"));
  try {
    t.observe(reference_grid(), DigitSequence::parse("12"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::length_mismatch);
  }
}

TEST(AttackSimTest, ObserveRejectsOtherCharset) {
  AttackTranscript t;
  t.observe(reference_grid(), DigitSequence::parse("1"));
  std::mt19937_64 rng(1);
  EXPECT_THROW(t.observe(generate(CharacterSet("ten", "ABCDEFGHIJ"), rng), DigitSequence::parse("1")), Error);
}

TEST(AttackSimTest, ClosedFormValues) {
  EXPECT_DOUBLE_EQ(expected_survivors(80, 8, 1), 8.0);
  EXPECT_NEAR(expected_survivors(80, 8, 2), 1.0 + 49.0 / 79.0, 1e-12);
  for (std::size_t k = 1; k < 8; ++k) EXPECT_DOUBLE_EQ(expected_survivors(10, 1, k), 1.0);
  EXPECT_THROW(expected_survivors(80, 7, 1), Error);
  EXPECT_THROW(expected_survivors(80, 8, 0), Error);
  EXPECT_THROW(expected_survivors(0, 0, 1), Error);
}

// Independent Monte Carlo (no library grid code) against the closed form.
TEST(AttackSimTest, ClosedFormMatchesIndependentMonteCarlo) {
  double se = 0;
  const double k2 = oracle::monte_carlo_survivors(80, 2, 100'000, 2024, &se);
  EXPECT_NEAR(k2, 1.6203, 0.02);
  EXPECT_NEAR(k2, expected_survivors(80, 8, 2), 3 * se);
  for (std::size_t k : {1u, 3u, 4u}) {
    const double mean = oracle::monte_carlo_survivors(80, k, 50'000, 100 + k, &se);
    EXPECT_NEAR(mean, expected_survivors(80, 8, k), std::max(3 * se, 1e-12)) << "k=" << k;
  }
}

TEST(AttackSimTest, SimulateSingleSessionResidualSpace) {
  std::mt19937_64 rng(6);
  const auto result = simulate("Lagos(2006)", default_charset(), 1, rng);
  EXPECT_EQ(result.residual_space, BigCount(8589934592ULL));
  EXPECT_EQ(result.survivor_counts, std::vector<std::size_t>(11, 8));
  EXPECT_THROW(simulate("bad pw", default_charset(), 1, rng), Error);
}

TEST(AttackSimTest, ConvergenceMatchesClosedFormAtThree) {
  ConvergenceOptions options;
  options.max_k = 3;
  options.trials = 10'000;
  options.seed = 42;
  const auto rows = run_convergence(options);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_DOUBLE_EQ(rows[0].mean_survivors, 8.0);
  EXPECT_DOUBLE_EQ(rows[0].standard_error, 0.0);
  EXPECT_NEAR(rows[2].mean_survivors, expected_survivors(80, 8, 3), 3 * rows[2].standard_error);
}

TEST(AttackSimTest, ConvergenceRecoversPasswordsEventually) {
  ConvergenceOptions options;
  options.max_k = 8;
  options.trials = 2000;
  options.password = "Lagos(2006)";
  const auto rows = run_convergence(options);
  EXPECT_EQ(rows[0].recovered_fraction, 0.0);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GE(rows[i].recovered_fraction, rows[i - 1].recovered_fraction);
  EXPECT_GT(rows.back().recovered_fraction, 0.9);
}

TEST(AttackSimTest, ConvergenceIsDeterministicPerSeedAndThreadCount) {
  ConvergenceOptions options;
  options.max_k = 3;
  options.trials = 500;
  options.threads = 3;
  const auto a = run_convergence(options);
  const auto b = run_convergence(options);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].mean_survivors, b[i].mean_survivors);
}

TEST(AttackSimTest, ConvergenceRejectsBadOptions) {
  ConvergenceOptions options;
  options.trials = 1;
  EXPECT_THROW(run_convergence(options), Error);
  options.trials = 10;
  options.max_k = 0;
  EXPECT_THROW(run_convergence(options), Error);
  options.max_k = 2;
  options.password = "a b";
  EXPECT_THROW(run_convergence(options), Error);
}

TEST(AttackSimTest, CsvLayout) {
  std::ostringstream out;
  write_convergence_csv(out, {{1, 8.0, 8.0, 0.0, 0.0}, {2, 1.62, 1.6203, 0.001, 0.1}});
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "k,mean_survivors,closed_form,stderr");
  std::getline(in, line);
  EXPECT_EQ(line, "1,8,8,0");
  std::getline(in, line);
  EXPECT_EQ(line.substr(0, 2), "2,");
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), 3);
}

TEST(AttackSimTest, WeakObserverLearnsOnlyLength) {
  const auto weak = simulate_weak_observer("Lagos(2006)", default_charset(), 20'000, 5);
  EXPECT_EQ(weak.length, 11u);
  EXPECT_EQ(weak.candidates_per_position, 80u);
  ASSERT_EQ(weak.p_value.size(), 11u);
  // Typed digits are uniform at every position whatever the character.
  for (double p : weak.p_value) EXPECT_GT(p, 1e-4);
}

}  // namespace
}  // namespace gridpass
