#include <gtest/gtest.h>

#include <array>
#include <random>

#include "gridpass/codegrid.hpp"
#include "gridpass/fixtures.hpp"
#include "support/oracles.hpp"

namespace gridpass {
namespace {

const CharacterSet kTen("ten", "ABCDEFGHIJ");

TEST(CodeGridTest, ReferenceGridLabels) {
  const CodeGrid& g = reference_grid();
  EXPECT_EQ(g.code_of('L'), 2);
  EXPECT_EQ(g.code_of('a'), 7);
  EXPECT_EQ(g.code_of('A'), 8);
}

TEST(CodeGridTest, EncodeLagos) {
  EXPECT_EQ(encode("Lagos(2006)", reference_grid()).to_string(), "27318081174");
  EXPECT_EQ(encode("A", reference_grid()).to_string(), "8");
}

TEST(CodeGridTest, CodeOfUnknownCharacter) {
  try {
    reference_grid().code_of('~');
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::character_not_in_charset);
  }
  // A non-ASCII byte (first byte of a UTF-8 sequence) is never a member.
  EXPECT_THROW(encode("\xc2\xa7", reference_grid()), Error);
}

TEST(CodeGridTest, EncodeErrors) {
  const auto code = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::io_error;
  };
  EXPECT_EQ(code([] { encode("", reference_grid()); }), Errc::empty_password);
  EXPECT_EQ(code([] { encode(std::string(256, 'a'), reference_grid()); }), Errc::over_length);
  EXPECT_EQ(code([] { encode("a b", reference_grid()); }), Errc::character_not_in_charset);
  EXPECT_NO_THROW(encode(std::string(255, 'a'), reference_grid()));
}

TEST(CodeGridTest, GeneratedGridsHaveExactFrequency) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    const CodeGrid g = generate(default_charset(), rng);
    std::array<int, 10> freq{};
    for (Digit d : g.codes()) ++freq[d];
    for (int f : freq) ASSERT_EQ(f, 8);
  }
}

TEST(CodeGridTest, TenCharacterSetLabelsEachDigitOnce) {
  std::mt19937_64 rng(3);
  const CodeGrid g = generate(kTen, rng);
  std::array<int, 10> freq{};
  for (Digit d : g.codes()) ++freq[d];
  for (int f : freq) EXPECT_EQ(f, 1);
}

TEST(CodeGridTest, GenerateRejectsInvalidCharset) {
  std::mt19937_64 rng(1);
  try {
    generate(CharacterSet("bad", "ABC"), rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::invalid_charset);
  }
}

TEST(CodeGridTest, DistinctSeedsGiveDistinctGrids) {
  int identical = 0;
  for (std::uint64_t s = 0; s < 10'000; ++s) {
    std::mt19937_64 a(2 * s + 1), b(2 * s + 2);
    if (generate(default_charset(), a) == generate(default_charset(), b)) ++identical;
  }
  EXPECT_EQ(identical, 0);
}

TEST(CodeGridTest, SameSeedIsDeterministic) {
  std::mt19937_64 a(99), b(99);
  EXPECT_EQ(generate(default_charset(), a), generate(default_charset(), b));
}

TEST(CodeGridTest, FromCodesRejectsUnbalancedOrWrongSize) {
  std::vector<Digit> codes(10);
  for (int i = 0; i < 10; ++i) codes[i] = static_cast<Digit>(i);
  EXPECT_NO_THROW(CodeGrid::from_codes(kTen, codes));
  codes[0] = 1;
  EXPECT_THROW(CodeGrid::from_codes(kTen, codes), Error);
  EXPECT_THROW(CodeGrid::from_codes(kTen, std::vector<Digit>(9, 0)), Error);
  codes[0] = 10;
  EXPECT_THROW(CodeGrid::from_codes(kTen, codes), Error);
}

TEST(CodeGridTest, EncodeIsPositionwise) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, 79), len(1, 12);
  for (int trial = 0; trial < 500; ++trial) {
    const CodeGrid g = generate(default_charset(), rng);
    std::string p1(len(rng), 'A'), p2(len(rng), 'A');
    for (char& c : p1) c = default_charset().at(pick(rng));
    for (char& c : p2) c = default_charset().at(pick(rng));
    const auto whole = encode(p1 + p2, g).to_string();
    ASSERT_EQ(whole, encode(p1, g).to_string() + encode(p2, g).to_string());
    ASSERT_EQ(whole, oracle::digits_of(p1 + p2, g));
  }
}

TEST(DigitSequenceTest, ParseAndErrors) {
  EXPECT_EQ(DigitSequence::parse("27318081174").size(), 11u);
  EXPECT_EQ(DigitSequence::parse("0").to_string(), "0");
  for (const char* bad : {"", "2a318", " 1", "1 ", "-1", "１"}) {
    try {
      DigitSequence::parse(bad);
      FAIL() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::malformed_digits) << bad;
    }
  }
  EXPECT_THROW(DigitSequence::parse(std::string(256, '1')), Error);
  EXPECT_NO_THROW(DigitSequence::parse(std::string(255, '1')));
  EXPECT_THROW(DigitSequence(std::vector<Digit>{1, 10}), Error);
}

}  // namespace
}  // namespace gridpass
