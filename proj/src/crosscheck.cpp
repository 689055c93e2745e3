#include "gridpass/crosscheck.hpp"

#include <random>
#include <sstream>

#include "gridpass/decoder.hpp"

namespace gridpass {

namespace {

CharacterSet small_charset(std::size_t size) {
  if (size == 0 || size % kCodeAlphabetSize != 0 || size > default_charset().size())
    throw Error(Errc::invalid_parameters, "crosscheck charset size must be 10, 20, ... 80");
  return CharacterSet("first" + std::to_string(size), default_charset().chars().substr(0, size));
}

std::string random_password(std::size_t length, const CharacterSet& charset, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, charset.size() - 1);
  std::string pw(length, '\0');
  for (char& ch : pw) ch = charset.at(pick(rng));
  return pw;
}

// Swaps random positions for other characters with the same code, giving a
// password that collides with `pw` under `grid`.
std::string sibling(std::string pw, const CodeGrid& grid, std::mt19937_64& rng) {
  for (char& ch : pw) {
    if (rng() % 2) continue;
    const auto peers = candidates(grid.code_of(ch), grid).chars;
    ch = peers[rng() % peers.size()];
  }
  return pw;
}

bool same(const AuthResult& a, const AuthResult& b) {
  return a.outcome == b.outcome && a.matched_password == b.matched_password;
}

}  // namespace

CrosscheckReport crosscheck(const CrosscheckOptions& options) {
  if (options.charset_sizes.empty() || options.max_length == 0 || options.max_length > kMaxLength)
    throw Error(Errc::invalid_parameters, "need charset sizes and 1 <= max_length <= 255");
  std::vector<CharacterSet> charsets;
  for (std::size_t size : options.charset_sizes) charsets.push_back(small_charset(size));

  std::mt19937_64 rng(options.seed);
  CrosscheckReport report;
  for (std::size_t c = 0; c < options.cases; ++c) {
    const CharacterSet& charset = charsets[rng() % charsets.size()];
    const CodeGrid grid = generate(charset, rng);
    const std::size_t n = 1 + rng() % options.max_length;

    CredentialStore store(charset);
    const std::size_t target = rng() % (options.max_store + 1);
    std::string last;
    for (std::size_t attempts = 0; store.size() < target && attempts < 4 * target; ++attempts) {
      std::string pw;
      const auto roll = rng() % 4;
      if (roll == 0 && !last.empty())
        pw = sibling(last, grid, rng);
      else if (roll == 1)
        pw = random_password(1 + rng() % options.max_length, charset, rng);
      else
        pw = random_password(n, charset, rng);
      if (store.lookup(pw)) continue;
      store = store.add({std::nullopt, pw});
      last = pw;
    }

    std::vector<Digit> raw(n);
    const auto records = store.records();
    std::vector<std::string> same_length;
    for (const auto& r : records)
      if (r.password.size() == n) same_length.push_back(r.password);
    if (!same_length.empty() && rng() % 3 != 0) {
      const DigitSequence typed = encode(same_length[rng() % same_length.size()], grid);
      raw.assign(typed.digits().begin(), typed.digits().end());
    } else {
      for (Digit& d : raw) d = static_cast<Digit>(rng() % kCodeAlphabetSize);
    }
    const DigitSequence digits(raw);

    const AuthResult naive = verify_naive(digits, grid, store);
    AuthResult inverted = verify_inverted(digits, grid, store);
    const auto matches = matching_passwords(digits, grid, store);
    if (options.break_tie_break && !matches.empty()) inverted.matched_password = matches.back();

    ++report.cases;
    if (naive.accepted()) ++report.accepted;
    if (matches.size() > 1) ++report.collisions;
    if (!same(naive, inverted)) {
      report.divergence = Counterexample{grid, digits, store, naive, inverted};
      return report;
    }
  }
  return report;
}

std::string describe(const Counterexample& ce) {
  std::ostringstream out;
  const auto show = [](const AuthResult& r) {
    return r.accepted() ? "accepted '" + *r.matched_password + "'" : std::string("rejected");
  };
  out << "charset " << ce.grid.charset().id() << " '" << ce.grid.charset().chars() << "'\n";
  out << "grid    ";
  for (Digit d : ce.grid.codes()) out << static_cast<char>('0' + d);
  out << "\ndigits  " << ce.digits.to_string() << "\nstore  ";
  for (const auto& r : ce.store.records()) out << " '" << r.password << "'";
  out << "\nnaive    " << show(ce.naive) << "\ninverted " << show(ce.inverted) << '\n';
  return out.str();
}

}  // namespace gridpass
