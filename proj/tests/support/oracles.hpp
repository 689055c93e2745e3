#pragma once

// Test-only reference computations. Nothing here calls the code paths it is
// used to check: grids are read through codes() only, stores through
// records() only.

#include <algorithm>
#include <cmath>
#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "gridpass/codegrid.hpp"
#include "gridpass/credential_store.hpp"

namespace gridpass::oracle {

// Candidate columns for input 27318081174 under the reference grid, as sets.
// Hand-transcribed: lowercase h and t in column 1 (H is 0, T is 1), j in
// column 3 (i is 6, j is 3), column 4 equal to columns 8 and 9, and '.' in
// column 6.
inline const std::array<std::string, 11> kReferenceColumns = {
    "LYht{}-^",  // 2
    "BCE68av/",  // 7
    "V479cgjw",  // 3
    "TW01bdop",  // 1
    "AF23nsy_",  // 8
    "HMNeuz.(",  // 0
    "AF23nsy_",  // 8
    "TW01bdop",  // 1
    "TW01bdop",  // 1
    "BCE68av/",  // 7
    "IPZ+)%=!",  // 4
};

inline std::set<char> as_set(const std::string& s) { return {s.begin(), s.end()}; }

inline std::map<char, Digit> label_table(const CodeGrid& grid) {
  std::map<char, Digit> table;
  const auto& chars = grid.charset().chars();
  for (std::size_t i = 0; i < chars.size(); ++i) table[chars[i]] = grid.codes()[i];
  return table;
}

inline std::string digits_of(const std::string& password, const CodeGrid& grid) {
  const auto table = label_table(grid);
  std::string out;
  for (char c : password) out.push_back(static_cast<char>('0' + table.at(c)));
  return out;
}

// Charset-index order, compared position by position.
inline std::vector<std::size_t> rank_vector(const std::string& s, const CharacterSet& charset) {
  std::vector<std::size_t> out;
  for (char c : s) out.push_back(charset.chars().find(c));
  return out;
}

// Which stored password a correct verifier must return: the charset-order
// minimum among records whose digits equal `typed`.
inline std::optional<std::string> expected_match(const std::string& typed, const CodeGrid& grid,
                                                 const CredentialStore& store) {
  std::optional<std::string> best;
  for (const auto& r : store.records()) {
    if (r.password.size() != typed.size() || digits_of(r.password, grid) != typed) continue;
    if (!best || rank_vector(r.password, grid.charset()) < rank_vector(*best, grid.charset())) best = r.password;
  }
  return best;
}

inline bool linear_lookup(const CredentialStore& store, const std::string& password) {
  return std::any_of(store.records().begin(), store.records().end(),
                     [&](const CredentialRecord& r) { return r.password == password; });
}

// Every string over the charset of length n whose digits equal `typed`, by
// enumerating all |X|^n strings.
inline std::vector<std::string> brute_force_preimages(const std::string& typed, const CodeGrid& grid) {
  const auto& chars = grid.charset().chars();
  std::vector<std::string> out;
  std::vector<std::size_t> idx(typed.size(), 0);
  for (;;) {
    std::string s;
    for (std::size_t i : idx) s.push_back(chars[i]);
    if (digits_of(s, grid) == typed) out.push_back(s);
    std::size_t pos = idx.size();
    while (pos > 0 && ++idx[pos - 1] == chars.size()) idx[--pos] = 0;
    if (pos == 0) return out;
  }
}

// Upper-tail probability of a chi-square statistic.
inline double chi_square_p(double statistic, double dof) {
  const boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

// Pearson chi-square of a contingency table against independence.
template <std::size_t Cols>
double contingency_chi_square(const std::vector<std::array<double, Cols>>& table) {
  std::vector<double> row(table.size(), 0);
  std::array<double, Cols> col{};
  double total = 0;
  for (std::size_t r = 0; r < table.size(); ++r)
    for (std::size_t c = 0; c < Cols; ++c) {
      row[r] += table[r][c];
      col[c] += table[r][c];
      total += table[r][c];
    }
  double stat = 0;
  for (std::size_t r = 0; r < table.size(); ++r)
    for (std::size_t c = 0; c < Cols; ++c) {
      const double e = row[r] * col[c] / total;
      stat += (table[r][c] - e) * (table[r][c] - e) / e;
    }
  return stat;
}

// Survivors at one position after k independent uniform grids, simulated
// without the library: a fresh shuffle of the balanced label multiset per
// observation, counting characters that shared the true character's label
// every time. The true character sits at index 0.
inline double monte_carlo_survivors(std::size_t charset_size, std::size_t k, std::size_t trials,
                                    std::uint64_t seed, double* standard_error = nullptr) {
  std::mt19937_64 rng(seed);
  std::vector<int> labels(charset_size);
  double sum = 0, sum_sq = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::vector<bool> alive(charset_size, true);
    for (std::size_t obs = 0; obs < k; ++obs) {
      for (std::size_t i = 0; i < charset_size; ++i) labels[i] = static_cast<int>(i % 10);
      std::shuffle(labels.begin(), labels.end(), rng);
      for (std::size_t i = 0; i < charset_size; ++i)
        if (labels[i] != labels[0]) alive[i] = false;
    }
    const double count = static_cast<double>(std::count(alive.begin(), alive.end(), true));
    sum += count;
    sum_sq += count * count;
  }
  const double n = static_cast<double>(trials);
  const double mean = sum / n;
  if (standard_error) *standard_error = std::sqrt(std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)) / n);
  return mean;
}

}  // namespace gridpass::oracle
