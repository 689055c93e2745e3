#pragma once

#include <string>
#include <vector>

#include "gridpass/codegrid.hpp"

namespace gridpass {

// Characters a grid labels with one digit, in charset order.
struct CandidateSet {
  Digit digit;
  std::string chars;

  friend bool operator==(const CandidateSet&, const CandidateSet&) = default;
};

/// Preimage of `digit` under `grid`; always per_digit() characters.
CandidateSet candidates(Digit digit, const CodeGrid& grid);

/// One candidate set per typed digit.
std::vector<CandidateSet> decode_sequence(const DigitSequence& digits, const CodeGrid& grid);

}  // namespace gridpass
