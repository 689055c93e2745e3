#pragma once

#include "gridpass/codegrid.hpp"

namespace gridpass {

/// The reference login form as a grid over default_charset(). Under it
/// "Lagos(2006)" encodes to 27318081174.
///
/// Letter and digit labels are transcribed. The special-character labels were
/// reconstructed from the candidate columns for 27318081174 plus the rule that
/// every digit labels exactly 8 characters:
///   . 0   + 4   * 5   / 7   ( 0   ) 4   { 2   } 2   - 2
///   _ 8   % 4   = 4   @ 6   ! 4   ^ 2   $ 5   , 5   # 6
const CodeGrid& reference_grid();

}  // namespace gridpass
