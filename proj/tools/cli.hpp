#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gridpass::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUserError = 1;
inline constexpr int kExitIoError = 2;
inline constexpr int kExitCheckFailed = 3;

struct Io {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  bool interactive = false;  // stdin is a terminal: prompt with echo disabled
};

/// Runs the gridpass command line; args excludes the program name.
int run(const std::vector<std::string>& args, Io io);

}  // namespace gridpass::cli
