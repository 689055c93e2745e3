#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gridpass {

// Every typed failure the library can raise. The service and CLI map these
// onto wire reasons and exit codes.
enum class Errc {
  duplicate_character,
  length_not_divisible_by_10,
  forbidden_character,
  invalid_charset,
  character_not_in_charset,
  empty_password,
  over_length,
  contains_space,
  invalid_character,
  invalid_username,
  duplicate_password,
  duplicate_username,
  not_found,
  invalid_grid,
  empty_sequence,
  malformed_digits,
  length_mismatch,
  budget_exceeded,
  invalid_parameters,
  parse_error,
  charset_mismatch,
  unsorted_file,
  io_error,
};

// Kebab-case name used in reports, JSON bodies and CLI diagnostics.
std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace gridpass
