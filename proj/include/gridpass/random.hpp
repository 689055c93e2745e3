#pragma once

#include <cstdint>
#include <limits>
#include <string>

namespace gridpass {

// UniformRandomBitGenerator backed by the kernel CSPRNG (getrandom(2)).
// Stateless; each instance may be used from a single thread at a time.
class SystemRandom {
 public:
  using result_type = std::uint64_t;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
};

// Fills buf with bytes from the kernel CSPRNG. Throws std::system_error.
void secure_random_bytes(void* buf, std::size_t len);

// Lowercase hex token carrying `bytes` bytes of entropy.
std::string random_token(std::size_t bytes = 16);

}  // namespace gridpass
