#include "gridpass/random.hpp"

#include <sys/random.h>

#include <cerrno>
#include <system_error>

namespace gridpass {

void secure_random_bytes(void* buf, std::size_t len) {
  auto* out = static_cast<unsigned char*>(buf);
  while (len > 0) {
    const ssize_t got = ::getrandom(out, len, 0);
    if (got < 0) {
      if (errno == EINTR) continue;
      throw std::system_error(errno, std::generic_category(), "getrandom");
    }
    out += got;
    len -= static_cast<std::size_t>(got);
  }
}

SystemRandom::result_type SystemRandom::operator()() {
  result_type value;
  secure_random_bytes(&value, sizeof value);
  return value;
}

std::string random_token(std::size_t bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string raw(bytes, '\0');
  secure_random_bytes(raw.data(), raw.size());
  std::string out;
  out.reserve(bytes * 2);
  for (unsigned char b : raw) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0x0f]);
  }
  return out;
}

}  // namespace gridpass
