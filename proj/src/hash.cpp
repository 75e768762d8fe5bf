#include "veritas/hash.hpp"

#include <bit>
#include <cstdio>

#include <zlib.h>

namespace veritas {

Fnv1a64& Fnv1a64::update(std::string_view bytes) noexcept {
  for (unsigned char c : bytes) {
    state_ ^= c;
    state_ *= 0x100000001b3ULL;
  }
  return *this;
}

Fnv1a64& Fnv1a64::update_u64(std::uint64_t value) noexcept {
  for (int i = 0; i < 8; ++i) {
    state_ ^= (value >> (8 * i)) & 0xFF;
    state_ *= 0x100000001b3ULL;
  }
  return *this;
}

Fnv1a64& Fnv1a64::update_f64(double value) noexcept {
  return update_u64(std::bit_cast<std::uint64_t>(value));
}

std::string Fnv1a64::hex() const { return to_hex(state_, 16); }

std::uint32_t crc32(std::string_view bytes) noexcept {
  uLong crc = ::crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed in chunks for very large inputs.
  const auto* data = reinterpret_cast<const Bytef*>(bytes.data());
  std::size_t remaining = bytes.size();
  while (remaining > 0) {
    const auto chunk = static_cast<uInt>(remaining > (1u << 30) ? (1u << 30) : remaining);
    crc = ::crc32(crc, data, chunk);
    data += chunk;
    remaining -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

std::string to_hex(std::uint64_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*llx", width, static_cast<unsigned long long>(value));
  return buf;
}

}  // namespace veritas
