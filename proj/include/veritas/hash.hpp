#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace veritas {

/// Incremental FNV-1a (64-bit). Used for fingerprints, not for security.
class Fnv1a64 {
 public:
  Fnv1a64& update(std::string_view bytes) noexcept;
  Fnv1a64& update_u64(std::uint64_t value) noexcept;
  Fnv1a64& update_f64(double value) noexcept;
  std::uint64_t digest() const noexcept { return state_; }
  std::string hex() const;

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::uint32_t crc32(std::string_view bytes) noexcept;

std::string to_hex(std::uint64_t value, int width);

}  // namespace veritas
