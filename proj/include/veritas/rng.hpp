#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace veritas {

/// One splitmix64 step: advances `state` and returns the mixed output.
std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Seed for the `index`-th member of an ensemble derived from a base seed.
/// Equal to the (index + 1)-th splitmix64 output of a stream started at `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

/// xoshiro256** seeded from four consecutive splitmix64 outputs.
///
/// Every draw used by the library goes through `next()`, `bounded()` or
/// `shuffle()` so that sequences are reproducible outside this code base.
class Xoshiro256ss {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256ss(std::uint64_t seed) noexcept;

  std::uint64_t next() noexcept;
  result_type operator()() noexcept { return next(); }
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  /// Uniform integer in [0, bound) by rejection on `next() % bound`.
  std::uint64_t bounded(std::uint64_t bound) noexcept;

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() noexcept;

  /// Fisher-Yates, walking i from size-1 down to 1 and swapping with bounded(i+1).
  template <class T>
  void shuffle(std::span<T> items) noexcept {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(bounded(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

 private:
  std::uint64_t s_[4];
};

}  // namespace veritas
