#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace veritas {

/// Deceptive is the positive class everywhere: +1 for margins, 1 for
/// logistic targets, and the winner of every tie.
enum class Label : std::uint8_t { deceptive = 0, truthful = 1 };

inline constexpr std::array<Label, 2> kLabels{Label::deceptive, Label::truthful};

constexpr std::size_t index_of(Label l) noexcept { return static_cast<std::size_t>(l); }
constexpr int sign_of(Label l) noexcept { return l == Label::deceptive ? 1 : -1; }
constexpr Label label_from_sign(double v) noexcept { return v >= 0.0 ? Label::deceptive : Label::truthful; }

constexpr std::string_view to_string(Label l) noexcept {
  return l == Label::deceptive ? "deceptive" : "truthful";
}

}  // namespace veritas
