#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace veritas::text {

bool is_valid_utf8(std::string_view bytes) noexcept;

/// Decodes one code point starting at `pos` and advances `pos` past it.
/// Assumes `bytes` is valid UTF-8.
char32_t next_code_point(std::string_view bytes, std::size_t& pos) noexcept;

bool is_unicode_space(char32_t cp) noexcept;
bool is_punctuation(char32_t cp) noexcept;

/// Trims ASCII and Unicode whitespace from both ends.
std::string_view trim(std::string_view s) noexcept;

/// ASCII-only lowercase; non-ASCII bytes pass through unchanged.
std::string ascii_lower(std::string_view s);

}  // namespace veritas::text
