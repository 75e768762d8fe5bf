#include "veritas/embedding.hpp"
#include "veritas/error.hpp"
#include "veritas/text.hpp"

namespace veritas {

namespace {

std::string strip_punctuation(std::string_view piece) {
  std::size_t begin = 0;
  while (begin < piece.size()) {
    std::size_t pos = begin;
    if (!text::is_punctuation(text::next_code_point(piece, pos))) break;
    begin = pos;
  }
  std::size_t end = piece.size();
  while (end > begin) {
    std::size_t start = end - 1;
    while (start > begin && (static_cast<unsigned char>(piece[start]) & 0xC0) == 0x80) --start;
    std::size_t pos = start;
    if (!text::is_punctuation(text::next_code_point(piece, pos))) break;
    end = start;
  }
  return std::string(piece.substr(begin, end - begin));
}

}  // namespace

std::vector<std::string> split_tokens(std::string_view input, bool lowercase) {
  std::vector<std::string> tokens;
  std::size_t pos = 0;
  std::size_t piece_start = 0;
  auto flush = [&](std::size_t piece_end) {
    if (piece_end > piece_start) {
      auto token = strip_punctuation(input.substr(piece_start, piece_end - piece_start));
      if (!token.empty()) tokens.push_back(lowercase ? text::ascii_lower(token) : std::move(token));
    }
  };
  while (pos < input.size()) {
    const std::size_t cp_start = pos;
    if (text::is_unicode_space(text::next_code_point(input, pos))) {
      flush(cp_start);
      piece_start = pos;
    }
  }
  flush(input.size());
  return tokens;
}

TokenSequence tokenize(std::string_view input, bool lowercase) {
  TokenSequence seq{split_tokens(input, lowercase)};
  if (seq.tokens.empty()) throw Error(Errc::EmptyText, "no tokens in input text");
  return seq;
}

}  // namespace veritas
