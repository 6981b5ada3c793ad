#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace erbench {

// Lowercased word tokens. A token is a maximal run of letters and digits;
// everything else (whitespace, punctuation, hyphens, symbols) separates
// tokens. Input is UTF-8; invalid bytes act as separators. No stemming and
// no stopword removal.
std::vector<std::string> tokenize(std::string_view text);

// Same segmentation, calling `emit` for every token without materializing
// the vector.
template <typename Fn>
void for_each_token(std::string_view text, Fn&& emit);

namespace detail {
// Decodes one code point at `pos`, advancing it; returns U+FFFD on bad input.
char32_t decode_utf8(std::string_view s, size_t& pos);
void append_utf8(std::string& out, char32_t cp);
bool is_word_char(char32_t cp);
char32_t to_lower(char32_t cp);
}  // namespace detail

template <typename Fn>
void for_each_token(std::string_view text, Fn&& emit) {
  std::string current;
  size_t pos = 0;
  while (pos < text.size()) {
    char32_t cp = detail::decode_utf8(text, pos);
    if (detail::is_word_char(cp)) {
      detail::append_utf8(current, detail::to_lower(cp));
    } else if (!current.empty()) {
      emit(std::string_view(current));
      current.clear();
    }
  }
  if (!current.empty()) emit(std::string_view(current));
}

}  // namespace erbench
