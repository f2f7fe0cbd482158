#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace gbw::uni {

// Strict UTF-8 decoder. Returns the code point at byte offset `pos` and
// advances `pos` past it. Rejects overlong forms, surrogates, values beyond
// U+10FFFF and truncated sequences by returning false (pos untouched).
bool decode_utf8(std::string_view s, size_t& pos, char32_t& cp);

// Appends the UTF-8 encoding of `cp` to `out`.
void encode_utf8(char32_t cp, std::string& out);

// Letter (category L*) or decimal digit (Nd).
bool is_alnum(char32_t cp);

// Whitespace for tokenization purposes: Unicode whitespace plus U+0000.
bool is_space(char32_t cp);

// Simple 1:1 lowercase mapping; identity when no mapping exists.
char32_t to_lower(char32_t cp);

} // namespace gbw::uni
