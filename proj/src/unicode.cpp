#include "gbw/unicode.hpp"

#include <algorithm>
#include <iterator>

namespace gbw::uni {

namespace {

struct CpRange {
    char32_t lo, hi;
};
struct LowerRun {
    char32_t lo, hi;
    int32_t delta;
};

#include "unicode_tables.inc"

template <size_t N>
bool in_ranges(const CpRange (&table)[N], char32_t cp) {
    auto it = std::upper_bound(std::begin(table), std::end(table), cp,
                               [](char32_t c, const CpRange& r) { return c < r.lo; });
    return it != std::begin(table) && cp <= std::prev(it)->hi;
}

} // namespace

bool decode_utf8(std::string_view s, size_t& pos, char32_t& cp) {
    if (pos >= s.size()) return false;
    const auto* p = reinterpret_cast<const unsigned char*>(s.data()) + pos;
    unsigned char b0 = p[0];
    size_t len;
    char32_t v;
    if (b0 < 0x80) {
        len = 1;
        v = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        v = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        v = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        v = b0 & 0x07;
    } else {
        return false;
    }
    if (pos + len > s.size()) return false;
    for (size_t i = 1; i < len; ++i) {
        if ((p[i] & 0xC0) != 0x80) return false;
        v = (v << 6) | (p[i] & 0x3F);
    }
    // Overlong forms, surrogate halves and out-of-range values are invalid.
    static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (v < kMin[len] || v > 0x10FFFF || (v >= 0xD800 && v <= 0xDFFF)) return false;
    pos += len;
    cp = v;
    return true;
}

void encode_utf8(char32_t cp, std::string& out) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

bool is_alnum(char32_t cp) {
    if (cp < 0x80) { // fast path for ASCII
        return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
               (cp >= 'A' && cp <= 'Z');
    }
    return in_ranges(kAlnumRanges, cp);
}

bool is_space(char32_t cp) {
    for (char32_t s : kSpaceCps)
        if (s == cp) return true;
    return false;
}

char32_t to_lower(char32_t cp) {
    if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 32 : cp;
    auto it = std::upper_bound(std::begin(kLowerRuns), std::end(kLowerRuns), cp,
                               [](char32_t c, const LowerRun& r) { return c < r.lo; });
    if (it != std::begin(kLowerRuns) && cp <= std::prev(it)->hi)
        return static_cast<char32_t>(static_cast<int64_t>(cp) + std::prev(it)->delta);
    return cp;
}

} // namespace gbw::uni
