#include "gbw/etdc.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace gbw {

namespace {

// kBase[len] = first rank encoded with `len` bytes: 0, 128, 128+128^2, ...
constexpr unsigned kMaxLen = 9;
constexpr auto kBase = [] {
    std::array<uint64_t, kMaxLen + 2> base{};
    uint64_t cap = 128, sum = 0;
    for (unsigned len = 1; len <= kMaxLen + 1; ++len) {
        base[len] = sum;
        sum += cap;
        if (len < kMaxLen + 1) cap *= 128;
    }
    return base;
}();

} // namespace

unsigned etdc_code_length(uint64_t rank) {
    unsigned len = 1;
    while (len < kMaxLen && rank >= kBase[len + 1]) ++len;
    return len;
}

void etdc_append(uint64_t rank, Bytes& out) {
    unsigned len = etdc_code_length(rank);
    uint64_t x = rank - kBase[len];
    for (unsigned k = len; k-- > 1;) out.push_back(static_cast<uint8_t>((x >> (7 * k)) & 0x7F));
    out.push_back(static_cast<uint8_t>(0x80 | (x & 0x7F)));
}

Bytes etdc_code(uint64_t rank) {
    Bytes out;
    etdc_append(rank, out);
    return out;
}

uint64_t etdc_decode(std::span<const uint8_t> bytes, size_t& pos) {
    uint64_t x = 0;
    for (unsigned len = 1; len <= kMaxLen; ++len, ++pos) {
        if (pos >= bytes.size()) throw CorruptArchiveError("truncated codeword");
        uint8_t b = bytes[pos];
        if (b & 0x80) {
            ++pos;
            return (x << 7 | (b & 0x7F)) + kBase[len];
        }
        x = x << 7 | b;
    }
    throw CorruptArchiveError("codeword longer than " + std::to_string(kMaxLen) + " bytes");
}

RankAssignment assign_ranks(const std::vector<uint64_t>& counts) {
    RankAssignment ra;
    ra.id_of.resize(counts.size());
    std::iota(ra.id_of.begin(), ra.id_of.end(), 0);
    std::stable_sort(ra.id_of.begin(), ra.id_of.end(),
                     [&](uint32_t a, uint32_t b) { return counts[a] > counts[b]; });
    ra.rank_of.resize(counts.size());
    for (uint32_t r = 0; r < ra.id_of.size(); ++r) ra.rank_of[ra.id_of[r]] = r;
    return ra;
}

} // namespace gbw
