#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gbw/bytes.hpp"

namespace gbw {

// End-Tagged Dense Code. Rank r (0-based, denser = smaller) maps to a byte
// string whose final byte has the high bit set and all earlier bytes clear:
// the first 128 ranks get one byte, the next 128^2 two bytes, and so on,
// with the in-band offset written in base 128, most significant digit first.
// Any byte with the high bit set ends a codeword, so codeword boundaries are
// recognizable anywhere in a stream.

void etdc_append(uint64_t rank, Bytes& out);
Bytes etdc_code(uint64_t rank);

// Decodes the codeword starting at `pos`, advancing it. Throws
// CorruptArchiveError on truncation or over-long codewords.
uint64_t etdc_decode(std::span<const uint8_t> bytes, size_t& pos);

// Number of bytes rank r occupies.
unsigned etdc_code_length(uint64_t rank);

// Dense ranks from frequencies: index order is first-seen order, which
// breaks ties (equal counts keep their relative order). rank_of[id] and
// id_of[rank] are mutually inverse.
struct RankAssignment {
    std::vector<uint32_t> rank_of;
    std::vector<uint32_t> id_of;
};
RankAssignment assign_ranks(const std::vector<uint64_t>& counts);

} // namespace gbw
