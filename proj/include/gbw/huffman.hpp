#pragma once

#include <cstdint>
#include <vector>

#include "gbw/bitio.hpp"

namespace gbw {

// A canonical prefix code over the dense alphabet [0, lengths.size()).
// Symbols with length 0 have no codeword (frequency zero). Codes are
// assigned in (length, symbol) order, so the length array alone rebuilds the
// code on the decoder side.
class HuffmanCode {
public:
    // Optimal code lengths for the given frequencies (zeros allowed; at
    // least one must be positive). A one-symbol alphabet gets a 1-bit code.
    static HuffmanCode build(const std::vector<uint64_t>& freqs);

    // Rebuild from stored lengths.
    static HuffmanCode from_lengths(std::vector<uint8_t> lengths);

    void encode(uint32_t symbol, BitWriter& out) const;
    uint32_t decode(BitReader& in) const;

    const std::vector<uint8_t>& lengths() const { return lengths_; }
    uint64_t codeword(uint32_t symbol) const { return codes_[symbol]; }
    unsigned length(uint32_t symbol) const { return lengths_[symbol]; }

private:
    void finish(); // derive canonical codes and decode tables from lengths_

    std::vector<uint8_t> lengths_;
    std::vector<uint64_t> codes_;
    unsigned max_len_ = 0;
    // Decoding: symbols sorted by (length, id); per length, the value of the
    // first codeword and the index of its symbol in the sorted list.
    std::vector<uint32_t> sorted_;
    std::vector<uint64_t> first_code_;
    std::vector<uint32_t> first_index_;
    std::vector<uint32_t> count_;
};

} // namespace gbw
