#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gbw/error.hpp"

namespace gbw {

// Bit sink, most significant bit of each byte first. Codeword bits arrive as
// the low `len` bits of `code`, emitted high bit first.
class BitWriter {
public:
    void put(uint64_t code, unsigned len) {
        for (unsigned k = len; k-- > 0;) {
            if (fill_ == 0) {
                bytes_.push_back(0);
                fill_ = 8;
            }
            --fill_;
            if ((code >> k) & 1) bytes_.back() |= static_cast<uint8_t>(1u << fill_);
        }
    }
    uint64_t bit_count() const { return bytes_.size() * 8 - fill_; }
    std::vector<uint8_t> take() {
        fill_ = 0;
        return std::move(bytes_);
    }

private:
    std::vector<uint8_t> bytes_;
    unsigned fill_ = 0; // unused low bits in the last byte
};

// Matching MSB-first bit source.
class BitReader {
public:
    explicit BitReader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

    unsigned bit() {
        size_t byte = pos_ >> 3;
        if (byte >= bytes_.size()) throw CorruptArchiveError("bit stream exhausted");
        unsigned b = (bytes_[byte] >> (7 - (pos_ & 7))) & 1;
        ++pos_;
        return b;
    }
    uint64_t bits(unsigned len) {
        uint64_t v = 0;
        for (unsigned k = 0; k < len; ++k) v = (v << 1) | bit();
        return v;
    }

private:
    std::span<const uint8_t> bytes_;
    uint64_t pos_ = 0;
};

} // namespace gbw
