#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gbw/bytes.hpp"

namespace gbw {

// Positions are 1-based throughout: rank(i) counts ones among bits 1..i
// (rank(0) = 0), select(k) is the position of the k-th one, access(i) reads
// bit i. This matches how the match arithmetic downstream is phrased.

// Uncompressed bits plus rank acceleration: an absolute count every 512 bits
// and word popcounts for the tail. Select binary-searches the samples.
class PlainBitVector {
public:
    PlainBitVector() = default;
    explicit PlainBitVector(const std::vector<uint8_t>& bits);

    uint64_t size() const { return n_; }
    uint64_t ones() const { return ones_; }
    bool access(uint64_t i) const;
    uint64_t rank(uint64_t i) const;
    uint64_t select(uint64_t k) const;

    void serialize(ByteWriter& out) const;
    static PlainBitVector deserialize(ByteReader& in);
    uint64_t space_bytes() const;

private:
    void finish();

    uint64_t n_ = 0;
    uint64_t ones_ = 0;
    std::vector<uint64_t> words_;
    std::vector<uint64_t> samples_; // ones before each 512-bit superblock
};

// Compressed representation: 15-bit blocks stored as a 4-bit popcount class
// plus a ceil(log2(C(15,class)))-bit index into the enumeration of that
// class, with absolute (rank, offset-bit-position) checkpoints every 32
// blocks. Queries are identical to PlainBitVector's.
class RrrBitVector {
public:
    RrrBitVector() = default;
    explicit RrrBitVector(const std::vector<uint8_t>& bits);

    uint64_t size() const { return n_; }
    uint64_t ones() const { return ones_; }
    bool access(uint64_t i) const;
    uint64_t rank(uint64_t i) const;
    uint64_t select(uint64_t k) const;

    void serialize(ByteWriter& out) const;
    static RrrBitVector deserialize(ByteReader& in);
    uint64_t space_bytes() const;

private:
    void finish();
    uint8_t block_class(uint64_t b) const;
    uint32_t decode_block(uint64_t b, uint64_t offset_pos) const;
    uint64_t offset_pos_of_block(uint64_t b, uint64_t* rank_out) const;

    uint64_t n_ = 0;
    uint64_t ones_ = 0;
    std::vector<uint8_t> classes_;      // packed 4-bit classes, two per byte
    std::vector<uint64_t> offset_bits_; // packed enumeration indices
    uint64_t offset_bit_count_ = 0;
    struct Checkpoint {
        uint64_t rank;
        uint64_t offset_pos;
    };
    std::vector<Checkpoint> checkpoints_; // every 32 blocks, derived on load
};

} // namespace gbw
