#pragma once

#include <cstdint>
#include <vector>

#include "gbw/bitvector.hpp"
#include "gbw/bytes.hpp"

namespace gbw {

// Directly addressable variable-length integers: values are cut into
// width-bit chunks, level l holding the l-th chunk of every value that needs
// one, with a continuation bit vector per non-final level. Reading value i
// follows ranks through the levels, so access is random without scanning.
class DacArray {
public:
    DacArray() = default;

    // width in [1, 16]; the number of levels adapts to the largest value.
    static DacArray build(const std::vector<uint64_t>& values, unsigned width = 4);

    uint64_t get(uint64_t index) const; // 0-based; throws DataError out of range
    uint64_t size() const { return count_; }
    unsigned width() const { return width_; }

    void serialize(ByteWriter& out) const;
    static DacArray deserialize(ByteReader& in);
    uint64_t space_bytes() const;

private:
    struct Level {
        uint64_t count = 0;
        std::vector<uint64_t> chunks; // packed width-bit chunks
        PlainBitVector more;          // set = value continues on next level
    };

    uint64_t chunk_at(const Level& lv, uint64_t i) const;

    unsigned width_ = 4;
    uint64_t count_ = 0;
    std::vector<Level> levels_;
};

} // namespace gbw
