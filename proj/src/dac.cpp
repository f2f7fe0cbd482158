#include "gbw/dac.hpp"

#include "gbw/error.hpp"

namespace gbw {

namespace {

void pack_chunk(std::vector<uint64_t>& words, uint64_t index, unsigned width, uint64_t chunk) {
    uint64_t bit = index * width;
    uint64_t need = (bit + width + 63) / 64;
    if (words.size() < need) words.resize(need, 0);
    words[bit / 64] |= chunk << (bit % 64);
    if ((bit % 64) + width > 64) words[bit / 64 + 1] |= chunk >> (64 - bit % 64);
}

} // namespace

uint64_t DacArray::chunk_at(const Level& lv, uint64_t i) const {
    uint64_t bit = i * width_;
    uint64_t v = lv.chunks[bit / 64] >> (bit % 64);
    if ((bit % 64) + width_ > 64) v |= lv.chunks[bit / 64 + 1] << (64 - bit % 64);
    return v & ((uint64_t{1} << width_) - 1);
}

DacArray DacArray::build(const std::vector<uint64_t>& values, unsigned width) {
    if (width < 1 || width > 16) throw DataError("chunk width must be in [1,16]");
    DacArray dac;
    dac.width_ = width;
    dac.count_ = values.size();

    std::vector<uint64_t> pending = values;
    while (true) {
        Level lv;
        lv.count = pending.size();
        std::vector<uint8_t> more_bits(pending.size(), 0);
        std::vector<uint64_t> next;
        for (uint64_t i = 0; i < pending.size(); ++i) {
            pack_chunk(lv.chunks, i, width, pending[i] & ((uint64_t{1} << width) - 1));
            uint64_t rest = pending[i] >> width;
            if (rest != 0) {
                more_bits[i] = 1;
                next.push_back(rest);
            }
        }
        bool last = next.empty();
        if (!last) lv.more = PlainBitVector(more_bits);
        dac.levels_.push_back(std::move(lv));
        if (last) break;
        pending = std::move(next);
    }
    return dac;
}

uint64_t DacArray::get(uint64_t index) const {
    if (index >= count_) throw DataError("value index out of range");
    uint64_t v = 0;
    unsigned shift = 0;
    uint64_t i = index;
    for (size_t l = 0; l < levels_.size(); ++l) {
        const Level& lv = levels_[l];
        v |= chunk_at(lv, i) << shift;
        shift += width_;
        bool more = l + 1 < levels_.size() && lv.more.access(i + 1);
        if (!more) break;
        i = lv.more.rank(i + 1) - 1;
    }
    return v;
}

void DacArray::serialize(ByteWriter& out) const {
    out.u8(static_cast<uint8_t>(width_));
    out.u64(count_);
    out.u8(static_cast<uint8_t>(levels_.size()));
    for (size_t l = 0; l < levels_.size(); ++l) {
        const Level& lv = levels_[l];
        out.u64(lv.count);
        uint64_t words = (lv.count * width_ + 63) / 64;
        for (uint64_t w = 0; w < words; ++w) out.u64(w < lv.chunks.size() ? lv.chunks[w] : 0);
        if (l + 1 < levels_.size()) lv.more.serialize(out);
    }
}

DacArray DacArray::deserialize(ByteReader& in) {
    DacArray dac;
    dac.width_ = in.u8();
    if (dac.width_ < 1 || dac.width_ > 16) throw CorruptArchiveError("bad chunk width");
    dac.count_ = in.u64();
    unsigned levels = in.u8();
    if (dac.count_ > 0 && levels == 0) throw CorruptArchiveError("missing value levels");
    uint64_t expect = dac.count_;
    for (unsigned l = 0; l < levels; ++l) {
        Level lv;
        lv.count = in.u64();
        if (lv.count != expect) throw CorruptArchiveError("level size mismatch");
        if (lv.count > (uint64_t{1} << 40)) throw CorruptArchiveError("implausible level size");
        uint64_t words = (lv.count * dac.width_ + 63) / 64;
        if (words > in.remaining() / 8) throw CorruptArchiveError("implausible level size");
        lv.chunks.resize(words);
        for (auto& w : lv.chunks) w = in.u64();
        if (l + 1 < levels) {
            lv.more = PlainBitVector::deserialize(in);
            if (lv.more.size() != lv.count) throw CorruptArchiveError("continuation size mismatch");
            expect = lv.more.ones();
            if (expect == 0) throw CorruptArchiveError("empty trailing level");
        }
        dac.levels_.push_back(std::move(lv));
    }
    return dac;
}

uint64_t DacArray::space_bytes() const {
    uint64_t total = 1 + 8 + 1;
    for (size_t l = 0; l < levels_.size(); ++l) {
        total += 8 + ((levels_[l].count * width_ + 63) / 64) * 8;
        if (l + 1 < levels_.size()) total += levels_[l].more.space_bytes();
    }
    return total;
}

} // namespace gbw
