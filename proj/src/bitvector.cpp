#include "gbw/bitvector.hpp"

#include <bit>

#include "gbw/error.hpp"

namespace gbw {

namespace {

constexpr unsigned kBlock = 15;     // RRR block size in bits
constexpr unsigned kSuperblock = 32; // blocks per checkpoint

// Pascal's triangle up to C(15,15) and the offset widths per class.
struct RrrTables {
    uint32_t choose[kBlock + 1][kBlock + 1] = {};
    uint8_t width[kBlock + 1] = {};
    constexpr RrrTables() {
        for (unsigned n = 0; n <= kBlock; ++n) {
            choose[n][0] = 1;
            for (unsigned k = 1; k <= n; ++k)
                choose[n][k] = choose[n - 1][k - 1] + (k <= n - 1 ? choose[n - 1][k] : 0);
        }
        for (unsigned k = 0; k <= kBlock; ++k) {
            uint32_t c = choose[kBlock][k];
            unsigned w = 0;
            while ((uint32_t{1} << w) < c) ++w;
            width[k] = static_cast<uint8_t>(w);
        }
    }
};
constexpr RrrTables kRrr;

// Enumerative index of a 15-bit block with `cls` ones: positions are taken
// from bit 14 downward, adding C(i, remaining) when bit i is set.
uint32_t block_offset(uint32_t bits15, unsigned cls) {
    uint32_t off = 0;
    unsigned r = cls;
    for (int i = kBlock - 1; i >= 0 && r > 0; --i) {
        if ((bits15 >> i) & 1) {
            off += (static_cast<unsigned>(i) >= r) ? kRrr.choose[i][r] : 0;
            --r;
        }
    }
    return off;
}

uint32_t block_from_offset(unsigned cls, uint32_t off) {
    uint32_t bits = 0;
    unsigned r = cls;
    for (int i = kBlock - 1; i >= 0 && r > 0; --i) {
        uint32_t c = (static_cast<unsigned>(i) >= r) ? kRrr.choose[i][r] : 0;
        if (off >= c && c > 0) {
            // i >= r guaranteed: C(i,r)=0 only when i < r, and then every
            // remaining position must be set.
            bits |= uint32_t{1} << i;
            off -= c;
            --r;
        } else if (static_cast<unsigned>(i) < r) {
            bits |= uint32_t{1} << i;
            --r;
        }
    }
    return bits;
}

} // namespace

// --- PlainBitVector -------------------------------------------------------

PlainBitVector::PlainBitVector(const std::vector<uint8_t>& bits) {
    n_ = bits.size();
    words_.assign((n_ + 63) / 64, 0);
    for (uint64_t p = 0; p < n_; ++p)
        if (bits[p]) words_[p >> 6] |= uint64_t{1} << (p & 63);
    finish();
}

void PlainBitVector::finish() {
    samples_.clear();
    uint64_t acc = 0;
    for (uint64_t w = 0; w < words_.size(); ++w) {
        if (w % 8 == 0) samples_.push_back(acc);
        acc += std::popcount(words_[w]);
    }
    ones_ = acc;
}

bool PlainBitVector::access(uint64_t i) const {
    if (i == 0 || i > n_) throw DataError("bit index out of range");
    return (words_[(i - 1) >> 6] >> ((i - 1) & 63)) & 1;
}

uint64_t PlainBitVector::rank(uint64_t i) const {
    if (i > n_) throw DataError("rank index out of range");
    if (i == 0) return 0;
    uint64_t p = i - 1; // highest included bit, 0-based
    uint64_t word = p >> 6;
    uint64_t r = samples_[word >> 3];
    for (uint64_t w = (word >> 3) << 3; w < word; ++w) r += std::popcount(words_[w]);
    uint64_t mask = (p & 63) == 63 ? ~uint64_t{0} : ((uint64_t{1} << ((p & 63) + 1)) - 1);
    return r + std::popcount(words_[word] & mask);
}

uint64_t PlainBitVector::select(uint64_t k) const {
    if (k == 0 || k > ones_) throw DataError("select argument out of range");
    // Last sample with fewer than k ones before it.
    uint64_t lo = 0, hi = samples_.size() - 1;
    while (lo < hi) {
        uint64_t mid = (lo + hi + 1) / 2;
        if (samples_[mid] < k)
            lo = mid;
        else
            hi = mid - 1;
    }
    uint64_t acc = samples_[lo];
    for (uint64_t w = lo * 8; w < words_.size(); ++w) {
        unsigned pc = std::popcount(words_[w]);
        if (acc + pc >= k) {
            uint64_t word = words_[w];
            for (unsigned b = 0;; ++b) {
                if ((word >> b) & 1 && ++acc == k) return w * 64 + b + 1;
            }
        }
        acc += pc;
    }
    throw DataError("select inconsistency");
}

void PlainBitVector::serialize(ByteWriter& out) const {
    out.u64(n_);
    for (uint64_t w : words_) out.u64(w);
}

PlainBitVector PlainBitVector::deserialize(ByteReader& in) {
    PlainBitVector bv;
    bv.n_ = in.u64();
    if (bv.n_ > (uint64_t{1} << 40) || (bv.n_ + 63) / 64 > in.remaining() / 8)
        throw CorruptArchiveError("implausible bit vector size");
    bv.words_.resize((bv.n_ + 63) / 64);
    for (auto& w : bv.words_) w = in.u64();
    if (bv.n_ % 64) { // stray bits beyond n would corrupt rank/ones
        uint64_t mask = (uint64_t{1} << (bv.n_ % 64)) - 1;
        if (!bv.words_.empty() && (bv.words_.back() & ~mask))
            throw CorruptArchiveError("bit vector has bits past its end");
    }
    bv.finish();
    return bv;
}

uint64_t PlainBitVector::space_bytes() const { return 8 + words_.size() * 8; }

// --- RrrBitVector ---------------------------------------------------------

RrrBitVector::RrrBitVector(const std::vector<uint8_t>& bits) {
    n_ = bits.size();
    const uint64_t blocks = (n_ + kBlock - 1) / kBlock;
    classes_.assign((blocks + 1) / 2, 0);
    uint64_t bitpos = 0;
    std::vector<uint64_t> offbits;
    auto put_bits = [&](uint32_t v, unsigned w) {
        for (unsigned b = 0; b < w; ++b, ++bitpos) {
            if (bitpos / 64 >= offbits.size()) offbits.push_back(0);
            if ((v >> b) & 1) offbits[bitpos / 64] |= uint64_t{1} << (bitpos % 64);
        }
    };
    for (uint64_t b = 0; b < blocks; ++b) {
        uint32_t block = 0;
        unsigned cls = 0;
        for (unsigned k = 0; k < kBlock; ++k) {
            uint64_t p = b * kBlock + k;
            if (p < n_ && bits[p]) {
                block |= uint32_t{1} << k;
                ++cls;
            }
        }
        classes_[b / 2] |= static_cast<uint8_t>(cls << ((b % 2) * 4));
        put_bits(block_offset(block, cls), kRrr.width[cls]);
    }
    offset_bits_ = std::move(offbits);
    offset_bit_count_ = bitpos;
    finish();
}

uint8_t RrrBitVector::block_class(uint64_t b) const {
    return (classes_[b / 2] >> ((b % 2) * 4)) & 0x0F;
}

void RrrBitVector::finish() {
    checkpoints_.clear();
    const uint64_t blocks = (n_ + kBlock - 1) / kBlock;
    uint64_t rank = 0, offpos = 0;
    for (uint64_t b = 0; b < blocks; ++b) {
        if (b % kSuperblock == 0) checkpoints_.push_back({rank, offpos});
        uint8_t cls = block_class(b);
        rank += cls;
        offpos += kRrr.width[cls];
    }
    if (blocks == 0) checkpoints_.push_back({0, 0});
    ones_ = rank;
    if (offpos != offset_bit_count_) throw CorruptArchiveError("offset stream length mismatch");
}

uint64_t RrrBitVector::offset_pos_of_block(uint64_t b, uint64_t* rank_out) const {
    const Checkpoint& cp = checkpoints_[b / kSuperblock];
    uint64_t rank = cp.rank, offpos = cp.offset_pos;
    for (uint64_t k = (b / kSuperblock) * kSuperblock; k < b; ++k) {
        uint8_t cls = block_class(k);
        rank += cls;
        offpos += kRrr.width[cls];
    }
    if (rank_out) *rank_out = rank;
    return offpos;
}

uint32_t RrrBitVector::decode_block(uint64_t b, uint64_t offset_pos) const {
    uint8_t cls = block_class(b);
    unsigned w = kRrr.width[cls];
    uint32_t off = 0;
    for (unsigned k = 0; k < w; ++k) {
        uint64_t p = offset_pos + k;
        off |= static_cast<uint32_t>((offset_bits_[p / 64] >> (p % 64)) & 1) << k;
    }
    return block_from_offset(cls, off);
}

bool RrrBitVector::access(uint64_t i) const {
    if (i == 0 || i > n_) throw DataError("bit index out of range");
    uint64_t b = (i - 1) / kBlock;
    uint32_t block = decode_block(b, offset_pos_of_block(b, nullptr));
    return (block >> ((i - 1) % kBlock)) & 1;
}

uint64_t RrrBitVector::rank(uint64_t i) const {
    if (i > n_) throw DataError("rank index out of range");
    if (i == 0) return 0;
    uint64_t b = (i - 1) / kBlock;
    uint64_t rank;
    uint64_t offpos = offset_pos_of_block(b, &rank);
    uint32_t block = decode_block(b, offpos);
    uint32_t mask = (uint32_t{1} << ((i - 1) % kBlock + 1)) - 1;
    return rank + std::popcount(block & mask);
}

uint64_t RrrBitVector::select(uint64_t k) const {
    if (k == 0 || k > ones_) throw DataError("select argument out of range");
    uint64_t lo = 0, hi = checkpoints_.size() - 1;
    while (lo < hi) {
        uint64_t mid = (lo + hi + 1) / 2;
        if (checkpoints_[mid].rank < k)
            lo = mid;
        else
            hi = mid - 1;
    }
    uint64_t rank = checkpoints_[lo].rank, offpos = checkpoints_[lo].offset_pos;
    const uint64_t blocks = (n_ + kBlock - 1) / kBlock;
    for (uint64_t b = lo * kSuperblock; b < blocks; ++b) {
        uint8_t cls = block_class(b);
        if (rank + cls >= k) {
            uint32_t block = decode_block(b, offpos);
            for (unsigned p = 0;; ++p) {
                if ((block >> p) & 1 && ++rank == k) return b * kBlock + p + 1;
            }
        }
        rank += cls;
        offpos += kRrr.width[cls];
    }
    throw DataError("select inconsistency");
}

void RrrBitVector::serialize(ByteWriter& out) const {
    out.u64(n_);
    out.bytes(classes_);
    out.u64(offset_bit_count_);
    for (uint64_t w : offset_bits_) out.u64(w);
}

RrrBitVector RrrBitVector::deserialize(ByteReader& in) {
    RrrBitVector bv;
    bv.n_ = in.u64();
    if (bv.n_ > (uint64_t{1} << 40)) throw CorruptArchiveError("implausible bit vector size");
    const uint64_t blocks = (bv.n_ + kBlock - 1) / kBlock;
    auto cls = in.bytes((blocks + 1) / 2);
    bv.classes_.assign(cls.begin(), cls.end());
    bv.offset_bit_count_ = in.u64();
    if ((bv.offset_bit_count_ + 63) / 64 > in.remaining() / 8)
        throw CorruptArchiveError("implausible bit vector size");
    bv.offset_bits_.resize((bv.offset_bit_count_ + 63) / 64);
    for (auto& w : bv.offset_bits_) w = in.u64();
    bv.finish(); // validates the class/offset stream lengths agree
    return bv;
}

uint64_t RrrBitVector::space_bytes() const {
    return 8 + classes_.size() + 8 + offset_bits_.size() * 8;
}

} // namespace gbw
