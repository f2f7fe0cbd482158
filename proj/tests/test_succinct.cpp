#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gbw/bitvector.hpp"
#include "gbw/dac.hpp"
#include "gbw/error.hpp"
#include "support/oracles.hpp"

using namespace gbw;

namespace {

std::vector<uint8_t> random_bits(std::mt19937_64& rng, size_t n, uint32_t density_percent) {
    std::vector<uint8_t> bits(n);
    for (auto& b : bits) b = (rng() % 100 < density_percent) ? 1 : 0;
    return bits;
}

template <class BV>
void check_against_naive(const BV& bv, const std::vector<uint8_t>& bits,
                         std::mt19937_64& rng, size_t probes) {
    REQUIRE(bv.size() == bits.size());
    uint64_t total = 0;
    for (uint8_t b : bits) total += b;
    REQUIRE(bv.ones() == total);
    REQUIRE(bv.rank(0) == 0);
    if (!bits.empty()) {
        REQUIRE(bv.rank(bits.size()) == total);
        for (size_t p = 0; p < probes; ++p) {
            uint64_t i = 1 + rng() % bits.size();
            REQUIRE(bv.access(i) == (bits[i - 1] != 0));
            REQUIRE(bv.rank(i) == test::naive_rank(bits, i));
        }
    }
    if (total > 0) {
        REQUIRE(bv.select(1) == test::naive_select(bits, 1));
        REQUIRE(bv.select(total) == test::naive_select(bits, total));
        for (size_t p = 0; p < probes; ++p) {
            uint64_t k = 1 + rng() % total;
            REQUIRE(bv.select(k) == test::naive_select(bits, k));
        }
    }
}

template <class BV>
BV reload(const BV& bv) {
    ByteWriter w;
    bv.serialize(w);
    Bytes bytes = w.take();
    ByteReader r(bytes);
    BV back = BV::deserialize(r);
    REQUIRE(r.done());
    return back;
}

} // namespace

TEST_CASE("worked rank select example") {
    std::vector<uint8_t> bits = {1, 0, 1, 1, 0};
    PlainBitVector p(bits);
    RrrBitVector c(bits);
    CHECK(p.rank(3) == 2);
    CHECK(p.select(2) == 3);
    CHECK(p.access(4));
    CHECK(!p.access(5));
    CHECK(c.rank(3) == 2);
    CHECK(c.select(2) == 3);
    CHECK(c.access(4));
    CHECK(!c.access(5));
}

TEST_CASE("both bit vectors match the linear scan") {
    std::mt19937_64 rng(246801);
    const size_t kProbes = 1000;
    for (auto [n, density] : std::vector<std::pair<size_t, uint32_t>>{
             {1, 50}, {7, 100}, {64, 50}, {65, 1}, {512, 50}, {513, 99},
             {4096, 10}, {100000, 1}, {100000, 50}, {100000, 97}}) {
        CAPTURE(n);
        CAPTURE(density);
        auto bits = random_bits(rng, n, density);
        PlainBitVector p(bits);
        RrrBitVector c(bits);
        check_against_naive(p, bits, rng, kProbes);
        check_against_naive(c, bits, rng, kProbes);
        for (size_t probe = 0; probe < kProbes; ++probe) {
            uint64_t i = 1 + rng() % n;
            REQUIRE(p.rank(i) == c.rank(i));
            REQUIRE(p.access(i) == c.access(i));
        }
    }
}

TEST_CASE("all-zero and all-one vectors") {
    std::vector<uint8_t> zeros(300, 0), onesv(300, 1);
    PlainBitVector pz(zeros), po(onesv);
    RrrBitVector cz(zeros), co(onesv);
    CHECK(pz.ones() == 0);
    CHECK(cz.ones() == 0);
    CHECK(po.ones() == 300);
    CHECK(co.ones() == 300);
    CHECK(po.select(300) == 300);
    CHECK(co.select(123) == 123);
    CHECK(pz.rank(300) == 0);
    CHECK(cz.rank(300) == 0);
    CHECK_THROWS_AS(pz.select(1), DataError);
    CHECK_THROWS_AS(cz.select(1), DataError);
}

TEST_CASE("empty bit vectors behave") {
    std::vector<uint8_t> none;
    PlainBitVector p(none);
    RrrBitVector c(none);
    CHECK(p.size() == 0);
    CHECK(c.size() == 0);
    CHECK(p.rank(0) == 0);
    CHECK(c.rank(0) == 0);
    CHECK_THROWS_AS(p.access(1), DataError);
    CHECK_THROWS_AS(c.access(1), DataError);
    PlainBitVector p2 = reload(p);
    RrrBitVector c2 = reload(c);
    CHECK(p2.size() == 0);
    CHECK(c2.size() == 0);
}

TEST_CASE("query bounds are enforced") {
    std::vector<uint8_t> bits = {1, 0, 1};
    PlainBitVector p(bits);
    CHECK_THROWS_AS(p.access(0), DataError);
    CHECK_THROWS_AS(p.access(4), DataError);
    CHECK_THROWS_AS(p.rank(4), DataError);
    CHECK_THROWS_AS(p.select(0), DataError);
    CHECK_THROWS_AS(p.select(3), DataError);
    RrrBitVector c(bits);
    CHECK_THROWS_AS(c.access(0), DataError);
    CHECK_THROWS_AS(c.access(4), DataError);
    CHECK_THROWS_AS(c.rank(4), DataError);
    CHECK_THROWS_AS(c.select(0), DataError);
    CHECK_THROWS_AS(c.select(3), DataError);
}

TEST_CASE("serialization reloads to an identical structure") {
    std::mt19937_64 rng(11);
    for (size_t n : {1ul, 64ul, 1000ul, 33333ul}) {
        auto bits = random_bits(rng, n, 37);
        PlainBitVector p(bits);
        PlainBitVector p2 = reload(p);
        RrrBitVector c(bits);
        RrrBitVector c2 = reload(c);
        for (uint64_t i = 1; i <= n; i += 7) {
            REQUIRE(p2.access(i) == p.access(i));
            REQUIRE(p2.rank(i) == p.rank(i));
            REQUIRE(c2.access(i) == c.access(i));
            REQUIRE(c2.rank(i) == c.rank(i));
        }
        ByteWriter wa, wb;
        p.serialize(wa);
        p2.serialize(wb);
        REQUIRE(wa.take() == wb.take());
        c.serialize(wa);
        c2.serialize(wb);
        REQUIRE(wa.take() == wb.take());
    }
}

TEST_CASE("stray padding bits are rejected on load") {
    std::vector<uint8_t> bits(13, 0);
    bits[0] = bits[5] = 1;
    PlainBitVector p(bits);
    ByteWriter w;
    p.serialize(w);
    Bytes raw = w.take();
    REQUIRE(raw.size() == 16); // size word + one data word
    raw[15] = 0xFF;            // bits 56..63, far past n=13
    ByteReader r(raw);
    CHECK_THROWS_AS(PlainBitVector::deserialize(r), CorruptArchiveError);
}

TEST_CASE("implausible sizes are rejected on load") {
    ByteWriter w;
    w.u64(uint64_t{1} << 50);
    Bytes raw = w.take();
    ByteReader r1(raw);
    CHECK_THROWS_AS(PlainBitVector::deserialize(r1), CorruptArchiveError);
    ByteReader r2(raw);
    CHECK_THROWS_AS(RrrBitVector::deserialize(r2), CorruptArchiveError);
}

TEST_CASE("compressed vector is smaller on skewed data") {
    std::mt19937_64 rng(7);
    auto bits = random_bits(rng, 200000, 2);
    PlainBitVector p(bits);
    RrrBitVector c(bits);
    CHECK(c.space_bytes() < p.space_bytes() / 2);
}

TEST_CASE("direct access chunks split values as documented") {
    DacArray d = DacArray::build({0, 1, 130}, 7);
    CHECK(d.width() == 7);
    REQUIRE(d.size() == 3);
    CHECK(d.get(0) == 0);
    CHECK(d.get(1) == 1);
    CHECK(d.get(2) == 130); // needs two 7-bit chunks: 2 + (1 << 7)
    CHECK_THROWS_AS(d.get(3), DataError);
}

TEST_CASE("chunked arrays roundtrip") {
    std::mt19937_64 rng(1212);
    for (unsigned width : {1u, 3u, 4u, 8u, 16u}) {
        CAPTURE(width);
        std::vector<uint64_t> values;
        size_t n = 1 + rng() % 2000;
        for (size_t k = 0; k < n; ++k) {
            switch (rng() % 4) {
            case 0: values.push_back(0); break;
            case 1: values.push_back(rng() % 16); break;
            case 2: values.push_back(rng() % 100000); break;
            default: values.push_back(rng()); break;
            }
        }
        DacArray d = DacArray::build(values, width);
        REQUIRE(d.size() == values.size());
        for (size_t k = 0; k < values.size(); ++k) REQUIRE(d.get(k) == values[k]);
        ByteWriter w;
        d.serialize(w);
        Bytes raw = w.take();
        ByteReader r(raw);
        DacArray back = DacArray::deserialize(r);
        REQUIRE(r.done());
        REQUIRE(back.size() == values.size());
        for (size_t k = 0; k < values.size(); k += 3) REQUIRE(back.get(k) == values[k]);
        ByteWriter w2;
        back.serialize(w2);
        REQUIRE(w2.take() == raw);
    }
}

TEST_CASE("empty chunked array") {
    DacArray d = DacArray::build({}, 4);
    CHECK(d.size() == 0);
    CHECK_THROWS_AS(d.get(0), DataError);
    ByteWriter w;
    d.serialize(w);
    Bytes raw = w.take();
    ByteReader r(raw);
    DacArray back = DacArray::deserialize(r);
    CHECK(back.size() == 0);
}

TEST_CASE("chunk width limits") {
    CHECK_THROWS_AS(DacArray::build({1, 2}, 0), DataError);
    CHECK_THROWS_AS(DacArray::build({1, 2}, 17), DataError);
    DacArray ok = DacArray::build({uint64_t(-1)}, 1); // 64 one-bit chunks
    CHECK(ok.get(0) == uint64_t(-1));
}
