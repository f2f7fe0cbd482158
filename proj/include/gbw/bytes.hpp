#pragma once

#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <vector>

#include "gbw/error.hpp"

namespace gbw {

using Bytes = std::vector<uint8_t>;

// Little-endian byte sink for archive assembly.
class ByteWriter {
public:
    void u8(uint8_t v) { buf_.push_back(v); }
    void u32(uint32_t v) {
        for (int k = 0; k < 4; ++k) buf_.push_back(static_cast<uint8_t>(v >> (8 * k)));
    }
    void u64(uint64_t v) {
        for (int k = 0; k < 8; ++k) buf_.push_back(static_cast<uint8_t>(v >> (8 * k)));
    }
    void bytes(std::span<const uint8_t> b) { buf_.insert(buf_.end(), b.begin(), b.end()); }
    void str(const std::string& s) {
        buf_.insert(buf_.end(), s.begin(), s.end());
    }
    Bytes take() { return std::move(buf_); }
    size_t size() const { return buf_.size(); }

private:
    Bytes buf_;
};

// Bounds-checked little-endian reader; any out-of-range read means the
// archive is damaged.
class ByteReader {
public:
    explicit ByteReader(std::span<const uint8_t> data) : data_(data) {}

    uint8_t u8() {
        need(1);
        return data_[pos_++];
    }
    uint32_t u32() {
        need(4);
        uint32_t v = 0;
        for (int k = 0; k < 4; ++k) v |= uint32_t{data_[pos_ + k]} << (8 * k);
        pos_ += 4;
        return v;
    }
    uint64_t u64() {
        need(8);
        uint64_t v = 0;
        for (int k = 0; k < 8; ++k) v |= uint64_t{data_[pos_ + k]} << (8 * k);
        pos_ += 8;
        return v;
    }
    std::span<const uint8_t> bytes(size_t n) {
        need(n);
        auto s = data_.subspan(pos_, n);
        pos_ += n;
        return s;
    }
    size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return pos_ == data_.size(); }
    size_t pos() const { return pos_; }

private:
    void need(size_t n) const {
        if (data_.size() - pos_ < n) throw CorruptArchiveError("truncated data");
    }
    std::span<const uint8_t> data_;
    size_t pos_ = 0;
};

} // namespace gbw
