#include "gbw/ppm.hpp"

#include <algorithm>
#include <unordered_map>

#include "gbw/error.hpp"

namespace gbw {

namespace {

constexpr uint32_t kTop = 1u << 24;

class RangeEncoder {
public:
    explicit RangeEncoder(Bytes& out) : out_(out) {}

    void encode(uint32_t start, uint32_t size, uint32_t total) {
        range_ /= total;
        low_ += uint64_t{start} * range_;
        range_ *= size;
        while (range_ < kTop) {
            range_ <<= 8;
            shift_low();
        }
    }
    void flush() {
        for (int k = 0; k < 5; ++k) shift_low();
    }

private:
    void shift_low() {
        if (static_cast<uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
            uint8_t carry = static_cast<uint8_t>(low_ >> 32);
            do {
                out_.push_back(static_cast<uint8_t>(cache_ + carry));
                cache_ = 0xFF;
            } while (--cache_size_ != 0);
            cache_ = static_cast<uint8_t>(low_ >> 24);
        }
        ++cache_size_;
        low_ = static_cast<uint32_t>(low_) << 8;
    }

    Bytes& out_;
    uint64_t low_ = 0;
    uint32_t range_ = 0xFFFFFFFFu;
    uint8_t cache_ = 0;
    uint64_t cache_size_ = 1;
};

class RangeDecoder {
public:
    explicit RangeDecoder(std::span<const uint8_t> data) : data_(data) {
        for (int k = 0; k < 5; ++k) code_ = (code_ << 8) | next();
    }

    uint32_t freq(uint32_t total) {
        range_ /= total;
        uint32_t t = static_cast<uint32_t>(code_ / range_);
        return t < total ? t : total - 1;
    }
    void decode(uint32_t start, uint32_t size) {
        code_ -= uint64_t{start} * range_;
        range_ *= size;
        while (range_ < kTop) {
            code_ = (code_ << 8) | next();
            range_ <<= 8;
        }
    }

private:
    uint8_t next() {
        if (pos_ >= data_.size()) throw CorruptArchiveError("compressed stream truncated");
        return data_[pos_++];
    }
    std::span<const uint8_t> data_;
    size_t pos_ = 0;
    uint64_t code_ = 0;
    uint32_t range_ = 0xFFFFFFFFu;
};

// One context's symbol statistics. Method D assigns weight 2c-1 to a symbol
// counted c times and d (the number of distinct symbols) to escape, for a
// total of 2*total.
struct Context {
    std::vector<std::pair<uint8_t, uint16_t>> syms; // sorted by symbol
    uint32_t total = 0;

    void bump(uint8_t s) {
        auto it = std::lower_bound(syms.begin(), syms.end(), s,
                                   [](const auto& p, uint8_t v) { return p.first < v; });
        if (it != syms.end() && it->first == s)
            it->second += 1;
        else
            syms.insert(it, {s, 1});
        ++total;
        if (total >= 4096) rescale();
    }

    void rescale() {
        total = 0;
        size_t w = 0;
        for (auto& [sym, cnt] : syms) {
            cnt >>= 1;
            if (cnt) {
                syms[w++] = {sym, cnt};
                total += cnt;
            }
        }
        syms.resize(w);
    }
};

class Model {
public:
    // Encodes or decodes one byte; the two directions share the model walk
    // so the state machines stay in lockstep.
    void encode(RangeEncoder& rc, std::span<const uint8_t> hist, uint8_t s) {
        for (int order = max_usable(hist); order >= 0; --order) {
            Context* ctx = find(order, hist, false);
            if (!ctx || ctx->total == 0) continue;
            uint32_t d = static_cast<uint32_t>(ctx->syms.size());
            uint32_t denom = 2 * ctx->total;
            uint32_t cum = 0;
            bool found = false;
            for (const auto& [sym, cnt] : ctx->syms) {
                uint32_t f = 2u * cnt - 1;
                if (sym == s) {
                    rc.encode(cum, f, denom);
                    found = true;
                    break;
                }
                cum += f;
            }
            if (found) {
                update(hist, s);
                return;
            }
            rc.encode(denom - d, d, denom); // escape
        }
        rc.encode(s, 1, 256); // order -1: uniform
        update(hist, s);
    }

    uint8_t decode(RangeDecoder& rc, std::span<const uint8_t> hist) {
        for (int order = max_usable(hist); order >= 0; --order) {
            Context* ctx = find(order, hist, false);
            if (!ctx || ctx->total == 0) continue;
            uint32_t d = static_cast<uint32_t>(ctx->syms.size());
            uint32_t denom = 2 * ctx->total;
            uint32_t t = rc.freq(denom);
            if (t >= denom - d) {
                rc.decode(denom - d, d);
                continue; // escape
            }
            uint32_t cum = 0;
            for (const auto& [sym, cnt] : ctx->syms) {
                uint32_t f = 2u * cnt - 1;
                if (t < cum + f) {
                    // copy before update(): the bump can rescale the context,
                    // which compacts syms and moves entries under the binding
                    uint8_t chosen = sym;
                    rc.decode(cum, f);
                    update(hist, chosen);
                    return chosen;
                }
                cum += f;
            }
            throw CorruptArchiveError("range decoder out of sync");
        }
        uint8_t s = static_cast<uint8_t>(rc.freq(256));
        rc.decode(s, 1);
        update(hist, s);
        return s;
    }

private:
    static int max_usable(std::span<const uint8_t> hist) {
        return static_cast<int>(hist.size() > 3 ? 3 : hist.size());
    }

    static uint32_t key(int order, std::span<const uint8_t> hist) {
        uint32_t k = 0;
        for (int b = 0; b < order; ++b) k = (k << 8) | hist[hist.size() - 1 - b];
        return k;
    }

    Context* find(int order, std::span<const uint8_t> hist, bool create) {
        auto& m = maps_[order];
        uint32_t k = key(order, hist);
        auto it = m.find(k);
        if (it == m.end()) {
            if (!create) return nullptr;
            it = m.emplace(k, Context{}).first;
        }
        return &it->second;
    }

    void update(std::span<const uint8_t> hist, uint8_t s) {
        for (int order = 0; order <= max_usable(hist); ++order)
            find(order, hist, true)->bump(s);
    }

    std::unordered_map<uint32_t, Context> maps_[4];
};

} // namespace

Bytes ppm_compress(std::span<const uint8_t> data) {
    ByteWriter head;
    head.u64(data.size());
    Bytes out = head.take();
    if (data.empty()) return out;
    RangeEncoder rc(out);
    Model model;
    for (size_t i = 0; i < data.size(); ++i) {
        model.encode(rc, data.subspan(0, i), data[i]);
    }
    rc.flush();
    return out;
}

Bytes ppm_decompress(std::span<const uint8_t> data) {
    ByteReader r(data);
    uint64_t n = r.u64();
    // even a fully adapted context needs a hair under 2e-4 bits per symbol,
    // so anything past ~64k symbols per input byte cannot be real
    if (n > 4096 + 65536 * uint64_t(data.size()))
        throw CorruptArchiveError("implausible uncompressed size");
    Bytes out;
    if (n == 0) {
        if (!r.done()) throw CorruptArchiveError("trailing bytes after empty stream");
        return out;
    }
    out.reserve(size_t(std::min(n, uint64_t{1} << 20)));
    RangeDecoder rc(data.subspan(r.pos()));
    Model model;
    for (uint64_t i = 0; i < n; ++i) {
        out.push_back(model.decode(rc, {out.data(), out.size()}));
    }
    return out;
}

} // namespace gbw
