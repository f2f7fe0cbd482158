#include "gbw/archive.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include "archive_internal.hpp"
#include "gbw/bitio.hpp"
#include "gbw/error.hpp"
#include "gbw/ppm.hpp"

namespace gbw {

const char* method_name(Method m) {
    switch (m) {
    case Method::kWordHuffman: return "wh";
    case Method::kTre: return "tre";
    case Method::kTwoLevel: return "2lcab";
    case Method::kSearchable: return "s2lcab";
    }
    return "?";
}

const char* scheme_name(Scheme s) {
    switch (s) {
    case Scheme::kMonotonic11: return "1to1-mono";
    case Scheme::kNonMonotonic11: return "1to1-nonmono";
    case Scheme::kSimple1N: return "1ton-simple";
    case Scheme::kComplex1N: return "1ton-complex";
    }
    return "?";
}

std::optional<Method> method_from_name(const std::string& name) {
    for (Method m : {Method::kWordHuffman, Method::kTre, Method::kTwoLevel, Method::kSearchable})
        if (name == method_name(m)) return m;
    return std::nullopt;
}

std::optional<Scheme> scheme_from_name(const std::string& name) {
    for (Scheme s : {Scheme::kMonotonic11, Scheme::kNonMonotonic11, Scheme::kSimple1N,
                     Scheme::kComplex1N})
        if (name == scheme_name(s)) return s;
    return std::nullopt;
}

StructuralStreams encode_structural(std::span<const GeneralizedBiword> biwords) {
    StructuralStreams st;
    uint64_t last = 0;
    for (size_t b = 0; b < biwords.size(); ++b) {
        if (classify_shift(biwords[b]) == ShiftClass::kNoShift) continue;
        uint64_t pos = b + 1;
        st.p_deltas.push_back(pos - last);
        last = pos;
        st.o_values.insert(st.o_values.end(), biwords[b].omega.begin(), biwords[b].omega.end());
    }
    return st;
}

std::vector<std::vector<uint32_t>> decode_structural(const StructuralStreams& st,
                                                     const std::vector<uint32_t>& rho_sizes) {
    std::vector<std::vector<uint32_t>> omegas(rho_sizes.size());
    for (size_t b = 0; b < rho_sizes.size(); ++b) omegas[b].assign(rho_sizes[b], 0);
    uint64_t pos = 0;
    size_t o_at = 0;
    for (uint64_t delta : st.p_deltas) {
        if (delta == 0) throw CorruptArchiveError("zero gap in shift positions");
        pos += delta;
        if (pos > rho_sizes.size()) throw CorruptArchiveError("shift position past stream end");
        uint32_t need = rho_sizes[pos - 1];
        if (need == 0) throw CorruptArchiveError("shift marked on a biword with no right words");
        if (o_at + need > st.o_values.size())
            throw CorruptArchiveError("offset stream shorter than its shapes");
        for (uint32_t k = 0; k < need; ++k) omegas[pos - 1][k] = st.o_values[o_at + k];
        o_at += need;
    }
    if (o_at != st.o_values.size())
        throw CorruptArchiveError("offset stream longer than its shapes");
    return omegas;
}

Bytes compress_corpus(const BiwordSequence& seq, Method method, Scheme scheme,
                      uint64_t input_bytes, unsigned dac_width) {
    if (dac_width < 1 || dac_width > 16) throw DataError("chunk width must be in [1,16]");
    detail::Header h{method, scheme, static_cast<uint8_t>(dac_width), 0, seq.sentence_count,
                     input_bytes};
    switch (method) {
    case Method::kWordHuffman: return detail::compress_wh(seq, h);
    case Method::kTre: return detail::compress_tre(seq, h);
    case Method::kTwoLevel: return detail::compress_l2(seq, h);
    case Method::kSearchable: return detail::compress_s2l(seq, h);
    }
    throw DataError("unknown method");
}

RestoredCorpus decompress_corpus(std::span<const uint8_t> archive) {
    detail::ParsedArchive ar = detail::parse_archive(archive);
    switch (ar.header.method) {
    case Method::kWordHuffman: return detail::decompress_wh(ar);
    case Method::kTre: return restore_corpus(detail::decode_tre(ar));
    case Method::kTwoLevel: return restore_corpus(detail::decode_l2(ar));
    case Method::kSearchable: return restore_corpus(detail::decode_s2l(ar));
    }
    throw CorruptArchiveError("unknown method");
}

uint64_t ArchiveInfo::b_stream_bytes() const {
    for (const auto& s : sections)
        if (s.id == detail::kSecB) return s.bytes;
    return 0;
}

uint64_t ArchiveInfo::dictionary_bytes() const {
    uint64_t total = 0;
    for (const auto& s : sections)
        if (s.id == detail::kSecSigmaL || s.id == detail::kSecSigmaR || s.id == detail::kSecDict)
            total += s.bytes;
    return total;
}

ArchiveInfo inspect_archive(std::span<const uint8_t> archive) {
    detail::ParsedArchive ar = detail::parse_archive(archive);
    ArchiveInfo info;
    info.method = ar.header.method;
    info.scheme = ar.header.scheme;
    info.dac_width = ar.header.dac_width;
    info.has_q = ar.header.flags & 1;
    info.sentence_count = ar.header.sentence_count;
    info.input_bytes = ar.header.input_bytes;
    info.total_bytes = archive.size();
    for (const auto& [id, payload] : ar.sections)
        info.sections.push_back({id, payload.size()});
    return info;
}

double compression_ratio(uint64_t input_bytes, uint64_t output_bytes) {
    if (input_bytes == 0) throw DataError("empty input has no compression ratio");
    return static_cast<double>(output_bytes) / static_cast<double>(input_bytes);
}

CorpusStats corpus_stats(const BiwordSequence& seq) {
    CorpusStats st;
    st.sentences = seq.sentence_count;
    std::unordered_map<std::string, uint8_t> seen;
    for (const auto& bw : seq.biwords) {
        if (bw.is_eos()) continue;
        ++st.biwords;
        if (bw.sigma.empty() || bw.rho.empty()) ++st.unpaired;
        switch (classify_shift(bw)) {
        case ShiftClass::kNoShift: ++st.no_shift; break;
        case ShiftClass::kSimpleShift: ++st.simple_shift; break;
        case ShiftClass::kComplexShift: ++st.complex_shift; break;
        }
        std::string key = bw.sigma;
        for (const Token& w : bw.rho) {
            key += '\0';
            key += w;
        }
        key += '\1';
        for (uint32_t o : bw.omega) {
            key += std::to_string(o);
            key += ',';
        }
        seen.emplace(std::move(key), 1);
    }
    st.distinct_biwords = seen.size();
    return st;
}

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    in.seekg(0, std::ios::end);
    std::streampos len = in.tellg();
    in.seekg(0);
    Bytes data(static_cast<size_t>(len));
    if (len > 0) in.read(reinterpret_cast<char*>(data.data()), len);
    if (!in) throw IoError("cannot read " + path);
    return data;
}

void write_file(const std::string& path, std::span<const uint8_t> data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + path);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("cannot write " + path);
}

namespace detail {

Bytes assemble_archive(const Header& h, const std::vector<Section>& sections) {
    ByteWriter w;
    w.str(std::string(kMagic, 4));
    w.u8(kVersion);
    w.u8(static_cast<uint8_t>(h.method));
    w.u8(static_cast<uint8_t>(h.scheme));
    w.u8(h.dac_width);
    w.u8(h.flags);
    w.u8(0);
    w.u8(0);
    w.u8(0);
    w.u64(h.sentence_count);
    w.u64(h.input_bytes);
    w.u32(static_cast<uint32_t>(sections.size()));
    for (const Section& s : sections) {
        w.u8(s.id);
        w.u64(s.payload.size());
        w.bytes(s.payload);
    }
    return w.take();
}

ParsedArchive parse_archive(std::span<const uint8_t> archive) {
    ByteReader r(archive);
    auto magic = r.bytes(4);
    if (std::memcmp(magic.data(), kMagic, 4) != 0)
        throw CorruptArchiveError("not an archive (bad magic)");
    if (r.u8() != kVersion) throw CorruptArchiveError("unsupported archive version");
    ParsedArchive ar;
    uint8_t method = r.u8();
    if (method > 3) throw CorruptArchiveError("unknown method tag");
    uint8_t scheme = r.u8();
    if (scheme > 3) throw CorruptArchiveError("unknown scheme tag");
    ar.header.method = static_cast<Method>(method);
    ar.header.scheme = static_cast<Scheme>(scheme);
    ar.header.dac_width = r.u8();
    ar.header.flags = r.u8();
    if (ar.header.flags & ~uint8_t{1}) throw CorruptArchiveError("unknown flags");
    for (int k = 0; k < 3; ++k)
        if (r.u8() != 0) throw CorruptArchiveError("bad reserved bytes");
    ar.header.sentence_count = r.u64();
    ar.header.input_bytes = r.u64();
    uint32_t nsec = r.u32();
    for (uint32_t s = 0; s < nsec; ++s) {
        uint8_t id = r.u8();
        if (id < kSecSigmaL || id > kSecTables)
            throw CorruptArchiveError("unknown section id " + std::to_string(id));
        uint64_t len = r.u64();
        if (len > r.remaining()) throw CorruptArchiveError("section overruns archive");
        if (ar.sections.count(id)) throw CorruptArchiveError("duplicate section");
        ar.sections[id] = r.bytes(len);
    }
    if (!r.done()) throw CorruptArchiveError("trailing bytes after last section");
    return ar;
}

std::span<const uint8_t> ParsedArchive::need(uint8_t id) const {
    auto it = sections.find(id);
    if (it == sections.end())
        throw CorruptArchiveError("missing section " + std::to_string(id));
    return it->second;
}

CorpusModel build_model(const BiwordSequence& seq) {
    CorpusModel m;
    m.sigma_l = {kEosLeft, ""};
    m.sigma_r_joined = {kEosRight, ""};
    m.sigma_r = {{kEosRight}, {}};
    m.sigma_b = {{0, 0}};
    m.b_counts = {0};
    std::unordered_map<std::string, uint32_t> l_ids{{kEosLeft, 0}, {"", 1}};
    std::unordered_map<std::string, uint32_t> r_ids{{kEosRight, 0}, {"", 1}};
    std::unordered_map<uint64_t, uint32_t> b_ids;
    b_ids.emplace(0, 0);

    m.b_ids.reserve(seq.biwords.size());
    for (const auto& bw : seq.biwords) {
        uint32_t lid, rid;
        if (bw.is_eos()) {
            lid = rid = 0;
        } else {
            auto [lit, lnew] = l_ids.try_emplace(bw.sigma, static_cast<uint32_t>(m.sigma_l.size()));
            if (lnew) m.sigma_l.push_back(bw.sigma);
            lid = lit->second;
            std::string joined;
            for (size_t k = 0; k < bw.rho.size(); ++k) {
                if (k) joined += ' ';
                joined += bw.rho[k];
            }
            auto [rit, rnew] =
                r_ids.try_emplace(joined, static_cast<uint32_t>(m.sigma_r_joined.size()));
            if (rnew) {
                m.sigma_r_joined.push_back(joined);
                m.sigma_r.push_back(bw.rho);
            }
            rid = rit->second;
        }
        uint64_t key = (uint64_t{lid} << 32) | rid;
        auto [bit, bnew] = b_ids.try_emplace(key, static_cast<uint32_t>(m.sigma_b.size()));
        if (bnew) {
            m.sigma_b.push_back({lid, rid});
            m.b_counts.push_back(0);
        }
        m.b_ids.push_back(bit->second);
        ++m.b_counts[bit->second];
    }
    return m;
}

Bytes serialize_entries(const std::vector<std::string>& entries) {
    ByteWriter raw;
    raw.u64(entries.size());
    for (size_t k = 0; k < entries.size(); ++k) {
        if (k) raw.u8(0);
        raw.str(entries[k]);
    }
    Bytes payload = raw.take();
    return ppm_compress(payload);
}

std::vector<std::string> parse_entries(std::span<const uint8_t> payload) {
    Bytes raw = ppm_decompress(payload);
    ByteReader r(raw);
    uint64_t count = r.u64();
    if (count > raw.size()) // every entry ends in a separator byte
        throw CorruptArchiveError("implausible dictionary size");
    std::vector<std::string> entries;
    entries.reserve(count);
    auto rest = r.bytes(r.remaining());
    std::string cur;
    for (uint8_t b : rest) {
        if (b == 0) {
            entries.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += static_cast<char>(b);
        }
    }
    if (count > 0) entries.push_back(std::move(cur));
    if (entries.size() != count)
        throw CorruptArchiveError("dictionary entry count mismatch");
    return entries;
}

std::vector<Token> split_tokens(const std::string& joined) {
    std::vector<Token> out;
    size_t start = 0;
    while (start <= joined.size()) {
        size_t sp = joined.find(' ', start);
        if (sp == std::string::npos) {
            if (start < joined.size()) out.push_back(joined.substr(start));
            break;
        }
        out.push_back(joined.substr(start, sp - start));
        start = sp + 1;
    }
    return out;
}

std::vector<uint64_t> tally(std::span<const uint32_t> symbols) {
    uint32_t top = 0;
    for (uint32_t s : symbols) top = std::max(top, s);
    std::vector<uint64_t> freq(symbols.empty() ? 0 : top + 1, 0);
    for (uint32_t s : symbols) ++freq[s];
    return freq;
}

void write_symbol_stream(ByteWriter& out, const HuffmanCode* code,
                         std::span<const uint32_t> symbols) {
    out.u64(symbols.size());
    if (symbols.empty()) {
        out.u64(0);
        return;
    }
    BitWriter bw;
    for (uint32_t s : symbols) code->encode(s, bw);
    Bytes bits = bw.take();
    out.u64(bits.size());
    out.bytes(bits);
}

std::vector<uint32_t> read_symbol_stream(ByteReader& in, const HuffmanCode* code) {
    uint64_t n = in.u64();
    uint64_t nbytes = in.u64();
    auto bits = in.bytes(nbytes);
    if (n > 0 && code == nullptr) throw CorruptArchiveError("stream without a code table");
    if (n > nbytes * 8) // every codeword spends at least one bit
        throw CorruptArchiveError("symbol count exceeds the stream");
    std::vector<uint32_t> out;
    out.reserve(n);
    BitReader br(bits);
    for (uint64_t k = 0; k < n; ++k) out.push_back(code->decode(br));
    return out;
}

Bytes serialize_tables(const std::vector<const HuffmanCode*>& tables) {
    ByteWriter raw;
    for (const HuffmanCode* t : tables) {
        if (!t) {
            raw.u64(0);
            continue;
        }
        raw.u64(t->lengths().size());
        raw.bytes(t->lengths());
    }
    Bytes payload = raw.take();
    return ppm_compress(payload);
}

std::vector<std::optional<HuffmanCode>> parse_tables(std::span<const uint8_t> payload,
                                                     size_t expect) {
    Bytes raw = ppm_decompress(payload);
    ByteReader r(raw);
    std::vector<std::optional<HuffmanCode>> out;
    for (size_t t = 0; t < expect; ++t) {
        uint64_t v = r.u64();
        if (v > (uint64_t{1} << 32)) throw CorruptArchiveError("implausible alphabet size");
        if (v == 0) {
            out.emplace_back(std::nullopt);
            continue;
        }
        auto lens = r.bytes(v);
        out.emplace_back(HuffmanCode::from_lengths({lens.begin(), lens.end()}));
    }
    if (!r.done()) throw CorruptArchiveError("trailing bytes in code tables");
    return out;
}

uint32_t escape_symbol(uint64_t value) {
    if (value < kEscapeBase) return static_cast<uint32_t>(value);
    return kEscapeBase + static_cast<uint32_t>(std::bit_width(value)) - 9;
}

std::vector<uint64_t> escape_tally(std::span<const uint64_t> values) {
    uint32_t top = 0;
    for (uint64_t v : values) top = std::max(top, escape_symbol(v));
    std::vector<uint64_t> freq(values.empty() ? 0 : top + 1, 0);
    for (uint64_t v : values) ++freq[escape_symbol(v)];
    return freq;
}

void write_escaped_stream(ByteWriter& out, const HuffmanCode* code,
                          std::span<const uint64_t> values) {
    out.u64(values.size());
    if (values.empty()) {
        out.u64(0);
        return;
    }
    BitWriter bw;
    for (uint64_t v : values) {
        uint32_t sym = escape_symbol(v);
        code->encode(sym, bw);
        if (sym >= kEscapeBase) {
            unsigned width = sym - kEscapeBase + 9;
            bw.put(v & ~(uint64_t{1} << (width - 1)), width - 1);
        }
    }
    Bytes bits = bw.take();
    out.u64(bits.size());
    out.bytes(bits);
}

std::vector<uint64_t> read_escaped_stream(ByteReader& in, const HuffmanCode* code) {
    uint64_t n = in.u64();
    uint64_t nbytes = in.u64();
    auto bits = in.bytes(nbytes);
    if (n > 0 && code == nullptr) throw CorruptArchiveError("stream without a code table");
    if (n > nbytes * 8) // every codeword spends at least one bit
        throw CorruptArchiveError("symbol count exceeds the stream");
    std::vector<uint64_t> out;
    out.reserve(n);
    BitReader br(bits);
    for (uint64_t k = 0; k < n; ++k) {
        uint32_t sym = code->decode(br);
        if (sym < kEscapeBase) {
            out.push_back(sym);
        } else {
            unsigned width = sym - kEscapeBase + 9;
            if (width > 64) throw CorruptArchiveError("value width out of range");
            out.push_back((uint64_t{1} << (width - 1)) | br.bits(width - 1));
        }
    }
    return out;
}

BiwordSequence
assemble_sequence(const std::vector<uint32_t>& b_ids,
                  const std::vector<std::pair<uint32_t, uint32_t>>& sigma_b,
                  const std::vector<std::string>& sigma_l,
                  const std::vector<std::vector<Token>>& sigma_r,
                  const std::vector<std::vector<uint32_t>>& omegas, uint64_t sentence_count) {
    BiwordSequence seq;
    seq.sentence_count = sentence_count;
    seq.biwords.reserve(b_ids.size());
    uint64_t sentences = 0;
    for (size_t k = 0; k < b_ids.size(); ++k) {
        uint32_t id = b_ids[k];
        if (id >= sigma_b.size()) throw CorruptArchiveError("biword reference out of range");
        auto [lid, rid] = sigma_b[id];
        if (lid >= sigma_l.size() || rid >= sigma_r.size())
            throw CorruptArchiveError("dictionary reference out of range");
        GeneralizedBiword bw;
        bw.sigma = sigma_l[lid];
        bw.rho = sigma_r[rid];
        bw.omega = omegas[k];
        if (bw.omega.size() != bw.rho.size())
            throw CorruptArchiveError("offsets do not match right words");
        if (bw.is_eos()) ++sentences;
        seq.biwords.push_back(std::move(bw));
    }
    if (sentences != sentence_count)
        throw CorruptArchiveError("sentence separator count disagrees with header");
    return seq;
}

} // namespace detail

} // namespace gbw
