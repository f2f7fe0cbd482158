// Two-level encoding: the biword dictionary stores (left ref, right ref)
// pairs under two Huffman codes, and the stream is a single Huffman code
// over biword dictionary ids.

#include "archive_internal.hpp"
#include "gbw/bitio.hpp"
#include "gbw/error.hpp"

namespace gbw::detail {

Bytes compress_l2(const BiwordSequence& seq, const Header& h) {
    CorpusModel m = build_model(seq);

    std::vector<uint32_t> l_refs, r_refs;
    l_refs.reserve(m.sigma_b.size());
    r_refs.reserve(m.sigma_b.size());
    for (auto [lid, rid] : m.sigma_b) {
        l_refs.push_back(lid);
        r_refs.push_back(rid);
    }

    StructuralStreams st = encode_structural(seq.biwords);

    std::optional<HuffmanCode> lc, rc, bc, pc, oc;
    if (!l_refs.empty()) {
        lc = HuffmanCode::build(tally(l_refs));
        rc = HuffmanCode::build(tally(r_refs));
    }
    if (!m.b_ids.empty()) bc = HuffmanCode::build(tally(m.b_ids));
    if (!st.p_deltas.empty()) pc = HuffmanCode::build(escape_tally(st.p_deltas));
    std::vector<uint64_t> o64(st.o_values.begin(), st.o_values.end());
    if (!o64.empty()) oc = HuffmanCode::build(escape_tally(o64));
    auto ptr = [](std::optional<HuffmanCode>& c) { return c ? &*c : nullptr; };

    // Dictionary: entry count, then the interleaved (left, right) codewords.
    ByteWriter dict;
    dict.u64(m.sigma_b.size());
    BitWriter pairs;
    for (size_t k = 0; k < m.sigma_b.size(); ++k) {
        lc->encode(l_refs[k], pairs);
        rc->encode(r_refs[k], pairs);
    }
    Bytes pair_bits = pairs.take();
    dict.u64(pair_bits.size());
    dict.bytes(pair_bits);

    ByteWriter b;
    write_symbol_stream(b, ptr(bc), m.b_ids);
    ByteWriter p;
    write_escaped_stream(p, ptr(pc), st.p_deltas);
    ByteWriter o;
    write_escaped_stream(o, ptr(oc), o64);

    std::vector<Section> sections;
    sections.push_back({kSecSigmaL, serialize_entries(m.sigma_l)});
    sections.push_back({kSecSigmaR, serialize_entries(m.sigma_r_joined)});
    sections.push_back({kSecDict, dict.take()});
    sections.push_back({kSecB, b.take()});
    sections.push_back({kSecP, p.take()});
    sections.push_back({kSecO, o.take()});
    sections.push_back(
        {kSecTables, serialize_tables({ptr(lc), ptr(rc), ptr(bc), ptr(pc), ptr(oc)})});
    return assemble_archive(h, sections);
}

BiwordSequence decode_l2(const ParsedArchive& ar) {
    std::vector<std::string> sigma_l = parse_entries(ar.need(kSecSigmaL));
    std::vector<std::string> joined = parse_entries(ar.need(kSecSigmaR));
    std::vector<std::vector<Token>> sigma_r(joined.size());
    for (size_t k = 0; k < joined.size(); ++k) sigma_r[k] = split_tokens(joined[k]);

    auto tables = parse_tables(ar.need(kSecTables), 5);
    auto ptr = [&](size_t k) { return tables[k] ? &*tables[k] : nullptr; };

    ByteReader dr(ar.need(kSecDict));
    uint64_t entries = dr.u64();
    uint64_t pair_bytes = dr.u64();
    auto pair_bits = dr.bytes(pair_bytes);
    if (!dr.done()) throw CorruptArchiveError("trailing bytes in biword dictionary");
    if (entries > pair_bytes * 4) // two codewords of at least a bit each
        throw CorruptArchiveError("implausible dictionary size");
    if (entries > 0 && (!ptr(0) || !ptr(1)))
        throw CorruptArchiveError("dictionary without its code tables");
    std::vector<std::pair<uint32_t, uint32_t>> sigma_b;
    sigma_b.reserve(entries);
    BitReader pr(pair_bits);
    for (uint64_t k = 0; k < entries; ++k) {
        uint32_t lid = ptr(0)->decode(pr);
        uint32_t rid = ptr(1)->decode(pr);
        if (lid >= sigma_l.size() || rid >= sigma_r.size())
            throw CorruptArchiveError("dictionary reference out of range");
        sigma_b.push_back({lid, rid});
    }

    ByteReader b(ar.need(kSecB));
    std::vector<uint32_t> b_ids = read_symbol_stream(b, ptr(2));
    if (!b.done()) throw CorruptArchiveError("trailing bytes in biword stream");

    ByteReader p(ar.need(kSecP));
    StructuralStreams st;
    st.p_deltas = read_escaped_stream(p, ptr(3));
    if (!p.done()) throw CorruptArchiveError("trailing bytes in shift positions");
    ByteReader o(ar.need(kSecO));
    for (uint64_t v : read_escaped_stream(o, ptr(4))) {
        if (v > UINT32_MAX) throw CorruptArchiveError("offset out of range");
        st.o_values.push_back(static_cast<uint32_t>(v));
    }
    if (!o.done()) throw CorruptArchiveError("trailing bytes in offsets");

    std::vector<uint32_t> rho_sizes(b_ids.size());
    for (size_t k = 0; k < b_ids.size(); ++k) {
        if (b_ids[k] >= sigma_b.size())
            throw CorruptArchiveError("biword reference out of range");
        rho_sizes[k] = static_cast<uint32_t>(sigma_r[sigma_b[b_ids[k]].second].size());
    }
    auto omegas = decode_structural(st, rho_sizes);
    return assemble_sequence(b_ids, sigma_b, sigma_l, sigma_r, omegas,
                             ar.header.sentence_count);
}

} // namespace gbw::detail
