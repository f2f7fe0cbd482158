// Ranked-translation encoding: left and right-sequence dictionaries, a
// per-left-word list of its right sides ranked by frequency, and a biword
// stream coded as (left ref, rank) pairs. Shift positions and offsets ride
// in their own streams.

#include <algorithm>
#include <unordered_map>

#include "archive_internal.hpp"
#include "gbw/bitio.hpp"
#include "gbw/error.hpp"
#include "gbw/ppm.hpp"

namespace gbw::detail {

namespace {

// Ranked right-side ids per left id: frequency descending, id ascending.
std::vector<std::vector<uint32_t>> rank_translations(const CorpusModel& m) {
    std::vector<std::vector<std::pair<uint64_t, uint32_t>>> scored(m.sigma_l.size());
    for (size_t id = 0; id < m.sigma_b.size(); ++id) {
        auto [lid, rid] = m.sigma_b[id];
        scored[lid].push_back({m.b_counts[id], rid});
    }
    std::vector<std::vector<uint32_t>> lists(scored.size());
    for (size_t lid = 0; lid < scored.size(); ++lid) {
        std::sort(scored[lid].begin(), scored[lid].end(),
                  [](const auto& a, const auto& b) {
                      if (a.first != b.first) return a.first > b.first;
                      return a.second < b.second;
                  });
        lists[lid].reserve(scored[lid].size());
        for (auto& [cnt, rid] : scored[lid]) lists[lid].push_back(rid);
    }
    return lists;
}

} // namespace

Bytes compress_tre(const BiwordSequence& seq, const Header& h) {
    CorpusModel m = build_model(seq);
    auto lists = rank_translations(m);

    std::unordered_map<uint64_t, uint32_t> rank_of;
    for (size_t lid = 0; lid < lists.size(); ++lid)
        for (size_t r = 0; r < lists[lid].size(); ++r)
            rank_of[(uint64_t{static_cast<uint32_t>(lid)} << 32) | lists[lid][r]] =
                static_cast<uint32_t>(r);

    std::vector<uint32_t> l_refs, ranks;
    l_refs.reserve(m.b_ids.size());
    ranks.reserve(m.b_ids.size());
    for (uint32_t id : m.b_ids) {
        auto [lid, rid] = m.sigma_b[id];
        l_refs.push_back(lid);
        ranks.push_back(rank_of.at((uint64_t{lid} << 32) | rid));
    }

    StructuralStreams st = encode_structural(seq.biwords);

    std::optional<HuffmanCode> lc, rc, pc, oc;
    if (!l_refs.empty()) {
        lc = HuffmanCode::build(tally(l_refs));
        rc = HuffmanCode::build(tally(ranks));
    }
    if (!st.p_deltas.empty()) pc = HuffmanCode::build(escape_tally(st.p_deltas));
    std::vector<uint64_t> o64(st.o_values.begin(), st.o_values.end());
    if (!o64.empty()) oc = HuffmanCode::build(escape_tally(o64));
    auto ptr = [](std::optional<HuffmanCode>& c) { return c ? &*c : nullptr; };

    ByteWriter dict;
    for (const auto& list : lists) {
        dict.u32(static_cast<uint32_t>(list.size()));
        for (uint32_t rid : list) dict.u32(rid);
    }

    ByteWriter b;
    write_symbol_stream(b, ptr(lc), l_refs);
    write_symbol_stream(b, ptr(rc), ranks);
    ByteWriter p;
    write_escaped_stream(p, ptr(pc), st.p_deltas);
    ByteWriter o;
    write_escaped_stream(o, ptr(oc), o64);

    std::vector<Section> sections;
    sections.push_back({kSecSigmaL, serialize_entries(m.sigma_l)});
    sections.push_back({kSecSigmaR, serialize_entries(m.sigma_r_joined)});
    sections.push_back({kSecDict, ppm_compress(dict.take())});
    sections.push_back({kSecB, b.take()});
    sections.push_back({kSecP, p.take()});
    sections.push_back({kSecO, o.take()});
    sections.push_back({kSecTables, serialize_tables({ptr(lc), ptr(rc), ptr(pc), ptr(oc)})});
    return assemble_archive(h, sections);
}

BiwordSequence decode_tre(const ParsedArchive& ar) {
    std::vector<std::string> sigma_l = parse_entries(ar.need(kSecSigmaL));
    std::vector<std::string> joined = parse_entries(ar.need(kSecSigmaR));
    std::vector<std::vector<Token>> sigma_r(joined.size());
    for (size_t k = 0; k < joined.size(); ++k) sigma_r[k] = split_tokens(joined[k]);

    Bytes dict_raw = ppm_decompress(ar.need(kSecDict));
    ByteReader dr(dict_raw);
    std::vector<std::vector<uint32_t>> lists(sigma_l.size());
    for (auto& list : lists) {
        uint32_t n = dr.u32();
        if (n > dr.remaining() / 4) // four bytes per reference
            throw CorruptArchiveError("translation list exceeds its payload");
        list.reserve(n);
        for (uint32_t k = 0; k < n; ++k) {
            uint32_t rid = dr.u32();
            if (rid >= sigma_r.size())
                throw CorruptArchiveError("translation list points past the dictionary");
            list.push_back(rid);
        }
    }
    if (!dr.done()) throw CorruptArchiveError("trailing bytes in translation lists");

    auto tables = parse_tables(ar.need(kSecTables), 4);
    auto ptr = [&](size_t k) { return tables[k] ? &*tables[k] : nullptr; };

    ByteReader b(ar.need(kSecB));
    std::vector<uint32_t> l_refs = read_symbol_stream(b, ptr(0));
    std::vector<uint32_t> ranks = read_symbol_stream(b, ptr(1));
    if (!b.done()) throw CorruptArchiveError("trailing bytes in biword stream");
    if (l_refs.size() != ranks.size())
        throw CorruptArchiveError("left refs and ranks disagree in length");

    ByteReader p(ar.need(kSecP));
    StructuralStreams st;
    st.p_deltas = read_escaped_stream(p, ptr(2));
    if (!p.done()) throw CorruptArchiveError("trailing bytes in shift positions");
    ByteReader o(ar.need(kSecO));
    for (uint64_t v : read_escaped_stream(o, ptr(3))) {
        if (v > UINT32_MAX) throw CorruptArchiveError("offset out of range");
        st.o_values.push_back(static_cast<uint32_t>(v));
    }
    if (!o.done()) throw CorruptArchiveError("trailing bytes in offsets");

    std::vector<uint32_t> rids(l_refs.size());
    std::vector<uint32_t> rho_sizes(l_refs.size());
    for (size_t k = 0; k < l_refs.size(); ++k) {
        uint32_t lid = l_refs[k];
        if (lid >= lists.size()) throw CorruptArchiveError("left reference out of range");
        if (ranks[k] >= lists[lid].size())
            throw CorruptArchiveError("translation rank out of range");
        rids[k] = lists[lid][ranks[k]];
        rho_sizes[k] = static_cast<uint32_t>(sigma_r[rids[k]].size());
    }
    auto omegas = decode_structural(st, rho_sizes);

    BiwordSequence seq;
    seq.sentence_count = ar.header.sentence_count;
    seq.biwords.reserve(l_refs.size());
    uint64_t sentences = 0;
    for (size_t k = 0; k < l_refs.size(); ++k) {
        GeneralizedBiword bw;
        bw.sigma = sigma_l[l_refs[k]];
        bw.rho = sigma_r[rids[k]];
        bw.omega = std::move(omegas[k]);
        if (bw.omega.size() != bw.rho.size())
            throw CorruptArchiveError("offsets do not match right words");
        if (bw.is_eos()) ++sentences;
        seq.biwords.push_back(std::move(bw));
    }
    if (sentences != seq.sentence_count)
        throw CorruptArchiveError("sentence separator count disagrees with header");
    return seq;
}

} // namespace gbw::detail
