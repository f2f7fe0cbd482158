// Search-friendly two-level encoding. Dictionaries are stored in rank
// order, the biword dictionary and stream are end-tagged dense codes over
// those ranks, shift positions become a compressed bit vector over the
// stream's bytes, and offsets live in a directly addressable array. Every
// stream here supports random access or scanning without decompression.

#include "archive_internal.hpp"
#include "gbw/dac.hpp"
#include "gbw/error.hpp"
#include "gbw/etdc.hpp"

namespace gbw::detail {

Bytes compress_s2l(const BiwordSequence& seq, Header h) {
    CorpusModel m = build_model(seq);

    // Word ranks count references from the biword dictionary, one per
    // distinct biword; biword ranks count stream occurrences.
    std::vector<uint64_t> l_use(m.sigma_l.size(), 0), r_use(m.sigma_r.size(), 0);
    for (auto [lid, rid] : m.sigma_b) {
        ++l_use[lid];
        ++r_use[rid];
    }
    RankAssignment lr = assign_ranks(l_use);
    RankAssignment rr = assign_ranks(r_use);
    RankAssignment br = assign_ranks(m.b_counts);

    std::vector<std::string> l_by_rank(m.sigma_l.size());
    for (size_t id = 0; id < m.sigma_l.size(); ++id)
        l_by_rank[lr.rank_of[id]] = m.sigma_l[id];
    std::vector<std::string> r_by_rank(m.sigma_r.size());
    for (size_t id = 0; id < m.sigma_r.size(); ++id)
        r_by_rank[rr.rank_of[id]] = m.sigma_r_joined[id];

    Bytes sb_bytes;
    for (size_t rank = 0; rank < m.sigma_b.size(); ++rank) {
        auto [lid, rid] = m.sigma_b[br.id_of[rank]];
        etdc_append(lr.rank_of[lid], sb_bytes);
        etdc_append(rr.rank_of[rid], sb_bytes);
    }

    Bytes b_bytes;
    std::vector<uint8_t> p_bits;
    bool complex = false;
    uint64_t shift_count = 0;
    for (size_t k = 0; k < seq.biwords.size(); ++k) {
        etdc_append(br.rank_of[m.b_ids[k]], b_bytes);
        p_bits.resize(b_bytes.size(), 0);
        ShiftClass sc = classify_shift(seq.biwords[k]);
        if (sc != ShiftClass::kNoShift) {
            p_bits[b_bytes.size() - 1] = 1;
            ++shift_count;
        }
        if (sc == ShiftClass::kComplexShift) complex = true;
    }
    RrrBitVector pv(p_bits);

    std::vector<uint64_t> o_vals;
    std::vector<uint8_t> q_bits;
    for (const auto& bw : seq.biwords) {
        if (classify_shift(bw) == ShiftClass::kNoShift) continue;
        if (complex) {
            for (uint32_t v : bw.omega) o_vals.push_back(v);
            q_bits.push_back(1);
            q_bits.insert(q_bits.end(), bw.omega.size() - 1, 0);
        } else {
            o_vals.push_back(bw.omega[0]);
        }
    }
    DacArray od = DacArray::build(o_vals, h.dac_width);
    if (complex) h.flags |= 1;

    ByteWriter dict;
    dict.u64(m.sigma_b.size());
    dict.u64(br.rank_of[0]); // the sentence separator's stream rank
    dict.u64(sb_bytes.size());
    dict.bytes(sb_bytes);

    ByteWriter b;
    b.u64(seq.biwords.size());
    b.u64(b_bytes.size());
    b.bytes(b_bytes);

    ByteWriter p, o;
    pv.serialize(p);
    od.serialize(o);

    std::vector<Section> sections;
    sections.push_back({kSecSigmaL, serialize_entries(l_by_rank)});
    sections.push_back({kSecSigmaR, serialize_entries(r_by_rank)});
    sections.push_back({kSecDict, dict.take()});
    sections.push_back({kSecB, b.take()});
    sections.push_back({kSecP, p.take()});
    sections.push_back({kSecO, o.take()});
    if (complex) {
        ByteWriter q;
        PlainBitVector(q_bits).serialize(q);
        sections.push_back({kSecQ, q.take()});
    }
    return assemble_archive(h, sections);
}

BiwordSequence decode_s2l(const ParsedArchive& ar) {
    std::vector<std::string> l_by_rank = parse_entries(ar.need(kSecSigmaL));
    std::vector<std::string> joined = parse_entries(ar.need(kSecSigmaR));
    std::vector<std::vector<Token>> r_by_rank(joined.size());
    for (size_t k = 0; k < joined.size(); ++k) r_by_rank[k] = split_tokens(joined[k]);

    ByteReader d(ar.need(kSecDict));
    uint64_t count = d.u64();
    if (count > (uint64_t{1} << 32)) throw CorruptArchiveError("implausible dictionary size");
    uint64_t eos_rank = d.u64();
    uint64_t sb_len = d.u64();
    auto sb_bytes = d.bytes(sb_len);
    if (!d.done()) throw CorruptArchiveError("trailing bytes in biword dictionary");
    if (count > 0 && eos_rank >= count)
        throw CorruptArchiveError("separator rank out of range");
    if (count > sb_bytes.size() / 2) // two dense codes of at least a byte each
        throw CorruptArchiveError("implausible dictionary size");

    std::vector<std::pair<uint32_t, uint32_t>> sigma_b;
    sigma_b.reserve(count);
    size_t pos = 0;
    for (uint64_t k = 0; k < count; ++k) {
        uint64_t lrank = etdc_decode(sb_bytes, pos);
        uint64_t rrank = etdc_decode(sb_bytes, pos);
        if (lrank >= l_by_rank.size() || rrank >= r_by_rank.size())
            throw CorruptArchiveError("dictionary reference out of range");
        sigma_b.push_back({static_cast<uint32_t>(lrank), static_cast<uint32_t>(rrank)});
    }
    if (pos != sb_bytes.size())
        throw CorruptArchiveError("trailing bytes in biword dictionary codes");

    ByteReader b(ar.need(kSecB));
    uint64_t n = b.u64();
    uint64_t b_len = b.u64();
    auto b_bytes = b.bytes(b_len);
    if (!b.done()) throw CorruptArchiveError("trailing bytes in biword stream");
    if (n > b_bytes.size()) // a dense code spends at least one byte
        throw CorruptArchiveError("stream count exceeds the stream");

    ByteReader ps(ar.need(kSecP));
    RrrBitVector pv = RrrBitVector::deserialize(ps);
    if (!ps.done()) throw CorruptArchiveError("trailing bytes in shift markers");
    if (pv.size() != b_bytes.size())
        throw CorruptArchiveError("shift markers do not cover the stream");

    ByteReader os(ar.need(kSecO));
    DacArray od = DacArray::deserialize(os);
    if (!os.done()) throw CorruptArchiveError("trailing bytes in offsets");

    bool has_q = ar.header.flags & 1;
    PlainBitVector qv;
    if (has_q) {
        ByteReader qs(ar.need(kSecQ));
        qv = PlainBitVector::deserialize(qs);
        if (!qs.done()) throw CorruptArchiveError("trailing bytes in offset shapes");
        if (qv.size() != od.size())
            throw CorruptArchiveError("offset shapes do not cover the offsets");
    }

    std::vector<uint32_t> b_ids;
    b_ids.reserve(n);
    std::vector<uint8_t> is_shift;
    is_shift.reserve(n);
    pos = 0;
    for (uint64_t k = 0; k < n; ++k) {
        uint64_t rank = etdc_decode(b_bytes, pos);
        if (rank >= count) throw CorruptArchiveError("biword reference out of range");
        b_ids.push_back(static_cast<uint32_t>(rank));
        is_shift.push_back(pv.access(pos) ? 1 : 0); // pos is now 1 past the final byte
    }
    if (pos != b_bytes.size()) throw CorruptArchiveError("trailing bytes in stream codes");

    std::vector<std::vector<uint32_t>> omegas(n);
    uint64_t shift_seen = 0;
    for (uint64_t k = 0; k < n; ++k) {
        uint32_t rho_size = static_cast<uint32_t>(r_by_rank[sigma_b[b_ids[k]].second].size());
        omegas[k].assign(rho_size, 0);
        if (!is_shift[k]) continue;
        ++shift_seen;
        if (rho_size == 0)
            throw CorruptArchiveError("shift marked on a biword with no right words");
        if (!has_q) {
            if (shift_seen > od.size())
                throw CorruptArchiveError("more shifts than stored offsets");
            uint64_t v = od.get(shift_seen - 1);
            if (v > UINT32_MAX) throw CorruptArchiveError("offset out of range");
            omegas[k][0] = static_cast<uint32_t>(v);
        } else {
            if (shift_seen > qv.ones())
                throw CorruptArchiveError("more shifts than stored offset arrays");
            uint64_t start = qv.select(shift_seen);
            uint64_t end = shift_seen < qv.ones() ? qv.select(shift_seen + 1) - 1 : qv.size();
            if (end - start + 1 != rho_size)
                throw CorruptArchiveError("offset array does not match right words");
            for (uint32_t j = 0; j < rho_size; ++j) {
                uint64_t v = od.get(start - 1 + j);
                if (v > UINT32_MAX) throw CorruptArchiveError("offset out of range");
                omegas[k][j] = static_cast<uint32_t>(v);
            }
        }
    }
    if (!has_q && shift_seen != od.size())
        throw CorruptArchiveError("stored offsets do not match the shift markers");
    if (has_q && shift_seen != qv.ones())
        throw CorruptArchiveError("stored offset arrays do not match the shift markers");

    return assemble_sequence(b_ids, sigma_b, l_by_rank, r_by_rank, omegas,
                             ar.header.sentence_count);
}

} // namespace gbw::detail
