// Query evaluation on the search-friendly archives: word lookups run over
// the encoded biword table, stream hits come from a multi-pattern skip
// search over the encoded stream, and only the sentences that actually
// contain hits are ever decoded.

#include "gbw/spotting.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <unordered_map>

#include "archive_internal.hpp"
#include "gbw/error.hpp"
#include "gbw/etdc.hpp"

namespace gbw {

namespace {

std::vector<size_t> kmp_failure(const Bytes& p) {
    std::vector<size_t> f(p.size(), 0);
    for (size_t i = 1; i < p.size(); ++i) {
        size_t j = f[i - 1];
        while (j > 0 && p[i] != p[j]) j = f[j - 1];
        if (p[i] == p[j]) ++j;
        f[i] = j;
    }
    return f;
}

// Multi-pattern search with the horspool skip rule: the window advances by
// the last byte's distance to its final occurrence inside the pattern
// prefixes of the shortest-pattern length. Candidate sets hang off the
// packed window prefix; full matches are verified forward and must start on
// a codeword boundary. Patterns are whole codewords, so at most one can
// match at any position.
class StreamScanner {
public:
    StreamScanner(std::vector<Bytes> pats, std::vector<uint32_t> owners)
        : pats_(std::move(pats)), owners_(std::move(owners)) {
        lmin_ = pats_[0].size();
        for (const Bytes& p : pats_) lmin_ = std::min(lmin_, p.size());
        shift_.fill(static_cast<uint8_t>(lmin_));
        for (const Bytes& p : pats_)
            for (size_t j = 0; j + 1 < lmin_; ++j)
                shift_[p[j]] = std::min<uint8_t>(shift_[p[j]],
                                                 static_cast<uint8_t>(lmin_ - 1 - j));
        for (uint32_t id = 0; id < pats_.size(); ++id) {
            if (lmin_ == 1)
                direct_[pats_[id][0]].push_back(id);
            else
                groups_[pack(pats_[id].data())].push_back(id);
        }
    }

    template <typename Fn> // fn(owner, start_byte)
    void scan(std::span<const uint8_t> bytes, Fn&& fn) const {
        size_t i = 0;
        const size_t n = bytes.size();
        while (i + lmin_ <= n) {
            if (i == 0 || (bytes[i - 1] & 0x80)) {
                const std::vector<uint32_t>* cand =
                    lmin_ == 1 ? &direct_[bytes[i]] : find_group(bytes.data() + i);
                if (cand) {
                    for (uint32_t id : *cand) {
                        const Bytes& p = pats_[id];
                        if (i + p.size() <= n &&
                            std::memcmp(p.data(), bytes.data() + i, p.size()) == 0) {
                            fn(owners_[id], i);
                            break;
                        }
                    }
                }
            }
            i += shift_[bytes[i + lmin_ - 1]];
        }
    }

private:
    uint64_t pack(const uint8_t* p) const {
        uint64_t key = 0;
        for (size_t j = 0; j < lmin_; ++j) key |= uint64_t{p[j]} << (8 * j);
        return key;
    }
    const std::vector<uint32_t>* find_group(const uint8_t* p) const {
        auto it = groups_.find(pack(p));
        return it == groups_.end() ? nullptr : &it->second;
    }

    std::vector<Bytes> pats_;
    std::vector<uint32_t> owners_;
    size_t lmin_ = 1;
    std::array<uint8_t, 256> shift_;
    std::array<std::vector<uint32_t>, 256> direct_;
    std::unordered_map<uint64_t, std::vector<uint32_t>> groups_;
};

} // namespace

LoadedArchive::LoadedArchive(Bytes archive) : raw_(std::move(archive)) {
    detail::ParsedArchive ar = detail::parse_archive(raw_);
    if (ar.header.method != Method::kSearchable)
        throw DataError("spotting needs a search-friendly archive (method s2lcab)");
    sentences_ = ar.header.sentence_count;

    l_by_rank_ = detail::parse_entries(ar.need(detail::kSecSigmaL));
    std::vector<std::string> joined = detail::parse_entries(ar.need(detail::kSecSigmaR));
    r_by_rank_.resize(joined.size());
    for (size_t k = 0; k < joined.size(); ++k) r_by_rank_[k] = detail::split_tokens(joined[k]);

    ByteReader d(ar.need(detail::kSecDict));
    uint64_t count = d.u64();
    eos_rank_ = d.u64();
    uint64_t sb_len = d.u64();
    size_t sb_at = d.pos();
    d.bytes(sb_len);
    if (!d.done()) throw CorruptArchiveError("trailing bytes in biword dictionary");
    if (count > sb_len / 2) // two dense codes of at least a byte each
        throw CorruptArchiveError("implausible dictionary size");
    if (count > 0 && eos_rank_ >= count)
        throw CorruptArchiveError("separator rank out of range");
    sb_bytes_ = ar.need(detail::kSecDict).subspan(sb_at, sb_len);

    sigma_b_.reserve(count);
    size_t pos = 0;
    for (uint64_t k = 0; k < count; ++k) {
        uint64_t lrank = etdc_decode(sb_bytes_, pos);
        uint64_t rrank = etdc_decode(sb_bytes_, pos);
        if (lrank >= l_by_rank_.size() || rrank >= r_by_rank_.size())
            throw CorruptArchiveError("dictionary reference out of range");
        sigma_b_.push_back({static_cast<uint32_t>(lrank), static_cast<uint32_t>(rrank)});
    }
    if (pos != sb_bytes_.size())
        throw CorruptArchiveError("trailing bytes in biword dictionary codes");

    std::vector<uint8_t> s_bits(sb_bytes_.size());
    for (size_t k = 0; k < sb_bytes_.size(); ++k) s_bits[k] = (sb_bytes_[k] & 0x80) ? 1 : 0;
    s_ = PlainBitVector(s_bits);
    if (s_.ones() != 2 * sigma_b_.size())
        throw CorruptArchiveError("biword dictionary code count is off");

    ByteReader b(ar.need(detail::kSecB));
    uint64_t n = b.u64();
    uint64_t b_len = b.u64();
    size_t b_at = b.pos();
    b.bytes(b_len);
    if (!b.done()) throw CorruptArchiveError("trailing bytes in biword stream");
    b_bytes_ = ar.need(detail::kSecB).subspan(b_at, b_len);

    ByteReader ps(ar.need(detail::kSecP));
    p_ = RrrBitVector::deserialize(ps);
    if (!ps.done()) throw CorruptArchiveError("trailing bytes in shift markers");
    if (p_.size() != b_bytes_.size())
        throw CorruptArchiveError("shift markers do not cover the stream");

    ByteReader os(ar.need(detail::kSecO));
    o_ = DacArray::deserialize(os);
    if (!os.done()) throw CorruptArchiveError("trailing bytes in offsets");

    has_q_ = ar.header.flags & 1;
    if (has_q_) {
        ByteReader qs(ar.need(detail::kSecQ));
        q_ = PlainBitVector::deserialize(qs);
        if (!qs.done()) throw CorruptArchiveError("trailing bytes in offset shapes");
        if (q_.size() != o_.size())
            throw CorruptArchiveError("offset shapes do not cover the offsets");
    }

    pos = 0;
    for (uint64_t k = 0; k < n; ++k) {
        uint64_t rank = etdc_decode(b_bytes_, pos);
        if (rank >= count) throw CorruptArchiveError("biword reference out of range");
        if (rank == eos_rank_) eos_ends_.push_back(pos - 1);
    }
    if (pos != b_bytes_.size()) throw CorruptArchiveError("trailing bytes in stream codes");
    if (eos_ends_.size() != sentences_)
        throw CorruptArchiveError("sentence separator count disagrees with header");
}

std::optional<uint64_t> LoadedArchive::left_rank(const std::string& word) const {
    for (size_t r = 0; r < l_by_rank_.size(); ++r)
        if (l_by_rank_[r] == word) return r;
    return std::nullopt;
}

std::vector<uint32_t> LoadedArchive::biword_ranks_for_left(uint64_t lrank) const {
    Bytes pat = etdc_code(lrank);
    std::vector<size_t> fail = kmp_failure(pat);
    std::vector<uint32_t> out;
    size_t j = 0;
    for (size_t i = 0; i < sb_bytes_.size(); ++i) {
        while (j > 0 && sb_bytes_[i] != pat[j]) j = fail[j - 1];
        if (sb_bytes_[i] == pat[j]) ++j;
        if (j == pat.size()) {
            size_t start = i + 1 - pat.size();
            if (start == 0 || (sb_bytes_[start - 1] & 0x80)) {
                uint64_t r = s_.rank(i + 1); // ordinal of this codeword's end
                if (r % 2 == 1) {            // odd = a left component, even = a
                                             // right-side byte coincidence
                    uint32_t rank = static_cast<uint32_t>((r - 1) / 2);
                    if (rank != eos_rank_) out.push_back(rank);
                }
            }
            j = fail[j - 1];
        }
    }
    return out;
}

std::vector<uint32_t> LoadedArchive::omega_of(uint64_t shift_ordinal, uint32_t rho_size) const {
    if (rho_size == 0)
        throw CorruptArchiveError("shift marked on a biword with no right words");
    std::vector<uint32_t> omega(rho_size, 0);
    if (!has_q_) {
        if (shift_ordinal > o_.size())
            throw CorruptArchiveError("more shifts than stored offsets");
        uint64_t v = o_.get(shift_ordinal - 1);
        if (v > UINT32_MAX) throw CorruptArchiveError("offset out of range");
        omega[0] = static_cast<uint32_t>(v);
        return omega;
    }
    if (shift_ordinal > q_.ones())
        throw CorruptArchiveError("more shifts than stored offset arrays");
    uint64_t start = q_.select(shift_ordinal);
    uint64_t end = shift_ordinal < q_.ones() ? q_.select(shift_ordinal + 1) - 1 : q_.size();
    if (end - start + 1 != rho_size)
        throw CorruptArchiveError("offset array does not match right words");
    for (uint32_t j = 0; j < rho_size; ++j) {
        uint64_t v = o_.get(start - 1 + j);
        if (v > UINT32_MAX) throw CorruptArchiveError("offset out of range");
        omega[j] = static_cast<uint32_t>(v);
    }
    return omega;
}

LoadedArchive::DecodedSentence LoadedArchive::decode_sentence(uint64_t s) const {
    if (s >= sentences_) throw DataError("sentence index out of range");
    uint64_t begin = s == 0 ? 0 : eos_ends_[s - 1] + 1;
    uint64_t eos_end = eos_ends_[s];
    uint64_t eos_start = eos_end + 1 - etdc_code_length(eos_rank_);
    DecodedSentence ds;
    size_t pos = begin;
    while (pos < eos_start) {
        uint64_t start = pos;
        uint64_t rank = etdc_decode(b_bytes_, pos);
        auto [lrank, rrank] = sigma_b_[rank];
        GeneralizedBiword bw;
        bw.sigma = l_by_rank_[lrank];
        bw.rho = r_by_rank_[rrank];
        if (p_.access(pos)) // pos is the 1-based position of the final byte
            bw.omega = omega_of(p_.rank(pos), static_cast<uint32_t>(bw.rho.size()));
        else
            bw.omega.assign(bw.rho.size(), 0);
        ds.biwords.push_back(std::move(bw));
        ds.start_byte.push_back(start);
    }
    if (pos != eos_start) throw CorruptArchiveError("sentence boundary inside a codeword");
    return ds;
}

LoadedArchive::SentenceText LoadedArchive::sentence(uint64_t s) const {
    DecodedSentence ds = decode_sentence(s);
    return {restore_left(ds.biwords), restore_right(ds.biwords)};
}

std::vector<Occurrence> LoadedArchive::spot(const std::string& query,
                                            const SpotOptions& opt) const {
    std::vector<Token> words = tokenize_line(query);
    if (words.empty()) throw DataError("empty query");
    const size_t m = words.size();

    // One lookup per distinct word; duplicates share hit lists.
    std::vector<std::string> distinct;
    std::vector<size_t> slot_of(m);
    for (size_t k = 0; k < m; ++k) {
        auto it = std::find(distinct.begin(), distinct.end(), words[k]);
        slot_of[k] = it - distinct.begin();
        if (it == distinct.end()) distinct.push_back(words[k]);
    }

    std::vector<uint64_t> word_rank(distinct.size());
    std::vector<Bytes> pats;
    std::vector<uint32_t> owners;
    for (size_t d = 0; d < distinct.size(); ++d) {
        auto lr = left_rank(distinct[d]);
        if (!lr) return {};
        word_rank[d] = *lr;
        std::vector<uint32_t> ranks = biword_ranks_for_left(*lr);
        if (ranks.empty()) return {};
        for (uint32_t rank : ranks) {
            pats.push_back(etdc_code(rank));
            owners.push_back(static_cast<uint32_t>(d));
        }
    }

    std::vector<std::vector<uint64_t>> hits(distinct.size());
    StreamScanner scanner(std::move(pats), std::move(owners));
    scanner.scan(b_bytes_, [&](uint32_t d, uint64_t start) { hits[d].push_back(start); });
    for (const auto& h : hits)
        if (h.empty()) return {};

    size_t pivot = 0;
    if (opt.forced_pivot >= 0) {
        if (static_cast<size_t>(opt.forced_pivot) >= m)
            throw DataError("pivot index past the end of the query");
        pivot = static_cast<size_t>(opt.forced_pivot);
    } else {
        for (size_t k = 1; k < m; ++k)
            if (hits[slot_of[k]].size() < hits[slot_of[pivot]].size()) pivot = k;
    }

    // Rank-space view of one sentence, enough to verify windows and collect
    // aligned right positions without touching the word spellings.
    struct Light {
        std::vector<uint64_t> start_byte;
        std::vector<std::vector<uint32_t>> right_pos; // per biword
        std::vector<uint32_t> left_rank_at;           // per left position
        std::vector<uint32_t> bw_of_left;             // left position -> biword
    };
    auto eps = left_rank("");
    uint32_t eps_rank = eps ? static_cast<uint32_t>(*eps) : UINT32_MAX;

    auto decode_light = [&](uint64_t s) {
        Light ls;
        uint64_t begin = s == 0 ? 0 : eos_ends_[s - 1] + 1;
        uint64_t eos_start = eos_ends_[s] + 1 - etdc_code_length(eos_rank_);
        size_t pos = begin;
        std::vector<uint8_t> defined;
        uint32_t n = 1;
        while (pos < eos_start) {
            uint64_t start = pos;
            uint64_t rank = etdc_decode(b_bytes_, pos);
            auto [lrank, rrank] = sigma_b_[rank];
            uint32_t rho_size = static_cast<uint32_t>(r_by_rank_[rrank].size());
            std::vector<uint32_t> omega;
            if (p_.access(pos)) omega = omega_of(p_.rank(pos), rho_size);
            uint32_t b = static_cast<uint32_t>(ls.start_byte.size());
            ls.start_byte.push_back(start);
            ls.right_pos.emplace_back();
            if (lrank != eps_rank) {
                ls.left_rank_at.push_back(lrank);
                ls.bw_of_left.push_back(b);
            }
            uint64_t k = n - 1;
            for (uint32_t j = 0; j < rho_size; ++j) {
                k += (omega.empty() ? 0 : uint64_t{omega[j]}) + 1;
                if (k > (uint64_t{1} << 31))
                    throw CorruptArchiveError("offset places a right word at position " +
                                              std::to_string(k));
                if (k > defined.size()) defined.resize(k, 0);
                if (defined[k - 1])
                    throw CorruptArchiveError("two biwords write right position " +
                                              std::to_string(k));
                defined[k - 1] = 1;
                ls.right_pos[b].push_back(static_cast<uint32_t>(k));
            }
            while (n <= defined.size() && defined[n - 1]) ++n;
        }
        return ls;
    };

    std::vector<Occurrence> out;
    uint64_t cached_s = UINT64_MAX;
    Light ls;
    for (uint64_t start : hits[slot_of[pivot]]) {
        uint64_t s = std::lower_bound(eos_ends_.begin(), eos_ends_.end(), start) -
                     eos_ends_.begin();
        if (s != cached_s) {
            ls = decode_light(s);
            cached_s = s;
        }
        size_t b = std::lower_bound(ls.start_byte.begin(), ls.start_byte.end(), start) -
                   ls.start_byte.begin();
        // The pivot word is a left word, so its biword holds a left position.
        size_t p = std::lower_bound(ls.bw_of_left.begin(), ls.bw_of_left.end(), b) -
                   ls.bw_of_left.begin() + 1;
        int64_t w0 = static_cast<int64_t>(p) - static_cast<int64_t>(pivot);
        if (w0 < 1 || w0 + m - 1 > ls.left_rank_at.size()) continue;
        bool match = true;
        for (size_t j = 0; j < m && match; ++j)
            match = ls.left_rank_at[w0 - 1 + j] == word_rank[slot_of[j]];
        if (!match) continue;
        Occurrence occ;
        occ.sentence = s;
        occ.left_begin = static_cast<uint32_t>(w0);
        occ.left_end = static_cast<uint32_t>(w0 + m - 1);
        for (size_t j = 0; j < m; ++j) {
            const auto& rp = ls.right_pos[ls.bw_of_left[w0 - 1 + j]];
            occ.right_positions.insert(occ.right_positions.end(), rp.begin(), rp.end());
        }
        std::sort(occ.right_positions.begin(), occ.right_positions.end());
        out.push_back(std::move(occ));
        if (opt.limit > 0 && out.size() == opt.limit) break;
    }
    return out;
}

} // namespace gbw
