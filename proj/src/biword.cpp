#include "gbw/biword.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "gbw/error.hpp"

namespace gbw {

namespace {

// Per-word link lists for one sentence pair, 1-based indices.
struct LinkIndex {
    std::vector<std::vector<uint32_t>> of_left;  // 1..M -> ascending right positions
    std::vector<std::vector<uint32_t>> of_right; // 1..N -> ascending left positions

    explicit LinkIndex(const SentencePair& pair)
        : of_left(pair.left.size() + 1), of_right(pair.right.size() + 1) {
        for (const Link& lk : pair.links) {
            if (lk.i == 0 || lk.i > pair.left.size() || lk.j == 0 || lk.j > pair.right.size())
                throw DataError("link (" + std::to_string(lk.i) + "," + std::to_string(lk.j) +
                                ") outside sentence");
            of_left[lk.i].push_back(lk.j);
            of_right[lk.j].push_back(lk.i);
        }
        for (auto& v : of_left) std::sort(v.begin(), v.end());
        for (auto& v : of_right) {
            std::sort(v.begin(), v.end());
            if (v.size() > 1)
                throw DataError("right word linked to more than one left word");
        }
    }

    uint32_t next_right(uint32_t m, uint32_t n) const {
        const uint32_t N = static_cast<uint32_t>(of_right.size()) - 1;
        do {
            ++n;
        } while (n <= N && !of_right[n].empty() && of_right[n].front() < m);
        return n;
    }
};

} // namespace

ShiftClass classify_shift(const GeneralizedBiword& bw) {
    for (size_t k = 1; k < bw.omega.size(); ++k)
        if (bw.omega[k] != 0) return ShiftClass::kComplexShift;
    return (!bw.omega.empty() && bw.omega[0] != 0) ? ShiftClass::kSimpleShift
                                                   : ShiftClass::kNoShift;
}

void LinkFrequencyTable::add(const Token& left, const Token& right, uint64_t n) {
    counts_[left + '\0' + right] += n;
}

uint64_t LinkFrequencyTable::count(const Token& left, const Token& right) const {
    auto it = counts_.find(left + '\0' + right);
    return it == counts_.end() ? 0 : it->second;
}

LinkFrequencyTable build_link_frequencies(const AlignedBitext& bt) {
    LinkFrequencyTable t;
    for (const SentencePair& p : bt.pairs)
        for (const Link& lk : p.links) t.add(p.left[lk.i - 1], p.right[lk.j - 1]);
    return t;
}

uint32_t next_right(const SentencePair& pair, uint32_t m, uint32_t n) {
    return LinkIndex(pair).next_right(m, n);
}

TracedBiwords extract_biwords_traced(const SentencePair& pair) {
    const LinkIndex idx(pair);
    const uint32_t M = static_cast<uint32_t>(pair.left.size());
    const uint32_t N = static_cast<uint32_t>(pair.right.size());
    TracedBiwords out;

    auto emit = [&](GeneralizedBiword bw, uint32_t lpos, std::vector<uint32_t> rpos) {
        out.biwords.push_back(std::move(bw));
        out.left_pos.push_back(lpos);
        out.right_pos.push_back(std::move(rpos));
    };

    uint32_t m = 1, n = 1;
    while (m <= M && n <= N) {
        if (idx.of_left[m].empty()) {
            emit({pair.left[m - 1], {}, {}}, m, {});
            ++m;
        } else if (idx.of_right[n].empty()) {
            emit({Token(), {pair.right[n - 1]}, {0}}, 0, {n});
            n = idx.next_right(m, n);
        } else {
            GeneralizedBiword bw;
            bw.sigma = pair.left[m - 1];
            uint32_t k = n;
            for (uint32_t j : idx.of_left[m]) {
                bw.rho.push_back(pair.right[j - 1]);
                bw.omega.push_back(j - k);
                k = j + 1;
                if (n == j) n = idx.next_right(m, n);
            }
            emit(std::move(bw), m, idx.of_left[m]);
            ++m;
        }
    }
    while (m <= M) {
        emit({pair.left[m - 1], {}, {}}, m, {});
        ++m;
    }
    while (n <= N) {
        if (idx.of_right[n].empty()) emit({Token(), {pair.right[n - 1]}, {0}}, 0, {n});
        ++n;
    }
    return out;
}

std::vector<GeneralizedBiword> extract_biwords(const SentencePair& pair) {
    return extract_biwords_traced(pair).biwords;
}

Placement place_right(std::span<const GeneralizedBiword> sentence, bool require_total) {
    Placement pl;
    pl.positions.resize(sentence.size());
    std::vector<uint8_t> defined;
    uint32_t n = 1;
    // a total placement fills every position up to the last one, so no word
    // may land beyond the count of right words
    uint64_t limit = uint64_t{1} << 31;
    if (require_total) {
        uint64_t total = 0;
        for (const GeneralizedBiword& bw : sentence) total += bw.rho.size();
        limit = std::min(limit, total);
    }
    for (size_t b = 0; b < sentence.size(); ++b) {
        const GeneralizedBiword& bw = sentence[b];
        if (bw.rho.size() != bw.omega.size())
            throw DataError("biword with " + std::to_string(bw.rho.size()) + " right words but " +
                            std::to_string(bw.omega.size()) + " offsets");
        uint64_t k = n - 1; // 1-based position cursor
        for (size_t j = 0; j < bw.rho.size(); ++j) {
            k += uint64_t{bw.omega[j]} + 1;
            if (k > limit)
                throw DataError("offset places a right word at position " + std::to_string(k));
            if (k > pl.tokens.size()) {
                pl.tokens.resize(k);
                pl.writer.resize(k);
                defined.resize(k, 0);
            }
            if (defined[k - 1])
                throw DataError("two biwords write right position " + std::to_string(k));
            defined[k - 1] = 1;
            pl.tokens[k - 1] = bw.rho[j];
            pl.writer[k - 1] = static_cast<uint32_t>(b);
            pl.positions[b].push_back(static_cast<uint32_t>(k));
        }
        while (n <= pl.tokens.size() && defined[n - 1]) ++n;
    }
    if (require_total) {
        for (size_t p = 0; p < defined.size(); ++p)
            if (!defined[p]) throw DataError("right position " + std::to_string(p + 1) + " left empty");
    }
    return pl;
}

std::vector<Token> restore_right(std::span<const GeneralizedBiword> sentence) {
    return place_right(sentence).tokens;
}

std::vector<Token> restore_left(std::span<const GeneralizedBiword> sentence) {
    std::vector<Token> out;
    for (const GeneralizedBiword& bw : sentence)
        if (!bw.sigma.empty()) out.push_back(bw.sigma);
    return out;
}

SentencePair biwords_to_pair(std::span<const GeneralizedBiword> sentence) {
    SentencePair pair;
    Placement pl = place_right(sentence);
    pair.right = pl.tokens;
    uint32_t lpos = 0;
    for (size_t b = 0; b < sentence.size(); ++b) {
        if (sentence[b].sigma.empty()) continue;
        ++lpos;
        pair.left.push_back(sentence[b].sigma);
        for (uint32_t rp : pl.positions[b]) pair.links.push_back({lpos, rp});
    }
    std::sort(pair.links.begin(), pair.links.end());
    return pair;
}

RestoredCorpus restore_corpus(const BiwordSequence& seq) {
    RestoredCorpus out;
    for_each_sentence(seq, [&](std::span<const GeneralizedBiword> sent, uint64_t) {
        out.left.push_back(restore_left(sent));
        out.right.push_back(restore_right(sent));
    });
    return out;
}

bool check_order(std::span<const GeneralizedBiword> sentence, const SentencePair& pair) {
    const size_t K = sentence.size();
    Placement pl;
    try {
        pl = place_right(sentence, /*require_total=*/false);
    } catch (const DataError&) {
        return false;
    }
    // Left positions: the k-th non-epsilon biword must carry the k-th left
    // word, otherwise the sequence cannot follow the left text at all.
    std::vector<uint32_t> left_pos(K, 0);
    uint32_t lp = 0;
    for (size_t b = 0; b < K; ++b) {
        if (sentence[b].sigma.empty()) continue;
        ++lp;
        if (lp > pair.left.size() || pair.left[lp - 1] != sentence[b].sigma) return false;
        left_pos[b] = lp;
    }
    if (lp != pair.left.size()) return false;

    auto first_right = [&](size_t b) -> uint32_t {
        return pl.positions[b].empty() ? 0 : pl.positions[b].front();
    };
    // Position-based precedence: left-text order between two left words,
    // initial-right order when either side lacks a left word.
    auto prec12 = [&](size_t a, size_t b) {
        if (left_pos[a] && left_pos[b] && left_pos[a] < left_pos[b]) return true;
        if ((!left_pos[a] || !left_pos[b]) && first_right(a) && first_right(b) &&
            first_right(a) < first_right(b))
            return true;
        return false;
    };
    // Only the epsilon-left biwords need checking beyond the left-text walk:
    // the relation is not total under crossing alignments, so the rules bind
    // one direction only (matching what extraction can guarantee).
    for (size_t i = 0; i < K; ++i) {
        if (left_pos[i] != 0) continue;
        for (size_t j = i + 1; j < K; ++j) {
            // never ahead of a right word that must come earlier
            if (first_right(j) && first_right(j) < first_right(i)) return false;
            if (left_pos[j] != 0) {
                // before a left word only when nothing sits between the two
                for (size_t g = 0; g < K; ++g)
                    if (prec12(j, g) && prec12(g, i)) return false;
            }
        }
    }
    return true;
}

namespace {

// Re-extracts a sentence after link surgery, optionally re-applying the
// scheme-specific split so the transform's guarantees survive.
std::vector<GeneralizedBiword> reform(const SentencePair& pair, Scheme scheme,
                                      const LinkFrequencyTable* freqs) {
    auto bws = extract_biwords(pair);
    switch (scheme) {
    case Scheme::kSimple1N:
        return to_simple(bws, *freqs);
    case Scheme::kMonotonic11:
        return to_monotonic_11(bws);
    default:
        return bws;
    }
}

// Index (into ascending `positions`) of the least frequent link of a biword,
// ties to the smallest right position.
size_t least_frequent(const Token& sigma, const std::vector<Token>& rho,
                      const LinkFrequencyTable& freqs) {
    size_t best = 0;
    uint64_t best_count = freqs.count(sigma, rho[0]);
    for (size_t k = 1; k < rho.size(); ++k) {
        uint64_t c = freqs.count(sigma, rho[k]);
        if (c < best_count) {
            best = k;
            best_count = c;
        }
    }
    return best;
}

bool consecutive(const std::vector<uint32_t>& positions) {
    for (size_t k = 1; k < positions.size(); ++k)
        if (positions[k] != positions[k - 1] + 1) return false;
    return true;
}

void erase_link(SentencePair& pair, uint32_t i, uint32_t j) {
    auto it = std::find(pair.links.begin(), pair.links.end(), Link{i, j});
    if (it != pair.links.end()) pair.links.erase(it);
}

} // namespace

std::vector<GeneralizedBiword> to_simple(std::span<const GeneralizedBiword> sentence,
                                         const LinkFrequencyTable& freqs) {
    bool any_complex = false;
    for (const auto& bw : sentence)
        if (classify_shift(bw) == ShiftClass::kComplexShift) any_complex = true;
    if (!any_complex) return {sentence.begin(), sentence.end()};

    SentencePair pair = biwords_to_pair(sentence);
    LinkIndex idx(pair);
    for (uint32_t i = 1; i <= pair.left.size(); ++i) {
        std::vector<uint32_t> kept = idx.of_left[i];
        while (!consecutive(kept)) {
            std::vector<Token> words;
            for (uint32_t j : kept) words.push_back(pair.right[j - 1]);
            size_t drop = least_frequent(pair.left[i - 1], words, freqs);
            erase_link(pair, i, kept[drop]);
            kept.erase(kept.begin() + static_cast<ptrdiff_t>(drop));
        }
    }
    auto out = extract_biwords(pair);
    for (const auto& bw : out)
        if (classify_shift(bw) == ShiftClass::kComplexShift)
            throw DataError("complex shift survived simplification");
    return out;
}

std::vector<GeneralizedBiword> to_monotonic_11(std::span<const GeneralizedBiword> sentence) {
    for (const auto& bw : sentence)
        if (bw.rho.size() > 1)
            throw DataError("one-to-one transform fed a biword with " +
                            std::to_string(bw.rho.size()) + " right words");
    bool any_shift = false;
    for (const auto& bw : sentence)
        if (classify_shift(bw) != ShiftClass::kNoShift) any_shift = true;
    if (!any_shift) return {sentence.begin(), sentence.end()};

    Placement pl = place_right(sentence);
    SentencePair pair = biwords_to_pair(sentence);
    uint32_t lpos = 0;
    for (size_t b = 0; b < sentence.size(); ++b) {
        const auto& bw = sentence[b];
        if (!bw.sigma.empty()) ++lpos;
        if (!bw.sigma.empty() && classify_shift(bw) != ShiftClass::kNoShift)
            erase_link(pair, lpos, pl.positions[b].front());
    }
    auto out = extract_biwords(pair);
    for (const auto& bw : out)
        if (classify_shift(bw) != ShiftClass::kNoShift)
            throw DataError("shift survived monotone split");
    return out;
}

void for_each_sentence(
    const BiwordSequence& seq,
    const std::function<void(std::span<const GeneralizedBiword>, uint64_t)>& fn) {
    size_t start = 0;
    uint64_t index = 0;
    for (size_t b = 0; b < seq.biwords.size(); ++b) {
        if (!seq.biwords[b].is_eos()) continue;
        fn(std::span<const GeneralizedBiword>(seq.biwords.data() + start, b - start), index);
        ++index;
        start = b + 1;
    }
    if (start != seq.biwords.size())
        throw DataError("biword stream does not end at a sentence boundary");
    if (index != seq.sentence_count)
        throw DataError("biword stream has " + std::to_string(index) + " sentences, header says " +
                        std::to_string(seq.sentence_count));
}

BiwordSequence transform_corpus(
    const BiwordSequence& seq,
    const std::function<std::vector<GeneralizedBiword>(std::span<const GeneralizedBiword>)>& fn) {
    BiwordSequence out;
    out.sentence_count = seq.sentence_count;
    out.biwords.reserve(seq.biwords.size());
    for_each_sentence(seq, [&](std::span<const GeneralizedBiword> sent, uint64_t) {
        auto replaced = fn(sent);
        out.biwords.insert(out.biwords.end(), std::make_move_iterator(replaced.begin()),
                           std::make_move_iterator(replaced.end()));
        out.biwords.push_back({kEosLeft, {kEosRight}, {0}});
    });
    return out;
}

unsigned thread_budget() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("GBW_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end && *end == '\0' && v >= 1) return std::min<unsigned>(hw, static_cast<unsigned>(v));
    }
    return hw;
}

BiwordSequence extract_corpus(const AlignedBitext& bt, Scheme scheme) {
    LinkFrequencyTable freqs;
    if (scheme == Scheme::kSimple1N) freqs = build_link_frequencies(bt);
    if (scheme == Scheme::kMonotonic11 || scheme == Scheme::kNonMonotonic11) {
        for (const SentencePair& p : bt.pairs) {
            std::vector<uint32_t> seen_left(p.left.size() + 1, 0);
            for (const Link& lk : p.links)
                if (seen_left[lk.i]++)
                    throw DataError(
                        "one-to-one scheme requires an intersected alignment (left word " +
                        std::to_string(lk.i) + " has several links)");
        }
    }

    std::vector<std::vector<GeneralizedBiword>> per_sentence(bt.pairs.size());
    auto work = [&](size_t begin, size_t end) {
        for (size_t s = begin; s < end; ++s) {
            auto bws = extract_biwords(bt.pairs[s]);
            if (scheme == Scheme::kSimple1N)
                bws = to_simple(bws, freqs);
            else if (scheme == Scheme::kMonotonic11)
                bws = to_monotonic_11(bws);
            per_sentence[s] = std::move(bws);
        }
    };
    const unsigned threads =
        std::min<unsigned>(thread_budget(), std::max<size_t>(1, bt.pairs.size() / 256));
    if (threads <= 1) {
        work(0, bt.pairs.size());
    } else {
        std::vector<std::thread> pool;
        const size_t chunk = (bt.pairs.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            size_t begin = t * chunk;
            size_t end = std::min(bt.pairs.size(), begin + chunk);
            if (begin < end) pool.emplace_back(work, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    BiwordSequence seq;
    seq.sentence_count = bt.pairs.size();
    for (auto& sent : per_sentence) {
        seq.biwords.insert(seq.biwords.end(), std::make_move_iterator(sent.begin()),
                           std::make_move_iterator(sent.end()));
        seq.biwords.push_back({kEosLeft, {kEosRight}, {0}});
    }
    return seq;
}

namespace {

std::string type_key(const GeneralizedBiword& bw) {
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
    return key;
}

} // namespace

BiwordSequence prune_biwords(const BiwordSequence& seq, uint64_t delta,
                             const LinkFrequencyTable& freqs, Scheme scheme) {
    if (delta == 0) return seq;
    BiwordSequence cur = seq;
    for (;;) {
        std::unordered_map<std::string, uint64_t> type_count;
        for (const auto& bw : cur.biwords)
            if (!bw.is_eos()) ++type_count[type_key(bw)];
        bool any_prunable = false;
        for (const auto& bw : cur.biwords) {
            if (bw.is_eos() || bw.sigma.empty() || bw.rho.empty()) continue;
            if (type_count[type_key(bw)] <= delta) {
                any_prunable = true;
                break;
            }
        }
        if (!any_prunable) return cur;

        cur = transform_corpus(cur, [&](std::span<const GeneralizedBiword> sent) {
            SentencePair pair = biwords_to_pair(sent);
            Placement pl = place_right(sent);
            bool touched = false;
            uint32_t lpos = 0;
            for (size_t b = 0; b < sent.size(); ++b) {
                const auto& bw = sent[b];
                if (!bw.sigma.empty()) ++lpos;
                if (bw.sigma.empty() || bw.rho.empty()) continue;
                if (type_count[type_key(bw)] > delta) continue;
                size_t drop = least_frequent(bw.sigma, bw.rho, freqs);
                erase_link(pair, lpos, pl.positions[b][drop]);
                touched = true;
            }
            if (!touched) return std::vector<GeneralizedBiword>(sent.begin(), sent.end());
            return reform(pair, scheme, &freqs);
        });
    }
}

DeltaSearchResult optimize_delta(const BiwordSequence& seq, const LinkFrequencyTable& freqs,
                                 Scheme scheme,
                                 const std::function<uint64_t(const BiwordSequence&)>& size_of) {
    std::unordered_map<std::string, uint64_t> type_count;
    for (const auto& bw : seq.biwords)
        if (!bw.is_eos() && !bw.sigma.empty() && !bw.rho.empty()) ++type_count[type_key(bw)];
    uint64_t max_freq = 0;
    for (const auto& [key, c] : type_count) max_freq = std::max(max_freq, c);

    // Only sizes are cached; corpora can be large, so the winning stream is
    // re-pruned once at the end instead of keeping every candidate alive.
    std::unordered_map<uint64_t, uint64_t> cache;
    auto eval = [&](uint64_t delta) -> uint64_t {
        auto it = cache.find(delta);
        if (it != cache.end()) return it->second;
        uint64_t size = size_of(prune_biwords(seq, delta, freqs, scheme));
        cache.emplace(delta, size);
        return size;
    };

    uint64_t lo = 1, hi = max_freq;
    if (max_freq == 0) lo = 1, hi = 0; // nothing prunable
    while (hi > lo && hi - lo > 2) {
        uint64_t m1 = lo + (hi - lo) / 3;
        uint64_t m2 = hi - (hi - lo) / 3;
        if (eval(m1) <= eval(m2))
            hi = m2 - 1;
        else
            lo = m1 + 1;
    }
    uint64_t best = 0;
    uint64_t best_size = eval(0);
    for (uint64_t d = lo; d <= hi && hi != 0; ++d) {
        uint64_t s = eval(d);
        if (s < best_size || (s == best_size && d < best)) {
            best = d;
            best_size = s;
        }
    }
    DeltaSearchResult res;
    res.delta = best;
    res.pruned = prune_biwords(seq, best, freqs, scheme);
    return res;
}

std::string dump_biwords(const BiwordSequence& seq) {
    std::string out;
    for (const auto& bw : seq.biwords) {
        out += bw.sigma.empty() ? "<eps>" : bw.sigma;
        out += " |||";
        for (const Token& w : bw.rho) {
            out += ' ';
            out += w;
        }
        out += " |||";
        for (uint32_t o : bw.omega) {
            out += ' ';
            out += std::to_string(o);
        }
        out += '\n';
    }
    return out;
}

} // namespace gbw
