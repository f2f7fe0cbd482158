#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gbw/bitext.hpp"

namespace gbw {

// Reserved sentence-separator pseudo-tokens. The tokenizer isolates '<' and
// '>' as single-character tokens, so no real corpus word can collide with
// these spellings.
inline const Token kEosLeft = "<eos>";
inline const Token kEosRight = "<eos>";

// A generalized biword: a left word sigma (empty string = epsilon), the
// sequence rho of right words it is aligned to, and one non-negative offset
// per right word. The first offset counts the right words between the word
// and the first available gap; later offsets count the right words skipped
// since the previous word of rho.
struct GeneralizedBiword {
    Token sigma;
    std::vector<Token> rho;
    std::vector<uint32_t> omega;

    bool is_eos() const { return sigma == kEosLeft; }
    friend bool operator==(const GeneralizedBiword&, const GeneralizedBiword&) = default;
};

enum class ShiftClass {
    kNoShift,      // every offset is zero (or there are none)
    kSimpleShift,  // only the first offset is non-zero
    kComplexShift, // some offset after the first is non-zero
};

ShiftClass classify_shift(const GeneralizedBiword& bw);

// A corpus encoded as one flat biword stream; an EOS biword
// (kEosLeft,(kEosRight),(0)) terminates each sentence pair.
struct BiwordSequence {
    std::vector<GeneralizedBiword> biwords;
    uint64_t sentence_count = 0;
};

// Extraction scheme, fixing how much of the alignment is kept.
enum class Scheme : uint8_t {
    kMonotonic11 = 0,    // 1:1 links, shifted biwords split; all offsets zero
    kNonMonotonic11 = 1, // 1:1 links (forward/reverse intersection)
    kSimple1N = 2,       // 1:N, complex shifts split away
    kComplex1N = 3,      // 1:N, full alignment
};

// Corpus-wide occurrence counts of alignment links as (left token, right
// token) pairs. Drives the "drop the least frequent link" choices.
class LinkFrequencyTable {
public:
    void add(const Token& left, const Token& right, uint64_t n = 1);
    uint64_t count(const Token& left, const Token& right) const;

private:
    std::unordered_map<std::string, uint64_t> counts_;
};

LinkFrequencyTable build_link_frequencies(const AlignedBitext& bt);

// --- Extraction -----------------------------------------------------------

// Builds the biword sequence of one sentence pair, walking the left words
// and the right-side gaps in lockstep. Requires a one-to-many alignment
// (each right word linked at most once); the result restores both sides
// exactly and satisfies the sequence ordering.
std::vector<GeneralizedBiword> extract_biwords(const SentencePair& pair);

// The gap-advance rule: starting after right position n, returns the next
// right position that is unaligned or whose leftmost link is at or after
// left position m (N+1 when exhausted).
uint32_t next_right(const SentencePair& pair, uint32_t m, uint32_t n);

// Extraction that additionally records where each component sat in the
// original pair: the 1-based left position per biword (0 for epsilon) and
// the absolute 1-based right position of every rho word.
struct TracedBiwords {
    std::vector<GeneralizedBiword> biwords;
    std::vector<uint32_t> left_pos;
    std::vector<std::vector<uint32_t>> right_pos;
};
TracedBiwords extract_biwords_traced(const SentencePair& pair);

// Whole-corpus extraction for a scheme. 1:1 schemes expect the bitext links
// to already be one-to-one (forward/reverse intersection); a violation
// throws DataError. Honors the GBW_THREADS cap for sentence-level
// parallelism; output order is fixed regardless.
BiwordSequence extract_corpus(const AlignedBitext& bt, Scheme scheme);

// --- Restoration ----------------------------------------------------------

// Right-side word placement of one sentence (no EOS entries): each biword
// writes its rho words at the offsets-determined absolute positions.
struct Placement {
    std::vector<Token> tokens;                    // right words, index 0 = position 1
    std::vector<uint32_t> writer;                 // biword ordinal that wrote each position
    std::vector<std::vector<uint32_t>> positions; // per biword, absolute right positions
};

// Throws DataError on position collisions; with require_total also on holes.
Placement place_right(std::span<const GeneralizedBiword> sentence, bool require_total = true);

std::vector<Token> restore_right(std::span<const GeneralizedBiword> sentence);
std::vector<Token> restore_left(std::span<const GeneralizedBiword> sentence);

// Rebuilds the sentence pair, including its word links, from one sentence's
// biwords.
SentencePair biwords_to_pair(std::span<const GeneralizedBiword> sentence);

// Restores the full corpus (both sides) from an EOS-terminated stream.
struct RestoredCorpus {
    std::vector<std::vector<Token>> left;
    std::vector<std::vector<Token>> right;
};
RestoredCorpus restore_corpus(const BiwordSequence& seq);

// True iff the sentence's biwords observe the sequence ordering: the offsets
// place without conflict, non-epsilon biwords follow the left text, an
// epsilon-left biword never jumps ahead of a right word that belongs
// earlier, and it precedes a left-bearing biword only when nothing in the
// sentence is ordered between the two.
bool check_order(std::span<const GeneralizedBiword> sentence, const SentencePair& pair);

// --- Transforms -----------------------------------------------------------

// Splits every complex-shift biword by repeatedly unlinking its least
// frequent link (ties: smallest right position) until the kept right words
// are consecutive; freed words re-enter as unpaired biwords and the sentence
// is re-formed in order. Restored texts are unchanged.
std::vector<GeneralizedBiword> to_simple(std::span<const GeneralizedBiword> sentence,
                                         const LinkFrequencyTable& freqs);

// For 1:1 sequences only: biwords with a non-zero offset are split into a
// right-less biword plus an unpaired right word, leaving every offset zero.
std::vector<GeneralizedBiword> to_monotonic_11(std::span<const GeneralizedBiword> sentence);

// Applies a per-sentence transform to every sentence of a stream.
BiwordSequence transform_corpus(
    const BiwordSequence& seq,
    const std::function<std::vector<GeneralizedBiword>(std::span<const GeneralizedBiword>)>& fn);

// --- Pruning --------------------------------------------------------------

// Dictionary pruning: while some biword type (full (sigma,rho,omega)
// identity, EOS excluded) occurs at most delta times and still carries a
// link, every occurrence loses its least frequent link; sentences are then
// re-formed under the given scheme and counts refreshed. delta = 0 is the
// identity.
BiwordSequence prune_biwords(const BiwordSequence& seq, uint64_t delta,
                             const LinkFrequencyTable& freqs, Scheme scheme);

// Searches for the delta minimizing `size_of` (ternary search over [1, max
// type frequency] plus the mandatory candidate 0; ties to the smaller
// delta). Returns the winning delta and its pruned stream.
struct DeltaSearchResult {
    uint64_t delta = 0;
    BiwordSequence pruned;
};
DeltaSearchResult optimize_delta(const BiwordSequence& seq, const LinkFrequencyTable& freqs,
                                 Scheme scheme,
                                 const std::function<uint64_t(const BiwordSequence&)>& size_of);

// --- Inspection -----------------------------------------------------------

// Calls fn(sentence_span, index) per sentence; the stream must be
// EOS-terminated.
void for_each_sentence(
    const BiwordSequence& seq,
    const std::function<void(std::span<const GeneralizedBiword>, uint64_t)>& fn);

// One biword per line: "sigma ||| rho words ||| omega values", epsilon
// rendered as <eps>.
std::string dump_biwords(const BiwordSequence& seq);

// Effective worker-thread count: min(GBW_THREADS if set, hardware).
unsigned thread_budget();

} // namespace gbw
