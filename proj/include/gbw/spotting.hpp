#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gbw/archive.hpp"
#include "gbw/bitvector.hpp"
#include "gbw/biword.hpp"
#include "gbw/dac.hpp"

namespace gbw {

// One hit of a query inside the corpus: the sentence, the matched left-side
// word span, and the right-side words those left words are aligned to.
// Positions are 1-based within the sentence.
struct Occurrence {
    uint64_t sentence = 0; // 0-based sentence ordinal
    uint32_t left_begin = 0;
    uint32_t left_end = 0; // inclusive
    std::vector<uint32_t> right_positions; // sorted ascending

    friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

struct SpotOptions {
    uint64_t limit = 0;      // 0 = unlimited
    int64_t forced_pivot = -1; // query word index to anchor on; -1 = automatic
};

// A search-friendly archive mapped for querying. All lookups run on the
// compressed byte streams; only the dictionaries and the biword-pair table
// are expanded at load time.
class LoadedArchive {
public:
    // Takes ownership of the archive bytes; throws DataError unless the
    // method supports in-place search.
    explicit LoadedArchive(Bytes archive);

    uint64_t sentence_count() const { return sentences_; }
    uint64_t biword_entry_count() const { return sigma_b_.size(); }
    uint64_t stream_byte_count() const { return b_bytes_.size(); }

    // Dictionary rank of a (normalized) left word, if present.
    std::optional<uint64_t> left_rank(const std::string& word) const;

    // All biword-table ranks whose left component is the given word rank,
    // found by scanning the encoded table; sentence separators excluded.
    std::vector<uint32_t> biword_ranks_for_left(uint64_t lrank) const;

    // Finds every occurrence of the (whitespace-separated, normalized on
    // entry) query. Multi-word queries anchor on the rarest word and verify
    // adjacency in the restored sentence. Results arrive in corpus order.
    std::vector<Occurrence> spot(const std::string& query, const SpotOptions& opt = {}) const;

    struct SentenceText {
        std::vector<Token> left;
        std::vector<Token> right;
    };
    SentenceText sentence(uint64_t s) const;

private:
    struct DecodedSentence {
        std::vector<GeneralizedBiword> biwords; // separator excluded
        std::vector<uint64_t> start_byte;       // 0-based offsets into the stream
    };
    DecodedSentence decode_sentence(uint64_t s) const;
    std::vector<uint32_t> omega_of(uint64_t shift_ordinal, uint32_t rho_size) const;

    Bytes raw_;
    uint64_t sentences_ = 0;
    std::vector<std::string> l_by_rank_;
    std::vector<std::vector<Token>> r_by_rank_;
    std::vector<std::pair<uint32_t, uint32_t>> sigma_b_; // by rank: (left, right) ranks
    std::span<const uint8_t> sb_bytes_; // encoded biword table, into raw_
    std::span<const uint8_t> b_bytes_;  // encoded stream, into raw_
    PlainBitVector s_;                  // codeword-end bits of sb_bytes_
    RrrBitVector p_;                    // shift markers on b_bytes_
    DacArray o_;
    bool has_q_ = false;
    PlainBitVector q_;
    uint64_t eos_rank_ = 0;
    std::vector<uint64_t> eos_ends_; // 0-based final byte of each separator codeword
};

} // namespace gbw
