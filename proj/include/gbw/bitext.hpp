#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gbw {

// A normalized word: lowercase, no whitespace, no NUL. The empty string is
// reserved for the epsilon pseudo-word of unpaired biwords.
using Token = std::string;

// One word-level link, 1-based on both sides: left word i aligned to right
// word j.
struct Link {
    uint32_t i = 0;
    uint32_t j = 0;
    friend bool operator==(const Link&, const Link&) = default;
    friend auto operator<=>(const Link&, const Link&) = default;
};

// A sentence and its translation with the word alignment between them.
// Links are kept sorted and unique.
struct SentencePair {
    std::vector<Token> left;
    std::vector<Token> right;
    std::vector<Link> links;
};

// A whole corpus of aligned sentence pairs.
struct AlignedBitext {
    std::vector<SentencePair> pairs;
};

// How to react when an alignment line links one right word to several left
// words (invalid in the left-to-right one-to-many convention).
enum class ManyToOnePolicy {
    kError,     // reject the line
    kKeepFirst, // keep the link with the smallest left index per right word
};

// Splits one raw line into normalized tokens: characters that are neither
// alphanumeric nor whitespace are isolated as single-character tokens,
// everything is lowercased, whitespace runs separate tokens.
// Throws ParseError on invalid UTF-8.
std::vector<Token> tokenize_line(const std::string& line);

// Parses one Pharaoh alignment line ("i-j" items, 0-based in the file) into
// 1-based links for a sentence pair with `left_len` and `right_len` words.
// Duplicates collapse; indices out of range, malformed items, and (by
// default) one-to-many violations throw ParseError.
std::vector<Link> parse_alignment_line(const std::string& line, size_t left_len,
                                       size_t right_len,
                                       ManyToOnePolicy policy = ManyToOnePolicy::kError);

// Keeps the links present in both directional alignments: (i,j) survives iff
// forward contains (i,j) and reverse (built over the swapped text pair)
// contains (j,i). The result is one-to-one.
std::vector<Link> intersect_alignments(const std::vector<Link>& forward,
                                       const std::vector<Link>& reverse);

// Loads a bitext from three (or four) files: left text, right text, forward
// alignment, optionally reverse alignment (empty path = none; then links are
// the forward/reverse intersection). Line counts must agree.
AlignedBitext load_bitext(const std::string& left_path, const std::string& right_path,
                          const std::string& align_path,
                          const std::string& reverse_align_path = "",
                          ManyToOnePolicy policy = ManyToOnePolicy::kError);

// The canonical text form of one side: tokens joined by single spaces, one
// line per sentence, trailing newline per line. Compression ratios are
// measured against this rendering, and decompression reproduces it.
std::string normalized_text(const std::vector<std::vector<Token>>& sentences);

// Convenience: normalized_text of the chosen side of a corpus.
std::string normalized_side(const AlignedBitext& bt, bool left_side);

} // namespace gbw
