#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gbw/bitext.hpp"

namespace gbw {

// Deterministic generator of aligned bitexts with controllable alignment
// phenomena: skewed vocabularies, one-to-many links, unaligned words on
// both sides, local reorderings (word-level swaps produce both simple and
// interleaved shifts), and a noisy reverse alignment whose intersection
// with the forward one is one-to-one.
struct SynthSpec {
    uint64_t seed = 1;
    uint64_t sentences = 1000;
    uint32_t left_vocab = 5000;
    uint32_t min_len = 3;  // left words per sentence
    uint32_t max_len = 15;
    double zipf_s = 1.1;   // frequency skew of word choice
    double fert0 = 0.08;   // P(left word unaligned)
    double fert2 = 0.12;   // P(two right words)
    double fert3 = 0.04;   // P(three right words)
    double variant = 0.10; // P(alternative translation of a word)
    double insert_right = 0.06; // P(unaligned right word after a group)
    double swap_rate = 0.12;    // adjacent right-word swaps per right word
    double reverse_keep = 0.85; // P(reverse aligner confirms a left word)
    double reverse_noise = 0.05; // P(reverse aligner points elsewhere)
};

struct SynthCorpus {
    AlignedBitext bitext;    // forward links (one-to-many)
    AlignedBitext bitext_11; // forward/reverse intersection links
    std::vector<std::string> left_lines;
    std::vector<std::string> right_lines;
    std::vector<std::string> align_lines;   // forward, 0-based "i-j"
    std::vector<std::string> reverse_lines; // right-to-left, 0-based "j-i"
};

SynthCorpus make_corpus(const SynthSpec& spec);

// The generator's word spellings (lowercase ASCII syllables, distinct
// shapes per side).
std::string synth_left_word(uint32_t id);
std::string synth_right_word(uint32_t id);

} // namespace gbw
