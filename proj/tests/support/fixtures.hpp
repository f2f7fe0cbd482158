#pragma once

#include <random>
#include <string>
#include <vector>

#include "gbw/bitext.hpp"
#include "gbw/biword.hpp"

namespace gbw::test {

// The worked extraction example used as the golden fixture: a nine-word
// sentence whose alignment exercises one-to-many links, unaligned words on
// both sides, and both shift kinds. Expected results are frozen here.
SentencePair reference_pair();
std::vector<GeneralizedBiword> reference_biwords();
extern const char* const kReferenceLeftLine;
extern const char* const kReferenceRightLine;
extern const char* const kReferencePharaohLine;

// Small random sentence pairs with arbitrary valid one-to-many links
// (every right word at most one partner; anything else goes).
struct RandomPairOpts {
    uint32_t max_left = 8;
    uint32_t max_right = 10;
    uint32_t empty_percent = 5; // chance of an empty side
    uint32_t link_percent = 70; // chance that a right word is linked
    uint32_t vocab = 12;
};
SentencePair random_pair(std::mt19937_64& rng, const RandomPairOpts& opts = {});
AlignedBitext random_bitext(std::mt19937_64& rng, size_t sentences,
                            const RandomPairOpts& opts = {});

// One-to-one sub-alignment: each left word keeps only its first link.
AlignedBitext to_one_to_one(const AlignedBitext& bt);
SentencePair to_one_to_one(const SentencePair& pair);

// Scratch files for loader and CLI tests.
std::string temp_dir();
void write_lines(const std::string& path, const std::vector<std::string>& lines);

} // namespace gbw::test
