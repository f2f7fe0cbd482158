#pragma once

#include <cstdint>
#include <vector>

#include "gbw/bitext.hpp"
#include "gbw/biword.hpp"
#include "gbw/huffman.hpp"
#include "gbw/spotting.hpp"

namespace gbw::test {

// Linear-scan bit-vector answers (1-based, like the real structures).
uint64_t naive_rank(const std::vector<uint8_t>& bits, uint64_t i);
uint64_t naive_select(const std::vector<uint8_t>& bits, uint64_t k);

// Total weighted code length of the best possible binary prefix code,
// found by exhaustive search; alphabets up to 8 symbols.
uint64_t optimal_code_cost(const std::vector<uint64_t>& freqs);
uint64_t code_cost(const HuffmanCode& code, const std::vector<uint64_t>& freqs);

// Right text rebuilt from the positions recorded during extraction,
// independent of the offset arithmetic used by the regular restorer.
std::vector<Token> place_by_trace(const SentencePair& pair);

// Brute-force phrase search over a decoded biword stream: scans every
// restored left sentence, right positions from the sentence placement.
std::vector<Occurrence> spot_oracle(const BiwordSequence& seq,
                                    const std::vector<Token>& query);

} // namespace gbw::test
