#include "support/fixtures.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace gbw::test {

const char* const kReferenceLeftLine = "prefiero volver a la casa verde en que vivimos";
const char* const kReferenceRightLine = "i would like to go back to the green house we live in";
const char* const kReferencePharaohLine =
    "0-0 0-2 1-3 1-4 1-5 2-6 3-7 4-9 5-8 6-12 8-10 8-11";

SentencePair reference_pair() {
    SentencePair pair;
    pair.left = {"prefiero", "volver", "a", "la", "casa", "verde", "en", "que", "vivimos"};
    pair.right = {"i",     "would", "like", "to", "go",   "back", "to",
                  "the",   "green", "house", "we", "live", "in"};
    pair.links = {{1, 1}, {1, 3}, {2, 4}, {2, 5}, {2, 6},  {3, 7},
                  {4, 8}, {5, 10}, {6, 9}, {7, 13}, {9, 11}, {9, 12}};
    return pair;
}

std::vector<GeneralizedBiword> reference_biwords() {
    return {
        {"prefiero", {"i", "like"}, {0, 1}},
        {"", {"would"}, {0}},
        {"volver", {"to", "go", "back"}, {0, 0, 0}},
        {"a", {"to"}, {0}},
        {"la", {"the"}, {0}},
        {"casa", {"house"}, {1}},
        {"verde", {"green"}, {0}},
        {"en", {"in"}, {2}},
        {"que", {}, {}},
        {"vivimos", {"we", "live"}, {0, 0}},
    };
}

namespace {

Token word(uint32_t id, bool right) {
    return (right ? "r" : "l") + std::to_string(id);
}

} // namespace

SentencePair random_pair(std::mt19937_64& rng, const RandomPairOpts& opts) {
    SentencePair pair;
    uint32_t nl = rng() % 100 < opts.empty_percent
                      ? 0
                      : 1 + static_cast<uint32_t>(rng() % opts.max_left);
    uint32_t nr = rng() % 100 < opts.empty_percent
                      ? 0
                      : 1 + static_cast<uint32_t>(rng() % opts.max_right);
    for (uint32_t i = 0; i < nl; ++i)
        pair.left.push_back(word(static_cast<uint32_t>(rng() % opts.vocab), false));
    for (uint32_t j = 0; j < nr; ++j)
        pair.right.push_back(word(static_cast<uint32_t>(rng() % opts.vocab), true));
    if (nl > 0) {
        for (uint32_t j = 1; j <= nr; ++j)
            if (rng() % 100 < opts.link_percent)
                pair.links.push_back({1 + static_cast<uint32_t>(rng() % nl), j});
    }
    std::sort(pair.links.begin(), pair.links.end());
    return pair;
}

AlignedBitext random_bitext(std::mt19937_64& rng, size_t sentences,
                            const RandomPairOpts& opts) {
    AlignedBitext bt;
    bt.pairs.reserve(sentences);
    for (size_t s = 0; s < sentences; ++s) bt.pairs.push_back(random_pair(rng, opts));
    return bt;
}

SentencePair to_one_to_one(const SentencePair& pair) {
    SentencePair out;
    out.left = pair.left;
    out.right = pair.right;
    uint32_t last_left = 0;
    for (const Link& lk : pair.links) { // sorted: first link per left word wins
        if (lk.i == last_left) continue;
        out.links.push_back(lk);
        last_left = lk.i;
    }
    return out;
}

AlignedBitext to_one_to_one(const AlignedBitext& bt) {
    AlignedBitext out;
    out.pairs.reserve(bt.pairs.size());
    for (const SentencePair& p : bt.pairs) out.pairs.push_back(to_one_to_one(p));
    return out;
}

std::string temp_dir() {
    char tmpl[] = "/tmp/gbw_test_XXXXXX";
    char* dir = mkdtemp(tmpl);
    if (!dir) throw std::runtime_error("mkdtemp failed");
    return dir;
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot create " + path);
    for (const std::string& l : lines) out << l << '\n';
}

} // namespace gbw::test
