#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <map>
#include <random>

#include "gbw/archive.hpp"
#include "gbw/error.hpp"
#include "gbw/spotting.hpp"
#include "gbw/synth.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace gbw;

namespace {

struct Workbench {
    AlignedBitext bt;
    BiwordSequence seq;
    LoadedArchive archive;
};

Workbench make_bench(uint64_t seed, double swap_rate, uint64_t sentences = 400) {
    SynthSpec spec;
    spec.seed = seed;
    spec.sentences = sentences;
    spec.left_vocab = 300;
    spec.swap_rate = swap_rate;
    SynthCorpus sc = make_corpus(spec);
    BiwordSequence seq = extract_corpus(sc.bitext, Scheme::kComplex1N);
    Bytes ar = compress_corpus(seq, Method::kSearchable, Scheme::kComplex1N, 1);
    return {std::move(sc.bitext), std::move(seq), LoadedArchive(std::move(ar))};
}

void compare_with_oracle(const Workbench& wb, const std::string& query) {
    CAPTURE(query);
    auto got = wb.archive.spot(query);
    auto want = test::spot_oracle(wb.seq, tokenize_line(query));
    REQUIRE(got.size() == want.size());
    for (size_t k = 0; k < want.size(); ++k) {
        CAPTURE(k);
        REQUIRE(got[k] == want[k]);
    }
}

// words of the corpus by frequency, most common first
std::vector<Token> words_by_freq(const AlignedBitext& bt) {
    std::map<Token, uint64_t> freq;
    for (const auto& p : bt.pairs)
        for (const auto& w : p.left) ++freq[w];
    std::vector<std::pair<uint64_t, Token>> by;
    for (auto& [w, n] : freq) by.push_back({n, w});
    std::sort(by.begin(), by.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    std::vector<Token> out;
    for (auto& [n, w] : by) out.push_back(w);
    return out;
}

} // namespace

TEST_CASE("only the searchable layout can be loaded") {
    std::mt19937_64 rng(42);
    AlignedBitext bt = test::random_bitext(rng, 30);
    BiwordSequence seq = extract_corpus(bt, Scheme::kComplex1N);
    for (Method m : {Method::kWordHuffman, Method::kTre, Method::kTwoLevel})
        CHECK_THROWS_AS(LoadedArchive(compress_corpus(seq, m, Scheme::kComplex1N, 1)), DataError);
    LoadedArchive ok(compress_corpus(seq, Method::kSearchable, Scheme::kComplex1N, 1));
    CHECK(ok.sentence_count() == seq.sentence_count);
    CHECK(ok.biword_entry_count() > 1);
    CHECK(ok.stream_byte_count() > 0);
}

TEST_CASE("loaded sentences equal the restored corpus") {
    Workbench wb = make_bench(2024, 0.12, 80);
    RestoredCorpus rc = restore_corpus(wb.seq);
    for (uint64_t s = 0; s < wb.archive.sentence_count(); ++s) {
        auto st = wb.archive.sentence(s);
        REQUIRE(st.left == rc.left[s]);
        REQUIRE(st.right == rc.right[s]);
    }
    CHECK_THROWS_AS(wb.archive.sentence(wb.archive.sentence_count()), DataError);
}

TEST_CASE("word ranks and their biword entries") {
    Workbench wb = make_bench(7, 0.1, 120);
    auto vocab = words_by_freq(wb.bt);
    REQUIRE(!vocab.empty());
    for (size_t k = 0; k < vocab.size(); k += 17) {
        auto lr = wb.archive.left_rank(vocab[k]);
        REQUIRE(lr.has_value());
        CHECK(!wb.archive.biword_ranks_for_left(*lr).empty());
    }
    CHECK(!wb.archive.left_rank("zzznotthere").has_value());
}

TEST_CASE("single-word spotting agrees with the brute-force scan") {
    Workbench wb = make_bench(31, 0.12);
    auto vocab = words_by_freq(wb.bt);
    // the most common word, a mid one, the rarest, and misses
    compare_with_oracle(wb, vocab.front());
    compare_with_oracle(wb, vocab[vocab.size() / 2]);
    compare_with_oracle(wb, vocab.back());
    CHECK(wb.archive.spot("qqqqq").empty());
    std::mt19937_64 rng(5);
    for (int k = 0; k < 40; ++k) compare_with_oracle(wb, vocab[rng() % vocab.size()]);
}

TEST_CASE("spotting without any reorderings in the corpus") {
    Workbench wb = make_bench(77, 0.0);
    bool any_shift = false;
    for (const auto& bw : wb.seq.biwords)
        any_shift |= classify_shift(bw) != ShiftClass::kNoShift;
    CHECK(!any_shift); // swaps disabled leaves a fully monotone corpus
    auto vocab = words_by_freq(wb.bt);
    compare_with_oracle(wb, vocab.front());
    compare_with_oracle(wb, vocab[3]);
    std::mt19937_64 rng(6);
    for (int k = 0; k < 25; ++k) compare_with_oracle(wb, vocab[rng() % vocab.size()]);
}

TEST_CASE("phrase queries verify adjacency") {
    Workbench wb = make_bench(91, 0.12);
    std::mt19937_64 rng(9);
    // real adjacent windows: guaranteed at least one hit
    for (int k = 0; k < 30; ++k) {
        const auto& pair = wb.bt.pairs[rng() % wb.bt.pairs.size()];
        if (pair.left.size() < 2) continue;
        size_t len = 2 + rng() % 3;
        len = std::min(len, pair.left.size());
        size_t at = rng() % (pair.left.size() - len + 1);
        std::string q;
        for (size_t j = 0; j < len; ++j) {
            if (j) q += ' ';
            q += pair.left[at + j];
        }
        auto got = wb.archive.spot(q);
        CHECK(!got.empty());
        compare_with_oracle(wb, q);
    }
    // scrambled pairs: usually absent, and the oracle must agree exactly
    auto vocab = words_by_freq(wb.bt);
    for (int k = 0; k < 30; ++k) {
        std::string q = vocab[rng() % vocab.size()];
        q += ' ';
        q += vocab[rng() % vocab.size()];
        compare_with_oracle(wb, q);
    }
}

TEST_CASE("repeated query words are handled") {
    Workbench wb = make_bench(123, 0.1, 150);
    auto vocab = words_by_freq(wb.bt);
    std::string q = vocab.front();
    q += ' ';
    q += vocab.front();
    compare_with_oracle(wb, q);
}

TEST_CASE("the anchor choice cannot change the answer") {
    Workbench wb = make_bench(55, 0.12);
    std::mt19937_64 rng(20);
    int checked = 0;
    for (int k = 0; k < 60 && checked < 25; ++k) {
        const auto& pair = wb.bt.pairs[rng() % wb.bt.pairs.size()];
        if (pair.left.size() < 3) continue;
        size_t at = rng() % (pair.left.size() - 2);
        std::string q = pair.left[at];
        q += ' ';
        q += pair.left[at + 1];
        q += ' ';
        q += pair.left[at + 2];
        auto automatic = wb.archive.spot(q);
        for (int64_t pivot = 0; pivot < 3; ++pivot) {
            SpotOptions opt;
            opt.forced_pivot = pivot;
            auto forced = wb.archive.spot(q, opt);
            REQUIRE(forced == automatic);
        }
        ++checked;
    }
    REQUIRE(checked == 25);
}

TEST_CASE("result limits cut after verification") {
    Workbench wb = make_bench(66, 0.1);
    auto vocab = words_by_freq(wb.bt);
    auto all = wb.archive.spot(vocab.front());
    REQUIRE(all.size() > 5);
    SpotOptions opt;
    opt.limit = 3;
    auto some = wb.archive.spot(vocab.front(), opt);
    REQUIRE(some.size() == 3);
    CHECK(std::equal(some.begin(), some.end(), all.begin()));
}

TEST_CASE("queries are normalized like corpus text") {
    Workbench wb = make_bench(88, 0.1, 100);
    auto vocab = words_by_freq(wb.bt);
    std::string upper = vocab.front();
    for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    CHECK(wb.archive.spot(upper) == wb.archive.spot(vocab.front()));
    CHECK(wb.archive.spot("  " + vocab.front() + "\t") == wb.archive.spot(vocab.front()));
}

TEST_CASE("degenerate queries are rejected") {
    Workbench wb = make_bench(99, 0.1, 60);
    CHECK_THROWS_AS(wb.archive.spot(""), DataError);
    CHECK_THROWS_AS(wb.archive.spot("   "), DataError);
    SpotOptions opt;
    opt.forced_pivot = 1;
    auto vocab = words_by_freq(wb.bt);
    CHECK_THROWS_AS(wb.archive.spot(vocab.front(), opt), DataError);
}

TEST_CASE("occurrences carry aligned right positions") {
    // hand-built two-sentence corpus with known alignment
    AlignedBitext bt;
    SentencePair a;
    a.left = {"casa", "verde"};
    a.right = {"green", "house"};
    a.links = {{1, 2}, {2, 1}};
    SentencePair b;
    b.left = {"la", "casa"};
    b.right = {"the", "house"};
    b.links = {{1, 1}, {2, 2}};
    bt.pairs = {a, b};
    BiwordSequence seq = extract_corpus(bt, Scheme::kComplex1N);
    LoadedArchive ar(compress_corpus(seq, Method::kSearchable, Scheme::kComplex1N, 1));

    auto hits = ar.spot("casa");
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].sentence == 0);
    CHECK(hits[0].left_begin == 1);
    CHECK(hits[0].left_end == 1);
    CHECK(hits[0].right_positions == std::vector<uint32_t>{2});
    CHECK(hits[1].sentence == 1);
    CHECK(hits[1].left_begin == 2);
    CHECK(hits[1].right_positions == std::vector<uint32_t>{2});

    auto phrase = ar.spot("casa verde");
    REQUIRE(phrase.size() == 1);
    CHECK(phrase[0].sentence == 0);
    CHECK(phrase[0].left_begin == 1);
    CHECK(phrase[0].left_end == 2);
    CHECK(phrase[0].right_positions == std::vector<uint32_t>{1, 2});
}

TEST_CASE("one-to-many alignments surface every aligned word") {
    AlignedBitext bt;
    bt.pairs.push_back(test::reference_pair());
    BiwordSequence seq = extract_corpus(bt, Scheme::kComplex1N);
    LoadedArchive ar(compress_corpus(seq, Method::kSearchable, Scheme::kComplex1N, 1));

    auto volver = ar.spot("volver");
    REQUIRE(volver.size() == 1);
    CHECK(volver[0].right_positions == std::vector<uint32_t>{4, 5, 6});

    auto prefiero = ar.spot("prefiero");
    REQUIRE(prefiero.size() == 1);
    CHECK(prefiero[0].right_positions == std::vector<uint32_t>{1, 3});

    auto que = ar.spot("que"); // aligned to nothing
    REQUIRE(que.size() == 1);
    CHECK(que[0].right_positions.empty());

    compare_with_oracle({bt, seq, std::move(ar)}, "a la casa");
}

TEST_CASE("spotting sees through both offset layouts") {
    // swaps on: interleaved shifts force the per-array offset layout
    Workbench complex_wb = make_bench(404, 0.25, 200);
    bool complex_found = false;
    for (const auto& bw : complex_wb.seq.biwords)
        complex_found |= classify_shift(bw) == ShiftClass::kComplexShift;
    REQUIRE(complex_found);
    auto vocab = words_by_freq(complex_wb.bt);
    std::mt19937_64 rng(12);
    for (int k = 0; k < 20; ++k) compare_with_oracle(complex_wb, vocab[rng() % vocab.size()]);

    // swaps off: no interleaved shifts, first-offset layout
    Workbench plain_wb = make_bench(405, 0.0, 200);
    bool complex_absent = true;
    for (const auto& bw : plain_wb.seq.biwords)
        complex_absent &= classify_shift(bw) != ShiftClass::kComplexShift;
    REQUIRE(complex_absent);
    auto vocab2 = words_by_freq(plain_wb.bt);
    for (int k = 0; k < 20; ++k) compare_with_oracle(plain_wb, vocab2[rng() % vocab2.size()]);
}
