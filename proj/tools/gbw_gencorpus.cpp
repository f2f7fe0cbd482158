// Writes a reproducible synthetic aligned bitext: left/right texts, a
// forward alignment, and a reverse alignment whose intersection with the
// forward one is one-to-one.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "gbw/archive.hpp"
#include "gbw/synth.hpp"

namespace {

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::string joined;
    for (const std::string& l : lines) {
        joined += l;
        joined += '\n';
    }
    gbw::write_file(path, {reinterpret_cast<const uint8_t*>(joined.data()), joined.size()});
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"synthetic aligned bitext generator"};
    gbw::SynthSpec spec;
    std::string prefix;
    bool bijective = false;
    app.add_option("--seed", spec.seed, "random seed");
    app.add_option("--sentences", spec.sentences, "sentence pair count")->required();
    app.add_option("--vocab", spec.left_vocab, "left vocabulary size");
    app.add_option("--min-len", spec.min_len, "shortest left sentence");
    app.add_option("--max-len", spec.max_len, "longest left sentence");
    app.add_option("--swap-rate", spec.swap_rate, "right-word swaps per word");
    app.add_flag("--bijective", bijective,
                 "word-for-word translation: no reordering, no unaligned words");
    app.add_option("--out-prefix", prefix, "write PREFIX.{left,right,align,ralign}.txt")
        ->required();
    CLI11_PARSE(app, argc, argv);

    if (bijective) {
        spec.fert0 = spec.fert2 = spec.fert3 = 0;
        spec.variant = 0;
        spec.insert_right = 0;
        spec.swap_rate = 0;
        spec.reverse_keep = 1;
        spec.reverse_noise = 0;
    }

    try {
        gbw::SynthCorpus corpus = gbw::make_corpus(spec);
        write_lines(prefix + ".left.txt", corpus.left_lines);
        write_lines(prefix + ".right.txt", corpus.right_lines);
        write_lines(prefix + ".align.txt", corpus.align_lines);
        write_lines(prefix + ".ralign.txt", corpus.reverse_lines);
        std::printf("sentences: %llu\n", (unsigned long long)spec.sentences);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
