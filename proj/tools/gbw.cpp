// Command-line front end: compress aligned bitexts into biword archives,
// restore them, inspect them, and run phrase queries on the searchable
// variant. Exit codes: 0 success, 1 usage, 2 bad data or I/O.

#include <algorithm>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gbw/archive.hpp"
#include "gbw/bitext.hpp"
#include "gbw/biword.hpp"
#include "gbw/error.hpp"
#include "gbw/spotting.hpp"

namespace {

struct BitextArgs {
    std::string left, right, align, align_reverse;
    bool keep_first = false;
};

void add_bitext_options(CLI::App* cmd, BitextArgs& a) {
    cmd->add_option("--left", a.left, "left-side text, one sentence per line")->required();
    cmd->add_option("--right", a.right, "right-side text, one sentence per line")->required();
    cmd->add_option("--align", a.align, "forward alignment, 0-based i-j pairs")->required();
    cmd->add_option("--align-reverse", a.align_reverse,
                    "reverse alignment; links become the intersection");
    cmd->add_flag("--keep-first", a.keep_first,
                  "keep the lowest-numbered link when a right word has several");
}

gbw::AlignedBitext load(const BitextArgs& a, gbw::Scheme scheme) {
    bool one_to_one = scheme == gbw::Scheme::kMonotonic11 ||
                      scheme == gbw::Scheme::kNonMonotonic11;
    if (one_to_one && a.align_reverse.empty())
        throw CLI::ValidationError("--scheme",
                                   "one-to-one schemes need --align-reverse to intersect");
    return gbw::load_bitext(a.left, a.right, a.align, a.align_reverse,
                            a.keep_first ? gbw::ManyToOnePolicy::kKeepFirst
                                         : gbw::ManyToOnePolicy::kError);
}

gbw::Method parse_method(const std::string& name) {
    auto m = gbw::method_from_name(name);
    if (!m) throw CLI::ValidationError("--method", "unknown method " + name);
    return *m;
}

gbw::Scheme parse_scheme(const std::string& name) {
    auto s = gbw::scheme_from_name(name);
    if (!s) throw CLI::ValidationError("--scheme", "unknown scheme " + name);
    return *s;
}

const char* section_label(uint8_t id) {
    switch (id) {
    case 1: return "left dictionary";
    case 2: return "right dictionary";
    case 3: return "biword dictionary";
    case 4: return "stream";
    case 5: return "shift positions";
    case 6: return "offsets";
    case 7: return "offset shapes";
    case 8: return "code tables";
    }
    return "?";
}

int run(int argc, char** argv) {
    CLI::App app{"biword bitext compressor"};
    app.require_subcommand(1);

    // --- compress ---
    auto* c = app.add_subcommand("compress", "build an archive from an aligned bitext");
    BitextArgs cb;
    add_bitext_options(c, cb);
    std::string c_method = "2lcab", c_scheme = "1ton-complex", c_prune = "off", c_out;
    unsigned c_width = 4;
    c->add_option("--method", c_method, "wh, tre, 2lcab, or s2lcab");
    c->add_option("--scheme", c_scheme,
                  "1to1-mono, 1to1-nonmono, 1ton-simple, or 1ton-complex");
    c->add_option("--prune", c_prune, "off, auto, or a frequency threshold");
    c->add_option("--dac-width", c_width, "offset chunk width in bits");
    c->add_option("--out", c_out, "archive path")->required();

    // --- decompress ---
    auto* d = app.add_subcommand("decompress", "restore both text sides from an archive");
    std::string d_in, d_left, d_right;
    d->add_option("--in", d_in, "archive path")->required();
    d->add_option("--left-out", d_left, "restored left text path")->required();
    d->add_option("--right-out", d_right, "restored right text path")->required();

    // --- spot ---
    auto* sp = app.add_subcommand("spot", "find a phrase and its translations");
    std::string sp_in, sp_query, sp_marker = "*";
    uint64_t sp_limit = 0;
    int64_t sp_pivot = -1;
    bool sp_quiet = false;
    sp->add_option("--in", sp_in, "archive path (s2lcab)")->required();
    sp->add_option("--query", sp_query, "words to look up")->required();
    sp->add_option("--limit", sp_limit, "stop after this many matches");
    sp->add_option("--marker", sp_marker, "string wrapped around matched words");
    sp->add_option("--pivot", sp_pivot, "anchor on this query word (testing)");
    sp->add_flag("--count-only", sp_quiet, "print only the match count");

    // --- stats ---
    auto* st = app.add_subcommand("stats", "describe an archive or a bitext");
    std::string st_in, st_scheme = "1ton-complex";
    BitextArgs stb;
    st->add_option("--in", st_in, "archive path");
    st->add_option("--left", stb.left, "left-side text");
    st->add_option("--right", stb.right, "right-side text");
    st->add_option("--align", stb.align, "forward alignment");
    st->add_option("--align-reverse", stb.align_reverse, "reverse alignment");
    st->add_flag("--keep-first", stb.keep_first, "see compress");
    st->add_option("--scheme", st_scheme, "scheme for bitext stats");

    // --- extract ---
    auto* ex = app.add_subcommand("extract", "dump the biword sequence as text");
    BitextArgs exb;
    add_bitext_options(ex, exb);
    std::string ex_scheme = "1ton-complex", ex_out;
    ex->add_option("--scheme", ex_scheme, "extraction scheme");
    ex->add_option("--out", ex_out, "write the dump here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (c->parsed()) {
        gbw::Method method = parse_method(c_method);
        gbw::Scheme scheme = parse_scheme(c_scheme);
        gbw::AlignedBitext bt = load(cb, scheme);
        uint64_t input_bytes = gbw::normalized_side(bt, true).size() +
                               gbw::normalized_side(bt, false).size();
        gbw::BiwordSequence seq = gbw::extract_corpus(bt, scheme);
        uint64_t delta = 0;
        if (c_prune != "off") {
            gbw::LinkFrequencyTable freqs = gbw::build_link_frequencies(bt);
            if (c_prune == "auto") {
                auto best = gbw::optimize_delta(
                    seq, freqs, scheme, [&](const gbw::BiwordSequence& s2) {
                        return gbw::compress_corpus(s2, method, scheme, input_bytes, c_width)
                            .size();
                    });
                delta = best.delta;
                seq = std::move(best.pruned);
            } else {
                delta = std::stoull(c_prune);
                seq = gbw::prune_biwords(seq, delta, freqs, scheme);
            }
        }
        gbw::Bytes archive = gbw::compress_corpus(seq, method, scheme, input_bytes, c_width);
        gbw::write_file(c_out, archive);
        std::printf("method: %s\n", gbw::method_name(method));
        std::printf("scheme: %s\n", gbw::scheme_name(scheme));
        std::printf("sentences: %llu\n", (unsigned long long)seq.sentence_count);
        std::printf("biwords: %llu\n",
                    (unsigned long long)(seq.biwords.size() - seq.sentence_count));
        std::printf("prune delta: %llu\n", (unsigned long long)delta);
        std::printf("input bytes: %llu\n", (unsigned long long)input_bytes);
        std::printf("archive bytes: %llu\n", (unsigned long long)archive.size());
        std::printf("ratio: %.4f\n", gbw::compression_ratio(input_bytes, archive.size()));
        return 0;
    }

    if (d->parsed()) {
        gbw::Bytes archive = gbw::read_file(d_in);
        gbw::RestoredCorpus corpus = gbw::decompress_corpus(archive);
        std::string left = gbw::normalized_text(corpus.left);
        std::string right = gbw::normalized_text(corpus.right);
        gbw::write_file(d_left, {reinterpret_cast<const uint8_t*>(left.data()), left.size()});
        gbw::write_file(d_right,
                        {reinterpret_cast<const uint8_t*>(right.data()), right.size()});
        std::printf("sentences: %llu\n", (unsigned long long)corpus.left.size());
        std::printf("left bytes: %llu\n", (unsigned long long)left.size());
        std::printf("right bytes: %llu\n", (unsigned long long)right.size());
        return 0;
    }

    if (sp->parsed()) {
        gbw::LoadedArchive archive(gbw::read_file(sp_in));
        gbw::SpotOptions opt;
        opt.limit = sp_limit;
        opt.forced_pivot = sp_pivot;
        std::vector<gbw::Occurrence> occs = archive.spot(sp_query, opt);
        if (!sp_quiet) {
            uint64_t cached = UINT64_MAX;
            gbw::LoadedArchive::SentenceText text;
            for (const gbw::Occurrence& occ : occs) {
                if (occ.sentence != cached) {
                    text = archive.sentence(occ.sentence);
                    cached = occ.sentence;
                }
                std::printf("sentence %llu: left %u..%u right",
                            (unsigned long long)occ.sentence, occ.left_begin, occ.left_end);
                if (occ.right_positions.empty()) std::printf(" -");
                for (size_t k = 0; k < occ.right_positions.size(); ++k)
                    std::printf("%s%u", k ? "," : " ", occ.right_positions[k]);
                std::printf("\n");
                auto render = [&](const std::vector<gbw::Token>& words, auto marked) {
                    std::string line;
                    for (size_t k = 0; k < words.size(); ++k) {
                        if (k) line += ' ';
                        bool hit = marked(static_cast<uint32_t>(k + 1));
                        if (hit) line += sp_marker;
                        line += words[k];
                        if (hit) line += sp_marker;
                    }
                    return line;
                };
                std::printf("  left: %s\n",
                            render(text.left,
                                   [&](uint32_t p) {
                                       return p >= occ.left_begin && p <= occ.left_end;
                                   })
                                .c_str());
                std::printf("  right: %s\n",
                            render(text.right,
                                   [&](uint32_t p) {
                                       return std::binary_search(occ.right_positions.begin(),
                                                                 occ.right_positions.end(), p);
                                   })
                                .c_str());
            }
        }
        std::printf("matches: %zu\n", occs.size());
        return 0;
    }

    if (st->parsed()) {
        if (!st_in.empty()) {
            gbw::Bytes archive = gbw::read_file(st_in);
            gbw::ArchiveInfo info = gbw::inspect_archive(archive);
            std::printf("method: %s\n", gbw::method_name(info.method));
            std::printf("scheme: %s\n", gbw::scheme_name(info.scheme));
            std::printf("sentences: %llu\n", (unsigned long long)info.sentence_count);
            std::printf("input bytes: %llu\n", (unsigned long long)info.input_bytes);
            std::printf("archive bytes: %llu\n", (unsigned long long)info.total_bytes);
            std::printf("ratio: %.4f\n",
                        gbw::compression_ratio(info.input_bytes, info.total_bytes));
            for (const auto& s : info.sections)
                std::printf("section %u (%s): %llu\n", s.id, section_label(s.id),
                            (unsigned long long)s.bytes);
            return 0;
        }
        if (stb.left.empty() || stb.right.empty() || stb.align.empty())
            throw CLI::ValidationError("stats",
                                       "need --in or --left/--right/--align");
        gbw::Scheme scheme = parse_scheme(st_scheme);
        gbw::AlignedBitext bt = load(stb, scheme);
        gbw::BiwordSequence seq = gbw::extract_corpus(bt, scheme);
        gbw::CorpusStats cs = gbw::corpus_stats(seq);
        std::printf("scheme: %s\n", gbw::scheme_name(scheme));
        std::printf("sentences: %llu\n", (unsigned long long)cs.sentences);
        std::printf("biwords: %llu\n", (unsigned long long)cs.biwords);
        std::printf("distinct biwords: %llu\n", (unsigned long long)cs.distinct_biwords);
        std::printf("unpaired: %llu\n", (unsigned long long)cs.unpaired);
        std::printf("no shift: %llu\n", (unsigned long long)cs.no_shift);
        std::printf("simple shift: %llu\n", (unsigned long long)cs.simple_shift);
        std::printf("complex shift: %llu\n", (unsigned long long)cs.complex_shift);
        return 0;
    }

    if (ex->parsed()) {
        gbw::Scheme scheme = parse_scheme(ex_scheme);
        gbw::AlignedBitext bt = load(exb, scheme);
        gbw::BiwordSequence seq = gbw::extract_corpus(bt, scheme);
        std::string dump = gbw::dump_biwords(seq);
        if (ex_out.empty()) {
            std::fwrite(dump.data(), 1, dump.size(), stdout);
        } else {
            gbw::write_file(ex_out,
                            {reinterpret_cast<const uint8_t*>(dump.data()), dump.size()});
            std::printf("biwords: %llu\n",
                        (unsigned long long)(seq.biwords.size() - seq.sentence_count));
        }
        return 0;
    }
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const CLI::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const gbw::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
