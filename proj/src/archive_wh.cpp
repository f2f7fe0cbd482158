// Token-level Huffman baseline. One vocabulary over both sides; entry 0 is
// the line separator. The token stream is all left sentences, then all
// right sentences, each closed by the separator.

#include <unordered_map>

#include "archive_internal.hpp"
#include "gbw/bitio.hpp"
#include "gbw/error.hpp"

namespace gbw::detail {

Bytes compress_wh(const BiwordSequence& seq, const Header& h) {
    RestoredCorpus corpus = restore_corpus(seq);

    std::vector<std::string> vocab{""};
    std::unordered_map<std::string, uint32_t> ids{{"", 0}};
    std::vector<uint32_t> stream;
    auto push_lines = [&](const std::vector<std::vector<Token>>& lines) {
        for (const auto& line : lines) {
            for (const Token& w : line) {
                auto [it, fresh] = ids.try_emplace(w, static_cast<uint32_t>(vocab.size()));
                if (fresh) vocab.push_back(w);
                stream.push_back(it->second);
            }
            stream.push_back(0);
        }
    };
    push_lines(corpus.left);
    push_lines(corpus.right);

    std::optional<HuffmanCode> code;
    if (!stream.empty()) code = HuffmanCode::build(tally(stream));
    const HuffmanCode* cp = code ? &*code : nullptr;

    ByteWriter b;
    write_symbol_stream(b, cp, stream);

    std::vector<Section> sections;
    sections.push_back({kSecSigmaL, serialize_entries(vocab)});
    sections.push_back({kSecB, b.take()});
    sections.push_back({kSecTables, serialize_tables({cp})});
    return assemble_archive(h, sections);
}

RestoredCorpus decompress_wh(const ParsedArchive& ar) {
    std::vector<std::string> vocab = parse_entries(ar.need(kSecSigmaL));
    auto tables = parse_tables(ar.need(kSecTables), 1);
    const HuffmanCode* cp = tables[0] ? &*tables[0] : nullptr;

    ByteReader b(ar.need(kSecB));
    std::vector<uint32_t> stream = read_symbol_stream(b, cp);
    if (!b.done()) throw CorruptArchiveError("trailing bytes in token stream");

    std::vector<std::vector<Token>> lines;
    std::vector<Token> cur;
    for (uint32_t id : stream) {
        if (id >= vocab.size()) throw CorruptArchiveError("token reference out of range");
        if (id == 0) {
            lines.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(vocab[id]);
        }
    }
    if (!cur.empty()) throw CorruptArchiveError("token stream ends mid-sentence");

    uint64_t n = ar.header.sentence_count;
    if (lines.size() != 2 * n)
        throw CorruptArchiveError("sentence count disagrees with the token stream");
    RestoredCorpus out;
    out.left.assign(lines.begin(), lines.begin() + n);
    out.right.assign(lines.begin() + n, lines.end());
    return out;
}

} // namespace gbw::detail
