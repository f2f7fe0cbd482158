#include "gbw/bitext.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_map>

#include "gbw/error.hpp"
#include "gbw/unicode.hpp"

namespace gbw {

std::vector<Token> tokenize_line(const std::string& line) {
    std::vector<Token> out;
    Token cur;
    auto flush = [&] {
        if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    };
    size_t pos = 0;
    while (pos < line.size()) {
        char32_t cp;
        if (!uni::decode_utf8(line, pos, cp))
            throw ParseError("invalid UTF-8 at byte " + std::to_string(pos));
        if (uni::is_space(cp)) {
            flush();
        } else if (uni::is_alnum(cp)) {
            uni::encode_utf8(uni::to_lower(cp), cur);
        } else {
            // Punctuation and symbols become single-character tokens.
            flush();
            uni::encode_utf8(uni::to_lower(cp), cur);
            flush();
        }
    }
    flush();
    return out;
}

std::vector<Link> parse_alignment_line(const std::string& line, size_t left_len,
                                       size_t right_len, ManyToOnePolicy policy) {
    std::set<Link> links;
    std::unordered_map<uint32_t, uint32_t> left_of_right; // j -> smallest i
    size_t pos = 0;
    const size_t n = line.size();
    while (pos < n) {
        while (pos < n && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r'))
            ++pos;
        if (pos >= n) break;
        auto read_number = [&](const char* what) -> uint64_t {
            if (pos >= n || line[pos] < '0' || line[pos] > '9')
                throw ParseError(std::string("malformed alignment item: expected ") + what);
            uint64_t v = 0;
            while (pos < n && line[pos] >= '0' && line[pos] <= '9') {
                v = v * 10 + static_cast<uint64_t>(line[pos] - '0');
                if (v > 0xFFFFFFFFull) throw ParseError("alignment index overflow");
                ++pos;
            }
            return v;
        };
        uint64_t i0 = read_number("left index");
        if (pos >= n || line[pos] != '-')
            throw ParseError("malformed alignment item: expected '-'");
        ++pos;
        uint64_t j0 = read_number("right index");
        if (pos < n && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r')
            throw ParseError("malformed alignment item: trailing junk");
        if (i0 >= left_len)
            throw ParseError("alignment left index " + std::to_string(i0) +
                             " out of range (sentence has " + std::to_string(left_len) +
                             " words)");
        if (j0 >= right_len)
            throw ParseError("alignment right index " + std::to_string(j0) +
                             " out of range (sentence has " + std::to_string(right_len) +
                             " words)");
        Link lk{static_cast<uint32_t>(i0 + 1), static_cast<uint32_t>(j0 + 1)};
        auto [it, fresh] = left_of_right.try_emplace(lk.j, lk.i);
        if (!fresh && it->second != lk.i) {
            switch (policy) {
            case ManyToOnePolicy::kError:
                throw ParseError("right word " + std::to_string(j0) +
                                 " linked to more than one left word");
            case ManyToOnePolicy::kKeepFirst:
                if (lk.i < it->second) {
                    links.erase(Link{it->second, lk.j});
                    it->second = lk.i;
                } else {
                    continue;
                }
            }
        }
        links.insert(lk);
    }
    return {links.begin(), links.end()};
}

std::vector<Link> intersect_alignments(const std::vector<Link>& forward,
                                       const std::vector<Link>& reverse) {
    std::set<Link> rev(reverse.begin(), reverse.end());
    std::vector<Link> out;
    for (const Link& lk : forward)
        if (rev.count(Link{lk.j, lk.i})) out.push_back(lk);
    return out;
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    return lines;
}

} // namespace

AlignedBitext load_bitext(const std::string& left_path, const std::string& right_path,
                          const std::string& align_path,
                          const std::string& reverse_align_path, ManyToOnePolicy policy) {
    auto ll = read_lines(left_path);
    auto rl = read_lines(right_path);
    auto al = read_lines(align_path);
    if (ll.size() != rl.size() || ll.size() != al.size())
        throw ParseError("line count mismatch: " + std::to_string(ll.size()) + " left, " +
                         std::to_string(rl.size()) + " right, " + std::to_string(al.size()) +
                         " alignment lines");
    std::vector<std::string> rev;
    if (!reverse_align_path.empty()) {
        rev = read_lines(reverse_align_path);
        if (rev.size() != ll.size())
            throw ParseError("line count mismatch: " + std::to_string(rev.size()) +
                             " reverse alignment lines for " + std::to_string(ll.size()) +
                             " sentences");
    }
    AlignedBitext bt;
    bt.pairs.resize(ll.size());
    for (size_t s = 0; s < ll.size(); ++s) {
        SentencePair& p = bt.pairs[s];
        try {
            p.left = tokenize_line(ll[s]);
            p.right = tokenize_line(rl[s]);
            p.links = parse_alignment_line(al[s], p.left.size(), p.right.size(), policy);
            if (!rev.empty()) {
                // Reverse lines index the swapped pair: items are j-i.
                auto rlinks =
                    parse_alignment_line(rev[s], p.right.size(), p.left.size(), policy);
                p.links = intersect_alignments(p.links, rlinks);
            }
        } catch (const Error& e) {
            throw ParseError("line " + std::to_string(s + 1) + ": " + e.what());
        }
    }
    return bt;
}

std::string normalized_text(const std::vector<std::vector<Token>>& sentences) {
    std::string out;
    for (const auto& sent : sentences) {
        for (size_t k = 0; k < sent.size(); ++k) {
            if (k) out += ' ';
            out += sent[k];
        }
        out += '\n';
    }
    return out;
}

std::string normalized_side(const AlignedBitext& bt, bool left_side) {
    std::vector<std::vector<Token>> sents;
    sents.reserve(bt.pairs.size());
    for (const auto& p : bt.pairs) sents.push_back(left_side ? p.left : p.right);
    return normalized_text(sents);
}

} // namespace gbw
