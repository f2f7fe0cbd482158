#include "gbw/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace gbw {

namespace {

// Base-n syllable spellings keep the text pronounceable-ish and strictly
// lowercase ASCII, so tokenization is the identity on them.
std::string spell(uint32_t id, const char* cons, size_t nc, const char* vow, size_t nv) {
    std::string out;
    uint32_t v = id;
    do {
        uint32_t digit = v % (nc * nv);
        v /= static_cast<uint32_t>(nc * nv);
        out += cons[digit % nc];
        out += vow[digit / nc];
    } while (v > 0);
    return out;
}

class Zipf {
public:
    Zipf(uint32_t n, double s) : cum_(n) {
        double total = 0;
        for (uint32_t k = 0; k < n; ++k) {
            total += 1.0 / std::pow(double(k + 1), s);
            cum_[k] = total;
        }
        for (double& c : cum_) c /= total;
    }
    uint32_t operator()(std::mt19937_64& rng) const {
        double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        return static_cast<uint32_t>(std::lower_bound(cum_.begin(), cum_.end(), u) -
                                     cum_.begin());
    }

private:
    std::vector<double> cum_;
};

std::string pharaoh(const std::vector<std::pair<uint32_t, uint32_t>>& pairs) {
    std::string line;
    for (auto [a, b] : pairs) {
        if (!line.empty()) line += ' ';
        line += std::to_string(a);
        line += '-';
        line += std::to_string(b);
    }
    return line;
}

} // namespace

std::string synth_left_word(uint32_t id) {
    return spell(id, "bcdfgklmnprstvz", 15, "aeiou", 5);
}

std::string synth_right_word(uint32_t id) {
    return spell(id, "dhjklmnqrstwxyz", 15, "aeiou", 5) + "u";
}

SynthCorpus make_corpus(const SynthSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    Zipf zipf(spec.left_vocab, spec.zipf_s);
    const uint32_t right_vocab = spec.left_vocab * 3 + 7;

    SynthCorpus out;
    out.bitext.pairs.reserve(spec.sentences);
    out.bitext_11.pairs.reserve(spec.sentences);

    for (uint64_t s = 0; s < spec.sentences; ++s) {
        uint32_t nl = spec.min_len +
                      static_cast<uint32_t>(rng() % (spec.max_len - spec.min_len + 1));
        SentencePair pair;
        pair.left.reserve(nl);

        // Right side as tagged items: tag = 1-based left partner, 0 = none.
        std::vector<std::pair<uint32_t, uint32_t>> items; // (tag, right word id)
        for (uint32_t i = 1; i <= nl; ++i) {
            uint32_t lid = zipf(rng);
            pair.left.push_back(synth_left_word(lid));
            double f = coin(rng);
            uint32_t fert = 1;
            if (f < spec.fert0)
                fert = 0;
            else if (f < spec.fert0 + spec.fert2)
                fert = 2;
            else if (f < spec.fert0 + spec.fert2 + spec.fert3)
                fert = 3;
            for (uint32_t slot = 0; slot < fert; ++slot) {
                uint32_t rid = (lid * 3 + slot) % right_vocab;
                if (coin(rng) < spec.variant) rid = (rid + 1 + lid % 5) % right_vocab;
                items.push_back({i, rid});
            }
            if (coin(rng) < spec.insert_right)
                items.push_back({0, (zipf(rng) * 7 + 5) % right_vocab});
        }

        size_t swaps = static_cast<size_t>(std::llround(spec.swap_rate * items.size()));
        for (size_t t = 0; t < swaps && items.size() > 1; ++t) {
            size_t at = rng() % (items.size() - 1);
            std::swap(items[at], items[at + 1]);
        }

        std::vector<std::pair<uint32_t, uint32_t>> fwd; // 0-based (left, right)
        for (uint32_t j = 0; j < items.size(); ++j) {
            pair.right.push_back(synth_right_word(items[j].second));
            if (items[j].first > 0) {
                pair.links.push_back({items[j].first, j + 1});
                fwd.push_back({items[j].first - 1, j});
            }
        }
        std::sort(pair.links.begin(), pair.links.end());
        std::sort(fwd.begin(), fwd.end());

        // Reverse direction: at most one right partner per left word, mostly
        // confirming the forward link with the smallest right position.
        std::vector<std::pair<uint32_t, uint32_t>> rev; // 0-based (right, left)
        std::vector<Link> both;
        for (size_t k = 0; k < pair.links.size(); ++k) {
            if (k > 0 && pair.links[k].i == pair.links[k - 1].i) continue;
            const Link& ln = pair.links[k];
            double r = coin(rng);
            if (r < spec.reverse_keep) {
                rev.push_back({ln.j - 1, ln.i - 1});
                both.push_back(ln);
            } else if (r < spec.reverse_keep + spec.reverse_noise && !pair.right.empty()) {
                uint32_t j2 = static_cast<uint32_t>(rng() % pair.right.size());
                rev.push_back({j2, ln.i - 1});
                if (std::binary_search(pair.links.begin(), pair.links.end(),
                                       Link{ln.i, j2 + 1}))
                    both.push_back({ln.i, j2 + 1});
            }
        }
        std::sort(rev.begin(), rev.end());
        std::sort(both.begin(), both.end());

        SentencePair pair11;
        pair11.left = pair.left;
        pair11.right = pair.right;
        pair11.links = std::move(both);

        std::string lline, rline;
        for (size_t k = 0; k < pair.left.size(); ++k) {
            if (k) lline += ' ';
            lline += pair.left[k];
        }
        for (size_t k = 0; k < pair.right.size(); ++k) {
            if (k) rline += ' ';
            rline += pair.right[k];
        }
        out.left_lines.push_back(std::move(lline));
        out.right_lines.push_back(std::move(rline));
        out.align_lines.push_back(pharaoh(fwd));
        out.reverse_lines.push_back(pharaoh(rev));
        out.bitext.pairs.push_back(std::move(pair));
        out.bitext_11.pairs.push_back(std::move(pair11));
    }
    return out;
}

} // namespace gbw
