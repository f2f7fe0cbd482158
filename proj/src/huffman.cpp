#include "gbw/huffman.hpp"

#include <algorithm>
#include <queue>

#include "gbw/error.hpp"

namespace gbw {

HuffmanCode HuffmanCode::build(const std::vector<uint64_t>& freqs) {
    struct Node {
        uint64_t weight;
        uint32_t order; // tie-break: creation order (leaves first, by symbol)
        int32_t left, right;
        uint32_t symbol;
    };
    std::vector<Node> nodes;
    nodes.reserve(freqs.size() * 2);
    for (uint32_t s = 0; s < freqs.size(); ++s)
        if (freqs[s] > 0)
            nodes.push_back({freqs[s], static_cast<uint32_t>(nodes.size()), -1, -1, s});
    if (nodes.empty()) throw DataError("cannot build a code over an empty alphabet");

    HuffmanCode hc;
    hc.lengths_.assign(freqs.size(), 0);
    if (nodes.size() == 1) {
        hc.lengths_[nodes[0].symbol] = 1;
        hc.finish();
        return hc;
    }

    auto cmp = [&](int32_t a, int32_t b) {
        if (nodes[a].weight != nodes[b].weight) return nodes[a].weight > nodes[b].weight;
        return nodes[a].order > nodes[b].order;
    };
    std::priority_queue<int32_t, std::vector<int32_t>, decltype(cmp)> heap(cmp);
    for (int32_t k = 0; k < static_cast<int32_t>(nodes.size()); ++k) heap.push(k);
    while (heap.size() > 1) {
        int32_t a = heap.top();
        heap.pop();
        int32_t b = heap.top();
        heap.pop();
        nodes.push_back({nodes[a].weight + nodes[b].weight, static_cast<uint32_t>(nodes.size()),
                         a, b, 0});
        heap.push(static_cast<int32_t>(nodes.size()) - 1);
    }

    // Depth-first walk assigns depths to leaves.
    std::vector<std::pair<int32_t, uint8_t>> stack{{heap.top(), 0}};
    while (!stack.empty()) {
        auto [id, depth] = stack.back();
        stack.pop_back();
        const Node& nd = nodes[id];
        if (nd.left < 0) {
            hc.lengths_[nd.symbol] = depth;
        } else {
            if (depth >= 63) throw DataError("code length overflow");
            stack.push_back({nd.left, static_cast<uint8_t>(depth + 1)});
            stack.push_back({nd.right, static_cast<uint8_t>(depth + 1)});
        }
    }
    hc.finish();
    return hc;
}

HuffmanCode HuffmanCode::from_lengths(std::vector<uint8_t> lengths) {
    HuffmanCode hc;
    hc.lengths_ = std::move(lengths);
    hc.finish();
    return hc;
}

void HuffmanCode::finish() {
    max_len_ = 0;
    for (uint8_t l : lengths_) max_len_ = std::max<unsigned>(max_len_, l);
    if (max_len_ > 63) throw CorruptArchiveError("unreasonable code length");

    sorted_.clear();
    for (uint32_t s = 0; s < lengths_.size(); ++s)
        if (lengths_[s]) sorted_.push_back(s);
    std::stable_sort(sorted_.begin(), sorted_.end(), [&](uint32_t a, uint32_t b) {
        return lengths_[a] != lengths_[b] ? lengths_[a] < lengths_[b] : a < b;
    });
    if (sorted_.empty()) throw CorruptArchiveError("code with no symbols");

    count_.assign(max_len_ + 1, 0);
    for (uint32_t s : sorted_) ++count_[lengths_[s]];
    first_code_.assign(max_len_ + 1, 0);
    first_index_.assign(max_len_ + 1, 0);
    uint64_t code = 0;
    uint32_t index = 0;
    for (unsigned len = 1; len <= max_len_; ++len) {
        first_code_[len] = code;
        first_index_[len] = index;
        code += count_[len];
        index += count_[len];
        if (code > (uint64_t{1} << len))
            throw CorruptArchiveError("length table violates prefix property");
        code <<= 1;
    }

    codes_.assign(lengths_.size(), 0);
    std::vector<uint64_t> next = first_code_;
    for (uint32_t s : sorted_) codes_[s] = next[lengths_[s]]++;
}

void HuffmanCode::encode(uint32_t symbol, BitWriter& out) const {
    if (symbol >= lengths_.size() || lengths_[symbol] == 0)
        throw DataError("symbol " + std::to_string(symbol) + " has no codeword");
    out.put(codes_[symbol], lengths_[symbol]);
}

uint32_t HuffmanCode::decode(BitReader& in) const {
    uint64_t v = 0;
    for (unsigned len = 1; len <= max_len_; ++len) {
        v = (v << 1) | in.bit();
        if (count_[len] && v - first_code_[len] < count_[len])
            return sorted_[first_index_[len] + (v - first_code_[len])];
    }
    throw CorruptArchiveError("invalid codeword");
}

} // namespace gbw
