#pragma once

// Shared pieces of the archive encoders: the container framing, the
// first-occurrence dictionary model, and the stream helpers. Internal to
// src/.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "gbw/archive.hpp"
#include "gbw/bytes.hpp"
#include "gbw/huffman.hpp"

namespace gbw::detail {

constexpr char kMagic[4] = {'G', 'B', 'W', '1'};
constexpr uint8_t kVersion = 1;

// Section ids. Unknown ids are rejected on read.
enum SectionId : uint8_t {
    kSecSigmaL = 1,
    kSecSigmaR = 2,
    kSecDict = 3, // translation lists (TRE) or the biword dictionary
    kSecB = 4,
    kSecP = 5,
    kSecO = 6,
    kSecQ = 7,
    kSecTables = 8,
};

struct Header {
    Method method;
    Scheme scheme;
    uint8_t dac_width;
    uint8_t flags; // bit 0: Q section present
    uint64_t sentence_count;
    uint64_t input_bytes;
};

struct Section {
    uint8_t id;
    Bytes payload;
};

Bytes assemble_archive(const Header& h, const std::vector<Section>& sections);

struct ParsedArchive {
    Header header;
    std::map<uint8_t, std::span<const uint8_t>> sections;

    std::span<const uint8_t> need(uint8_t id) const;
};

ParsedArchive parse_archive(std::span<const uint8_t> archive);

// --- Dictionary model -----------------------------------------------------

// Model-order dictionaries of a biword stream. Fixed entries: sentence
// separators at index 0, the empty word/sequence at index 1, then first
// occurrence. The biword dictionary keys on (left id, right id); offsets
// live in the shift streams, not here.
struct CorpusModel {
    std::vector<std::string> sigma_l;
    std::vector<std::string> sigma_r_joined; // rho tokens space-joined
    std::vector<std::vector<Token>> sigma_r;
    std::vector<std::pair<uint32_t, uint32_t>> sigma_b;
    std::vector<uint32_t> b_ids;     // stream position -> sigma_b id (EOS = 0)
    std::vector<uint64_t> b_counts;  // sigma_b id -> occurrences in the stream
};

CorpusModel build_model(const BiwordSequence& seq);

// PPM-wrapped entry list: u64 count + entries joined by 0x00.
Bytes serialize_entries(const std::vector<std::string>& entries);
std::vector<std::string> parse_entries(std::span<const uint8_t> payload);

std::vector<Token> split_tokens(const std::string& joined);

// --- Huffman plumbing -----------------------------------------------------

// Frequency count over a symbol sequence, alphabet sized to the max symbol.
std::vector<uint64_t> tally(std::span<const uint32_t> symbols);

// [u64 n][u64 bytes][bit stream]; a null code is only legal for an empty
// sequence.
void write_symbol_stream(ByteWriter& out, const HuffmanCode* code,
                         std::span<const uint32_t> symbols);
std::vector<uint32_t> read_symbol_stream(ByteReader& in, const HuffmanCode* code);

// Code-length tables, concatenated [u64 V][V length bytes] per table and
// PPM-compressed; V = 0 marks an absent table (empty stream).
Bytes serialize_tables(const std::vector<const HuffmanCode*>& tables);
std::vector<std::optional<HuffmanCode>> parse_tables(std::span<const uint8_t> payload,
                                                     size_t expect);

// Unbounded values under a bounded code: values below 256 are their own
// symbol; larger ones use symbol 256+(bitwidth-9) followed by the value's
// low bitwidth-1 bits raw.
constexpr uint32_t kEscapeBase = 256;
uint32_t escape_symbol(uint64_t value);
std::vector<uint64_t> escape_tally(std::span<const uint64_t> values);
void write_escaped_stream(ByteWriter& out, const HuffmanCode* code,
                          std::span<const uint64_t> values);
std::vector<uint64_t> read_escaped_stream(ByteReader& in, const HuffmanCode* code);

// --- Method encoders ------------------------------------------------------

Bytes compress_wh(const BiwordSequence& seq, const Header& h);
RestoredCorpus decompress_wh(const ParsedArchive& ar);

Bytes compress_tre(const BiwordSequence& seq, const Header& h);
BiwordSequence decode_tre(const ParsedArchive& ar);

Bytes compress_l2(const BiwordSequence& seq, const Header& h);
BiwordSequence decode_l2(const ParsedArchive& ar);

Bytes compress_s2l(const BiwordSequence& seq, Header h); // sets the Q flag
BiwordSequence decode_s2l(const ParsedArchive& ar);

// Rebuilds a biword stream from per-position dictionary entries and shapes.
BiwordSequence
assemble_sequence(const std::vector<uint32_t>& b_ids,
                  const std::vector<std::pair<uint32_t, uint32_t>>& sigma_b,
                  const std::vector<std::string>& sigma_l,
                  const std::vector<std::vector<Token>>& sigma_r,
                  const std::vector<std::vector<uint32_t>>& omegas, uint64_t sentence_count);

} // namespace gbw::detail
