#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gbw/biword.hpp"
#include "gbw/bytes.hpp"

namespace gbw {

enum class Method : uint8_t {
    kWordHuffman = 0, // token-level Huffman baseline, alignment ignored
    kTre = 1,         // word dictionaries + per-word ranked translation lists
    kTwoLevel = 2,    // biword dictionary over word dictionaries, all Huffman
    kSearchable = 3,  // two-level layout re-coded for in-place search
};

const char* method_name(Method m);
const char* scheme_name(Scheme s);
std::optional<Method> method_from_name(const std::string& name);
std::optional<Scheme> scheme_from_name(const std::string& name);

// --- Shift-position streams ----------------------------------------------

// The side information that turns a biword list back into exact word order:
// positions of the biwords with shifts (gap-encoded, first absolute,
// 1-based) and their concatenated offset arrays.
struct StructuralStreams {
    std::vector<uint64_t> p_deltas;
    std::vector<uint32_t> o_values;
};

StructuralStreams encode_structural(std::span<const GeneralizedBiword> biwords);

// Inverse: per-biword offset arrays for biwords of the given rho sizes.
// Throws CorruptArchiveError when the streams do not fit the shapes.
std::vector<std::vector<uint32_t>> decode_structural(const StructuralStreams& st,
                                                     const std::vector<uint32_t>& rho_sizes);

// --- Archives -------------------------------------------------------------

// Serializes a corpus with the chosen method. `input_bytes` (the size of the
// normalized source text, both sides) rides along for ratio reporting.
// Output is byte-deterministic for identical inputs.
Bytes compress_corpus(const BiwordSequence& seq, Method method, Scheme scheme,
                      uint64_t input_bytes, unsigned dac_width = 4);

// Decodes any archive back to the normalized sentence texts.
RestoredCorpus decompress_corpus(std::span<const uint8_t> archive);

struct SectionInfo {
    uint8_t id;
    uint64_t bytes;
};

struct ArchiveInfo {
    Method method;
    Scheme scheme;
    unsigned dac_width;
    bool has_q;
    uint64_t sentence_count;
    uint64_t input_bytes;
    uint64_t total_bytes;
    std::vector<SectionInfo> sections;

    uint64_t b_stream_bytes() const;  // encoded biword/token stream payload
    uint64_t dictionary_bytes() const; // word/translation dictionary payloads
};

// Validates framing and returns the header/section layout without decoding
// payloads.
ArchiveInfo inspect_archive(std::span<const uint8_t> archive);

// output bytes / input bytes, both > 0.
double compression_ratio(uint64_t input_bytes, uint64_t output_bytes);

// --- Corpus measurements --------------------------------------------------

struct CorpusStats {
    uint64_t sentences = 0;
    uint64_t biwords = 0;          // EOS markers excluded
    uint64_t distinct_biwords = 0; // full (sigma, rho, omega) identity
    uint64_t unpaired = 0;         // sigma or rho empty
    uint64_t no_shift = 0;
    uint64_t simple_shift = 0;
    uint64_t complex_shift = 0;
};

CorpusStats corpus_stats(const BiwordSequence& seq);

// --- Files ----------------------------------------------------------------

Bytes read_file(const std::string& path);
void write_file(const std::string& path, std::span<const uint8_t> data);

} // namespace gbw
