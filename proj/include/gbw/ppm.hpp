#pragma once

#include <cstdint>
#include <span>

#include "gbw/bytes.hpp"

namespace gbw {

// Adaptive order-3 byte-level PPM with method-D escapes (no exclusion,
// order -1 uniform fallback) over a 32-bit range coder. Used for the textual
// header material of archives: dictionaries and code-length tables. The
// uncompressed length is carried in the stream, so decompression needs no
// external framing.
Bytes ppm_compress(std::span<const uint8_t> data);
Bytes ppm_decompress(std::span<const uint8_t> data);

} // namespace gbw
