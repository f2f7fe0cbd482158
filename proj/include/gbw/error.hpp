#pragma once

#include <stdexcept>
#include <string>

namespace gbw {

// Base class for everything thrown by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input data: bad UTF-8, bad alignment syntax, indices out of
// bounds, line-count mismatches. Carries file/line context in the message.
class ParseError : public Error {
public:
    using Error::Error;
};

// Structurally invalid in-memory data: scheme violations (e.g. a 1:N biword
// fed to a 1:1-only transform), sequences that cannot be restored (position
// collisions, holes), inconsistent stream shapes.
class DataError : public Error {
public:
    using Error::Error;
};

// Damaged or truncated archive bytes.
class CorruptArchiveError : public Error {
public:
    using Error::Error;
};

// Filesystem failures (missing file, short write).
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace gbw
