#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wavecast {

// Base for all library errors. Subtypes map to CLI exit codes:
// usage_error -> 64, data_error and subclasses -> 2, anything else -> 70.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad user input: malformed files, out-of-range parameters from flags.
struct data_error : error {
    using error::error;
};

// Structurally impossible request (unknown wavelet, shape mismatch).
struct usage_error : error {
    using error::error;
};

// Parse failure with location.
struct parse_error : data_error {
    parse_error(const std::string& what, std::size_t line)
        : data_error(what + " (line " + std::to_string(line) + ")"), line(line) {}
    std::size_t line;
};

// Binary format violation with byte offset.
struct format_error : data_error {
    format_error(const std::string& what, std::size_t offset)
        : data_error(what + " (offset " + std::to_string(offset) + ")"), offset(offset) {}
    std::size_t offset;
};

// Non-fatal diagnostics accumulate here when a caller passes a sink.
using WarningLog = std::vector<std::string>;

inline void warn(WarningLog* log, std::string msg) {
    if (log) log->push_back(std::move(msg));
}

}  // namespace wavecast
