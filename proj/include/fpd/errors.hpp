#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace fpd {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Precondition violations: bad dimensions, malformed kernels, out-of-range parameters.
struct InvalidInput : Error {
    using Error::Error;
};

// Segmentation found no foreground, or no candidate block survives masking.
struct NoForeground : Error {
    using Error::Error;
};

// Complex filter order outside {+1, -1}.
struct UnsupportedOrder : Error {
    using Error::Error;
};

// All four axis counts are zero (core pixel sits on background).
struct DegenerateCore : Error {
    using Error::Error;
};

// Evaluation invoked with no samples.
struct EmptyDataset : Error {
    using Error::Error;
};

// File/decode problems.
struct IoError : Error {
    using Error::Error;
};

// Label ingestion: collects every offending row/file instead of stopping at the first.
struct IngestionError : Error {
    std::vector<std::string> offenders;
    IngestionError(const std::string& msg, std::vector<std::string> off)
        : Error(msg), offenders(std::move(off)) {}
};

}  // namespace fpd
