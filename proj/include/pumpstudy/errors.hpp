#pragma once

#include <stdexcept>
#include <string>

namespace pumpstudy {

/// Base class for all pipeline errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input file content. Carries the 1-based line number when known.
struct ParseError : Error {
    explicit ParseError(const std::string& msg, long line = 0)
        : Error(line > 0 ? msg + " (line " + std::to_string(line) + ")" : msg), line_number(line) {}
    long line_number;
};

/// A requested window or span falls outside the available data grid.
struct RangeError : Error {
    using Error::Error;
};

/// Data is present but unusable (all gaps, insufficient coverage, too few rows).
struct DataError : Error {
    using Error::Error;
};

/// Store-level consistency violation (duplicate ids and the like).
struct IntegrityError : Error {
    using Error::Error;
};

/// A regressor or design matrix is degenerate (zero variance, rank deficient).
struct DegenerateError : Error {
    using Error::Error;
};

/// Filesystem write/read failure.
struct IoError : Error {
    using Error::Error;
};

}  // namespace pumpstudy
