#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace adf {

/// Base class for all recoverable errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input data errors (bad files, bad values). CLI maps these to exit code 3.
struct DataError : Error {
    using Error::Error;
};

struct TooFewPoints : DataError {
    using DataError::DataError;
};

struct NonFiniteInput : DataError {
    using DataError::DataError;
};

struct EmptyIndex : DataError {
    using DataError::DataError;
};

struct TooShort : DataError {
    using DataError::DataError;
};

struct NonMonotoneTime : DataError {
    using DataError::DataError;
};

struct EmptyInput : DataError {
    using DataError::DataError;
};

/// Parse failure with the 1-based line number of the offending record.
struct ParseError : DataError {
    ParseError(const std::string& what, std::size_t line_number)
        : DataError(what + " (line " + std::to_string(line_number) + ")"),
          line(line_number) {}
    std::size_t line;
};

/// Broken internal invariant (a bug, not bad input). CLI maps to exit code 4.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace adf
