#pragma once

#include <stdexcept>
#include <string>

namespace panoblock {

// Error taxonomy mirrors the CLI exit codes:
//   ArgumentError -> 2, DataError/IoError -> 3, NumericalError -> 4.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameters or configuration, caught before any work starts.
class ArgumentError : public Error {
public:
    using Error::Error;
};

// Malformed, inconsistent, or missing input data.
class DataError : public Error {
public:
    using Error::Error;
};

class IoError : public DataError {
public:
    using DataError::DataError;
};

// Degenerate numerics: singular systems, failed registration, non-finite updates.
class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace panoblock
