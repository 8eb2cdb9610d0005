#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace aeriq {

// Base for every error the library throws. Data-dependent failures derive
// from DataError so callers (the CLI in particular) can map them to one exit
// code; DomainError and LengthError flag caller contract violations.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DataError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class LengthError : public Error {
public:
    using Error::Error;
};

class ParseError : public DataError {
public:
    ParseError(const std::string& what, std::size_t byte_offset)
        : DataError(what + " (at byte " + std::to_string(byte_offset) + ")"),
          byte_offset_(byte_offset) {}

    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

class UnsupportedFormatError : public DataError {
public:
    using DataError::DataError;
};

class TruncationError : public DataError {
public:
    TruncationError(const std::string& what, std::size_t capture_index)
        : DataError(what), capture_index_(capture_index) {}

    std::size_t capture_index() const noexcept { return capture_index_; }

private:
    std::size_t capture_index_;
};

class InconsistencyError : public DataError {
public:
    using DataError::DataError;
};

class SchemaError : public DataError {
public:
    using DataError::DataError;
};

class OrderingError : public DataError {
public:
    OrderingError(const std::string& what, std::size_t row)
        : DataError(what), row_(row) {}

    // 1-based data row (header excluded).
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class OutOfRangeError : public DataError {
public:
    using DataError::DataError;
};

class FusionError : public DataError {
public:
    using DataError::DataError;
};

class FitError : public DataError {
public:
    using DataError::DataError;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace aeriq
