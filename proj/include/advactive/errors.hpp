#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace advactive {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid experiment, dataset or solver settings.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed input to an operation (dimension mismatch, non-finite values, empty sets).
class ValidationError : public Error {
public:
    using Error::Error;
};

class TrainingError : public Error {
public:
    using Error::Error;
};

class SelectionError : public Error {
public:
    using Error::Error;
};

class OracleError : public Error {
public:
    using Error::Error;
};

/// IDX decoding failure. `offset()` is the byte position where decoding stopped.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace advactive
