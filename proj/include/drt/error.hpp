#pragma once

#include <stdexcept>
#include <string>

namespace drt {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent input data (CSV rows, series invariants).
class DataError : public Error {
public:
    using Error::Error;
};

/// Violated precondition on an argument.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Numerical failure: singular system, non-finite values, repair failure.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Configuration / schema violation. `path()` names the offending field.
class ConfigError : public Error {
public:
    ConfigError(std::string path, const std::string& what)
        : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// File could not be opened or written.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace drt
