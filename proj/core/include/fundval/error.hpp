#pragma once

#include <stdexcept>
#include <string>

namespace fundval {

/// Invalid argument to a numerical routine (shape mismatch, bad scale, ...).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed image or embedding file contents.
class DecodeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Well-formed input that this library intentionally does not handle
/// (16-bit PNG, palette images, ...).
class UnsupportedFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration document problems: missing or unknown keys, bad values.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File system / IO failure.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace fundval
