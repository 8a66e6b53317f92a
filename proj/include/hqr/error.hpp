#pragma once

#include <stdexcept>
#include <string>

namespace hqr {

// Base for all library errors. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad input: unknown keys, units, malformed files, invalid parameters.
class ConfigError : public Error {
public:
    using Error::Error;
};

// A numerical contract was violated (truncation leakage, non-Hermitian input,
// diagonalization failure, conservation drift).
class NumericalError : public Error {
public:
    using Error::Error;
};

class TruncationError : public NumericalError {
public:
    TruncationError(const std::string& what, int suggested_size)
        : NumericalError(what), suggested_size_(suggested_size) {}
    int suggested_size() const noexcept { return suggested_size_; }

private:
    int suggested_size_;
};

class NoCrossingError : public Error {
public:
    using Error::Error;
};

}  // namespace hqr
