#pragma once

#include <stdexcept>
#include <string>

namespace chirp {

/// Base for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration or precondition violation on user input.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A numerical guard tripped: norm drift, basis truncation, grid mass,
/// quadrature failure, non-monotone bracket.
class NumericalGuardError : public Error {
public:
    NumericalGuardError(std::string guard, const std::string& what)
        : Error(guard + ": " + what), guard_(std::move(guard)) {}

    const std::string& guard() const noexcept { return guard_; }

private:
    std::string guard_;
};

}  // namespace chirp
