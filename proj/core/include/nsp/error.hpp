#pragma once

#include <stdexcept>
#include <string>

namespace nsp {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid input to a numerical routine (bad shapes, out-of-range parameters).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A numerical procedure failed (singular pivot, Newton divergence, blow-up).
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// A configuration file or option could not be accepted.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace nsp
