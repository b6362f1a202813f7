#pragma once

#include <stdexcept>
#include <string>

namespace saeos {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative numerical method failed to converge.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A polygon has fewer than three distinct vertices.
class InvalidPolygonError : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the domain of a function.
class DomainError : public Error {
public:
    using Error::Error;
};

/// The requested pointing direction cannot be realised.
class PointingError : public Error {
public:
    using Error::Error;
};

/// Malformed document; the message names the offending JSON path.
class ParseError : public Error {
public:
    using Error::Error;
};

/// An instance or solution violates its structural invariants.
class InputError : public Error {
public:
    using Error::Error;
};

/// Invalid solver configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Instance exceeds the exhaustive solver's size guard.
class GuardError : public Error {
public:
    using Error::Error;
};

/// A result failed its own consistency check.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace saeos
