#pragma once

#include <stdexcept>
#include <string>

namespace ks {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain an operation is defined on.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Two-step descent was asked to move away from the equator.
class DescentAwayFromEquator : public DomainError {
public:
    using DomainError::DomainError;
};

class NotOrthogonal : public Error {
public:
    using Error::Error;
};

class NotABasis : public Error {
public:
    using Error::Error;
};

/// The zero set handed to the dimension reduction is not orthonormal or
/// some member does not evaluate to 0.
class ZeroSetInvalid : public Error {
public:
    using Error::Error;
};

class PreconditionFailed : public Error {
public:
    using Error::Error;
};

class DuplicateRay : public Error {
public:
    using Error::Error;
};

/// Malformed or schema-violating input document.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A file could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace ks
