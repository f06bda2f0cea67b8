#pragma once

#include <stdexcept>
#include <string>

namespace chanspec {

/// Base class for all library failures. The CLI maps each subclass to an exit code.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or invalid graph-spec input.
class ParseError : public Error {
public:
    using Error::Error;
};

/// Root-finder non-convergence, non-finite arithmetic, singular solves.
class NumericError : public Error {
public:
    using Error::Error;
};

/// A cross-check or invariant failed.
class VerificationError : public Error {
public:
    using Error::Error;
};

/// Caller violated an operation's precondition (sizes, caps, precision contexts).
class PreconditionError : public Error {
public:
    using Error::Error;
};

} // namespace chanspec
