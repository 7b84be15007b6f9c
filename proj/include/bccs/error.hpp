#pragma once

#include <stdexcept>
#include <string>

namespace bccs {

/// Base class for all errors raised by the workbench.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (terms, statements, axiom files, derivation files).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Alphabet violations: unknown action, name clash, finite/countable mode mismatch.
class AlphabetError : public Error {
public:
    using Error::Error;
};

/// A derivation failed to check.
class ProofError : public Error {
public:
    using Error::Error;
};

/// Precondition violations of an operation (open term where a closed one is needed, ...).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Raised when two independent routes disagree. Always an implementation bug.
class InternalInconsistency : public Error {
public:
    using Error::Error;
};

} // namespace bccs
