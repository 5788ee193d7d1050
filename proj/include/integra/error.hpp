#pragma once

#include <stdexcept>
#include <string>

namespace integra {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An argument refers to an unknown agent, a mismatched side, or an
/// otherwise malformed input.
struct InvalidArgument : Error {
    using Error::Error;
};

/// An instance exceeds the configured bound of a brute-force routine.
struct SizeLimitError : Error {
    using Error::Error;
};

/// An operation that requires every agent to be matched met a self-matched
/// agent (rank statistics are undefined for unmatched agents).
struct UnmatchedAgentError : Error {
    using Error::Error;
};

/// A closed-form expression was evaluated outside its domain.
struct DomainError : Error {
    using Error::Error;
};

/// A market or record file could not be parsed.
struct ParseError : Error {
    using Error::Error;
};

} // namespace integra
