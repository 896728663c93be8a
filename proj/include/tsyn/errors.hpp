#pragma once

#include <stdexcept>
#include <string>

namespace tsyn {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A value violates a documented domain restriction (unknown clock, unknown
// symbol, non-monotone word, ...).
struct DomainError : Error {
    using Error::Error;
};

// An operation was called on input that fails its precondition
// (nondeterministic automaton where a deterministic one is required, ...).
struct PreconditionError : Error {
    using Error::Error;
};

// Malformed concrete syntax. `position` is a 0-based offset into the input.
struct ParseError : Error {
    std::size_t position;
    ParseError(const std::string& what, std::size_t pos)
        : Error(what + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

// A configurable resource cap was exceeded. `stage` names the pipeline stage.
struct ResourceError : Error {
    std::string stage;
    std::size_t cap;
    ResourceError(std::string stage_, std::size_t cap_)
        : Error("state cap of " + std::to_string(cap_) + " exceeded in stage '" + stage_ + "'"),
          stage(std::move(stage_)),
          cap(cap_) {}
};

// An internal consistency check failed. Seeing this is a bug.
struct InternalError : Error {
    using Error::Error;
};

}  // namespace tsyn
