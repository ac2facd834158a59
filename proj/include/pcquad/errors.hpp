#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pcquad {

// Base of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Caller violated a precondition (arity mismatch, bad index, off-surface point...).
class UsageError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t position)
        : Error(what + " (at position " + std::to_string(position) + ")"), position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

// A zero gradient where a tangent plane is required.
class SingularPoint : public Error {
public:
    using Error::Error;
};

// The surface/spacing combination has no well-defined boundary conic
// (singular elimination system, vanishing contact surface, empty locus).
class DegenerateError : public Error {
public:
    using Error::Error;
};

// Numerator cleanup left a polynomial of degree > 2.
class CleanupFailure : public Error {
public:
    using Error::Error;
};

} // namespace pcquad
