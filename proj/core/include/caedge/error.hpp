#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace caedge {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidDimensionError : public Error {
public:
    using Error::Error;
};

/// Index outside the grid plus its one-cell ghost ring.
class OutOfRangeError : public Error {
public:
    using Error::Error;
};

/// Operands whose dimensions disagree.
class ShapeError : public Error {
public:
    using Error::Error;
};

class InvalidRuleError : public Error {
public:
    using Error::Error;
};

/// Caller-side misuse: incompatible format/payload, empty rule list, bad parameters.
class UsageError : public Error {
public:
    using Error::Error;
};

/// Malformed textual or PNM input. `offset()` is the byte (or line, for grid
/// fixtures) position at which parsing stopped.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

}  // namespace caedge
