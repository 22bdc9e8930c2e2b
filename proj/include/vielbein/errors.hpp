#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vielbein {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Incompatible tensor shapes or index variance in a contraction.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Malformed expression text. `offset()` is the byte offset of the problem.
class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset)
        : Error(message + " (at byte " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Expression evaluation left the domain of a function, or a parameter was missing.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// A frame (or metric, or Jacobian) matrix is singular at the evaluated point.
class DegenerateFrameError : public Error {
public:
    using Error::Error;
};

/// A computation needs derivative data the input does not carry.
class MissingDerivativesError : public Error {
public:
    using Error::Error;
};

/// A job description is malformed or asks for something the solution cannot provide.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace vielbein
