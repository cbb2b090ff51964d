#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stlshield {

enum class ErrorCode {
    Parse,
    Interval,
    Stratification,
    UnsupportedShape,
    ShortTrajectory,
    MissingSignal,
    Argument,
    Config,
    Io,
    Infeasible,
    Runtime,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, std::string message)
        : std::runtime_error(std::move(message)), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

// Parse-family errors carry a byte offset into the source text.
class ParseError : public Error {
public:
    ParseError(ErrorCode code, std::size_t pos, const std::string& message)
        : Error(code, message + " (at position " + std::to_string(pos) + ")"), pos_(pos) {}
    std::size_t pos() const { return pos_; }

private:
    std::size_t pos_;
};

}  // namespace stlshield
