#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace osynt {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Syntax or semantic error in an input file. Positions are 1-based;
/// 0 means "not tied to a specific location".
struct ParseError : Error {
    ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
        : Error(decorate(what, line, column)), line(line), column(column) {}

    std::size_t line;
    std::size_t column;

private:
    static std::string decorate(const std::string& what, std::size_t line, std::size_t column) {
        if (line == 0)
            return what;
        std::string s = "line " + std::to_string(line);
        if (column != 0)
            s += ", column " + std::to_string(column);
        return s + ": " + what;
    }
};

/// Acceptance conditions outside the supported parity/Buchi/co-Buchi set.
struct UnsupportedAcceptanceError : ParseError {
    using ParseError::ParseError;
};

/// An explicit-state construction would exceed its hard size cap.
struct CapExceededError : Error {
    using Error::Error;
};

/// Controller extraction was requested for an instance the environment wins.
struct UnrealizableError : Error {
    using Error::Error;
};

}  // namespace osynt
