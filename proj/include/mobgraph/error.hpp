#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mobgraph {

/// Coarse error classes. The CLI maps each one to a distinct exit code.
enum class ErrorCategory {
    Input = 2,      // unreadable or malformed input data
    Config = 3,     // bad parameters or configuration
    Domain = 4,     // precondition violated by otherwise valid data
    Numeric = 5,    // iterative method failed to converge
    Io = 6,         // filesystem errors on output
};

inline std::string_view category_name(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::Input: return "input";
        case ErrorCategory::Config: return "config";
        case ErrorCategory::Domain: return "domain";
        case ErrorCategory::Numeric: return "numeric";
        case ErrorCategory::Io: return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

/// Raised by the strict parsers; carries the 1-based line number of the bad row.
class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error(ErrorCategory::Input, "line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace mobgraph
