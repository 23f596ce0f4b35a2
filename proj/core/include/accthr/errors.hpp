#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace accthr {

// Malformed text input (netlists, instance files, matrices).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Structurally valid input that violates an invariant (dangling wire, bad arity, ...).
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A configured size or magnitude cap was exceeded; callers may fall back to the oracle.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The circuit does not have a layer structure the requested path can handle.
class ShapeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace accthr
