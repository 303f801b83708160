#pragma once

#include <stdexcept>
#include <string>

namespace droidtriage {

/// Raised for malformed inputs (catalogs, datasets, model files) and for
/// data that cannot satisfy an operation's preconditions.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Error tied to a location in a text input.
class ParseError : public Error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace droidtriage
