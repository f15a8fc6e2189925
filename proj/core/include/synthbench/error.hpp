#pragma once

#include <stdexcept>
#include <string>

namespace synthbench {

// Base of all toolkit errors. CLI maps ConfigError to exit code 2 and
// DataError (including ParseError) to exit code 3.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid settings: bad flags, malformed config keys, unknown enum tags.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// Invalid or inconsistent input data.
class DataError : public Error {
public:
    explicit DataError(const std::string& msg) : Error(msg) {}
};

// Malformed input file content; carries the 1-based line number.
class ParseError : public DataError {
public:
    ParseError(const std::string& msg, std::size_t line)
        : DataError(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

}  // namespace synthbench
