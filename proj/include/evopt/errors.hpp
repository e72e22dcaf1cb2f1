#pragma once

#include <stdexcept>
#include <string>

namespace evopt {

/// A domain object violates one of its invariants.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the validity range of a formula.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inconsistent or incomplete configuration (files, ranges, flags).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The requested problem has no feasible solution.
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Failure while parsing an input file; carries file name and line number.
class ParseError : public ConfigError {
public:
    ParseError(const std::string& file, int line, const std::string& what)
        : ConfigError(file + ":" + std::to_string(line) + ": " + what),
          file_(file), line_(line) {}

    [[nodiscard]] const std::string& file() const { return file_; }
    [[nodiscard]] int line() const { return line_; }

private:
    std::string file_;
    int line_;
};

}  // namespace evopt
