#pragma once

#include <stdexcept>
#include <string>

namespace liouville {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operands built over different frames were combined.
class FrameMismatch : public Error {
public:
    using Error::Error;
};

/// An argument lies outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A form that must be closed is not.
class NotClosed : public Error {
public:
    using Error::Error;
};

/// A Lie algebra presentation fails d^2 = 0 or carries a bad symplectic form.
class InvalidPresentation : public Error {
public:
    using Error::Error;
};

/// Malformed input file. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
public:
    ParseError(std::string file, int line, int column, const std::string& what)
        : Error(format(file, line, column, what)),
          file_(std::move(file)), line_(line), column_(column) {}

    const std::string& file() const noexcept { return file_; }
    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string format(const std::string& file, int line, int column,
                              const std::string& what) {
        std::string out = file;
        if (line > 0) {
            out += ":" + std::to_string(line);
            if (column > 0) out += ":" + std::to_string(column);
        }
        return out + ": " + what;
    }

    std::string file_;
    int line_;
    int column_;
};

} // namespace liouville
