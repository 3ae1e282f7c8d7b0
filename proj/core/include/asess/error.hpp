#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asess {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed concrete syntax. Carries a 1-based source position.
class ParseError : public Error {
public:
    ParseError(std::string file, std::size_t line, std::size_t col, const std::string& msg);

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return col_; }
    const std::string& bare_message() const noexcept { return bare_; }

private:
    std::string file_;
    std::size_t line_;
    std::size_t col_;
    std::string bare_;
};

// Dangling names, unguarded recursion, duplicate labels in a compiled term.
class DefinitionError : public Error {
public:
    using Error::Error;
};

class NotEnabled : public Error {
public:
    NotEnabled(const std::string& comm, std::size_t index);
    /// 1-based position of the offending communication in the trace.
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class CapExceeded : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

// Raised when a property the rules guarantee is observed to fail.
class InternalDiagnostic : public Error {
public:
    using Error::Error;
};

} // namespace asess
