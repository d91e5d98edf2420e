#pragma once

#include <stdexcept>
#include <string>

namespace cohring {

// Every failure raised by the library.  Callers that only care about
// "something is wrong with this input" can catch this one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed catalog text.  Line and column are 1-based.
class ParseError : public Error {
public:
    ParseError(std::string source, int line, int col, const std::string& what)
        : Error(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what),
          source_(std::move(source)), line_(line), col_(col)
    {
    }

    const std::string& source() const { return source_; }
    int line() const { return line_; }
    int col() const { return col_; }

private:
    std::string source_;
    int line_;
    int col_;
};

} // namespace cohring
