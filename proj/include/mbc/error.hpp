#ifndef MBC_ERROR_HPP
#define MBC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace mbc {

/// Raised for malformed or degenerate input data. The CLI maps it to exit code 1.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by CSV ingestion; carries the 1-based line and column when known.
class ParseError : public DataError {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
        : DataError(format(what, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column) {
        std::string s = "line " + std::to_string(line);
        if (column != 0) s += ", column " + std::to_string(column);
        return s + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
};

}  // namespace mbc

#endif  // MBC_ERROR_HPP
