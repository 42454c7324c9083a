#pragma once

#include <stdexcept>
#include <string>

namespace nusim {

// Error in textual input (.aut documents, formulae, declaration files).
// `line` is 1-based; `column` is 1-based where known, 0 otherwise.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column = 0)
        : std::runtime_error("line " + std::to_string(line) +
                             (column ? ", col " + std::to_string(column) : std::string()) +
                             ": " + message),
          line_(line), column_(column)
    {
    }

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

} // namespace nusim
