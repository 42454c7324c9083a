#pragma once

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

namespace nusim::detail {

// Splits into (1-based line number, line) pairs; tolerates CRLF and a
// missing final newline.
inline std::vector<std::pair<std::size_t, std::string_view>> numbered_lines(std::string_view text)
{
    std::vector<std::pair<std::size_t, std::string_view>> lines;
    std::size_t line_no = 1;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.emplace_back(line_no, line);
        if (end == text.size()) break;
        start = end + 1;
        ++line_no;
    }
    return lines;
}

inline bool blank(std::string_view line)
{
    return line.find_first_not_of(" \t") == std::string_view::npos;
}

} // namespace nusim::detail
