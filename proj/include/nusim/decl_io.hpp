#pragma once

#include <cctype>
#include <charconv>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nusim/declarations.hpp"
#include "nusim/detail/text.hpp"
#include "nusim/errors.hpp"
#include "nusim/formula.hpp"
#include "nusim/formula_parser.hpp"

// Declaration file format:
//
//   target-level: <n>          (optional header)
//   level 0:
//   X0 = <formula> ;
//   X1 = <formula> ;
//   level 1:
//   ...
//
// Levels appear in order 0..N-1; each level binds every index 0..k-1
// exactly once, with the same k across levels. A formula may span lines;
// ';' terminates it. Blank lines are ignored.

namespace nusim {

struct DeclarationFile {
    NestedSystem system;
    std::optional<int> target_level;
};

namespace detail {

inline std::optional<std::size_t> parse_number(std::string_view text)
{
    std::size_t value = 0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || text.size() > 9) return std::nullopt;
    return value;
}

inline std::string_view strip(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace detail

inline DeclarationFile parse_declaration_file(std::string_view text)
{
    const auto lines = detail::numbered_lines(text);
    std::size_t li = 0;
    const auto skip_blank = [&] {
        while (li < lines.size() && detail::blank(lines[li].second)) ++li;
    };

    skip_blank();
    std::optional<int> target_level;
    if (li < lines.size()) {
        std::string_view line = detail::strip(lines[li].second);
        if (line.starts_with("target-level:")) {
            auto n = detail::parse_number(detail::strip(line.substr(13)));
            if (!n)
                throw ParseError("malformed target-level header", lines[li].first);
            target_level = static_cast<int>(*n);
            ++li;
        }
    }

    std::vector<Declaration> declarations;
    skip_blank();
    while (li < lines.size()) {
        // Level header.
        const auto [header_line, header_raw] = lines[li];
        std::string_view header = detail::strip(header_raw);
        if (!header.starts_with("level "))
            throw ParseError("expected 'level <n>:' header", header_line);
        if (header.back() != ':')
            throw ParseError("level header must end with ':'", header_line);
        auto level_no = detail::parse_number(detail::strip(header.substr(6, header.size() - 7)));
        if (!level_no)
            throw ParseError("malformed level header", header_line);
        if (*level_no != declarations.size())
            throw ParseError("levels must appear in order 0,1,2,...", header_line);
        ++li;

        // Equations until the next level header or end of file.
        std::map<std::size_t, Formula> equations;
        skip_blank();
        while (li < lines.size() && !detail::strip(lines[li].second).starts_with("level ")) {
            const auto [eq_line, eq_raw] = lines[li];
            std::string_view head = detail::strip(eq_raw);
            if (head.empty() || head.front() != 'X')
                throw ParseError("expected equation 'X<i> = <formula> ;'", eq_line);
            const std::size_t eq_pos = head.find('=');
            if (eq_pos == std::string_view::npos)
                throw ParseError("expected '=' in equation", eq_line);
            auto index = detail::parse_number(detail::strip(head.substr(1, eq_pos - 1)));
            if (!index)
                throw ParseError("malformed variable index in equation", eq_line);
            if (equations.contains(*index))
                throw ParseError("duplicate equation for X" + std::to_string(*index), eq_line);

            // Accumulate formula text up to the terminating ';'.
            std::string body(head.substr(eq_pos + 1));
            while (body.find(';') == std::string::npos) {
                ++li;
                if (li >= lines.size())
                    throw ParseError("equation not terminated by ';'", eq_line);
                body += "\n";
                body += lines[li].second;
            }
            const std::size_t semi = body.find(';');
            if (!detail::blank(detail::strip(body.substr(semi + 1))))
                throw ParseError("unexpected content after ';'", lines[li].first);
            try {
                equations.emplace(*index, parse_formula(body.substr(0, semi)));
            } catch (const ParseError& e) {
                throw ParseError(std::string("in equation X") + std::to_string(*index) + ": " +
                                     e.what(),
                                 eq_line);
            }
            ++li;
            skip_blank();
        }

        if (equations.empty())
            throw ParseError("level " + std::to_string(*level_no) + " has no equations",
                             header_line);
        std::vector<Formula> bodies;
        for (std::size_t i = 0; i < equations.size(); ++i) {
            auto it = equations.find(i);
            if (it == equations.end())
                throw ParseError("level " + std::to_string(*level_no) +
                                     " is missing an equation for X" + std::to_string(i),
                                 header_line);
            bodies.push_back(it->second);
        }
        try {
            declarations.emplace_back(static_cast<int>(*level_no), std::move(bodies));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), header_line);
        }
    }

    if (declarations.empty())
        throw ParseError("declaration file has no levels", lines.empty() ? 1 : lines.back().first);

    try {
        NestedSystem system{std::move(declarations)};
        if (target_level &&
            (*target_level < 0 || static_cast<std::size_t>(*target_level) >= system.num_levels()))
            throw ParseError("target-level out of range", 1);
        return DeclarationFile{std::move(system), target_level};
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), 1);
    }
}

inline std::string render_declaration_file(const NestedSystem& system,
                                           std::optional<int> target_level = {})
{
    std::string out;
    if (target_level) out += "target-level: " + std::to_string(*target_level) + "\n";
    for (const Declaration& d : system.levels()) {
        out += "level " + std::to_string(d.level()) + ":\n";
        for (std::size_t i = 0; i < d.index_count(); ++i)
            out += "X" + std::to_string(i) + " = " + d.body(i).to_string() + " ;\n";
    }
    return out;
}

} // namespace nusim
