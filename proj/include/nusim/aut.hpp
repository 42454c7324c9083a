#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "nusim/detail/text.hpp"
#include "nusim/errors.hpp"
#include "nusim/lts.hpp"

// Aldebaran (.aut) transition-system format:
//
//   des (I,T,S)
//   (src,"label",dst)        T such lines, 0 <= src,dst < S
//
// I is the initial state index, T the number of transitions, S the number
// of states. Whitespace around commas and parentheses is tolerated; labels
// are arbitrary characters other than '"' between double quotes.

namespace nusim {

namespace detail {

struct AutCursor {
    std::string_view text;
    std::size_t pos = 0;
    std::size_t line;

    void skip_blanks()
    {
        while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    }

    bool eat(char c)
    {
        skip_blanks();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    void expect(char c, const char* what)
    {
        if (!eat(c))
            throw ParseError(std::string("expected '") + c + "' in " + what, line);
    }

    std::size_t integer(const char* what)
    {
        skip_blanks();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start)
            throw ParseError(std::string("expected number in ") + what, line);
        std::size_t value = 0;
        for (std::size_t i = start; i < pos; ++i) {
            value = value * 10 + static_cast<std::size_t>(text[i] - '0');
            if (value > 100000000)
                throw ParseError(std::string("number too large in ") + what, line);
        }
        return value;
    }

    std::string quoted_label()
    {
        skip_blanks();
        if (pos >= text.size() || text[pos] != '"')
            throw ParseError("expected quoted label", line);
        ++pos;
        std::size_t start = pos;
        while (pos < text.size() && text[pos] != '"') ++pos;
        if (pos >= text.size())
            throw ParseError("unterminated quoted label", line);
        std::string label(text.substr(start, pos - start));
        ++pos;
        return label;
    }

    bool at_end()
    {
        skip_blanks();
        return pos >= text.size();
    }
};

} // namespace detail

inline Lts parse_aut(std::string_view text, const std::vector<std::string>& extra_actions = {})
{
    auto lines = detail::numbered_lines(text);
    std::size_t li = 0;
    while (li < lines.size() && detail::blank(lines[li].second)) ++li;
    if (li >= lines.size())
        throw ParseError("malformed header: empty document", 1);

    detail::AutCursor header{lines[li].second, 0, lines[li].first};
    header.skip_blanks();
    if (header.text.substr(header.pos, 3) != "des")
        throw ParseError("malformed header: expected 'des (I,T,S)'", header.line);
    header.pos += 3;
    header.expect('(', "header");
    const std::size_t initial = header.integer("header");
    header.expect(',', "header");
    const std::size_t n_transitions = header.integer("header");
    header.expect(',', "header");
    const std::size_t n_states = header.integer("header");
    header.expect(')', "header");
    if (!header.at_end())
        throw ParseError("malformed header: trailing characters", header.line);
    if (n_states == 0)
        throw ParseError("malformed header: state count must be positive", header.line);
    if (initial >= n_states)
        throw ParseError("initial state index out of declared range", header.line);

    std::vector<LabelledTransition> transitions;
    transitions.reserve(n_transitions);
    ++li;
    for (; li < lines.size() && transitions.size() < n_transitions; ++li) {
        if (detail::blank(lines[li].second)) continue;
        detail::AutCursor c{lines[li].second, 0, lines[li].first};
        c.expect('(', "transition");
        const std::size_t src = c.integer("transition");
        c.expect(',', "transition");
        std::string label = c.quoted_label();
        if (label.empty())
            throw ParseError("empty action label", c.line);
        c.expect(',', "transition");
        const std::size_t dst = c.integer("transition");
        c.expect(')', "transition");
        if (!c.at_end())
            throw ParseError("trailing characters after transition", c.line);
        if (src >= n_states || dst >= n_states)
            throw ParseError("state index out of declared range", c.line);
        transitions.push_back({src, std::move(label), dst});
    }
    if (transitions.size() < n_transitions)
        throw ParseError("expected " + std::to_string(n_transitions) + " transitions, found " +
                             std::to_string(transitions.size()),
                         lines.back().first);
    for (; li < lines.size(); ++li)
        if (!detail::blank(lines[li].second))
            throw ParseError("unexpected content after last declared transition",
                             lines[li].first);

    return Lts(n_states, transitions, extra_actions, initial);
}

// Emits the same format, transitions sorted by (src, label, dst). Only
// labels that actually occur in transitions survive a round trip; declared
// but unused actions have no representation in this format.
inline std::string render_aut(const Lts& lts)
{
    std::string out = "des (" + std::to_string(lts.initial_state()) + "," +
                      std::to_string(lts.num_transitions()) + "," +
                      std::to_string(lts.num_processes()) + ")\n";
    for (const auto& t : lts.transitions())
        out += "(" + std::to_string(t.src) + ",\"" + t.label + "\"," + std::to_string(t.dst) +
               ")\n";
    return out;
}

// Sidecar names file: one `<id> <name>` entry per line, blank lines ignored.
// Returns a dense vector with "" for processes the file does not mention.
inline std::vector<std::string> parse_names(std::string_view text, std::size_t n_processes)
{
    std::vector<std::string> names(n_processes);
    for (auto [line_no, line] : detail::numbered_lines(text)) {
        if (detail::blank(line)) continue;
        detail::AutCursor c{line, 0, line_no};
        const std::size_t id = c.integer("names entry");
        c.skip_blanks();
        std::string_view name = line.substr(c.pos);
        while (!name.empty() && (name.back() == ' ' || name.back() == '\t'))
            name.remove_suffix(1);
        if (name.empty())
            throw ParseError("names entry without a name", line_no);
        if (id >= n_processes)
            throw ParseError("names entry for unknown process " + std::to_string(id), line_no);
        if (!names[id].empty())
            throw ParseError("duplicate names entry for process " + std::to_string(id), line_no);
        names[id] = std::string(name);
    }
    return names;
}

} // namespace nusim
