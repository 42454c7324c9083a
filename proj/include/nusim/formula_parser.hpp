#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "nusim/errors.hpp"
#include "nusim/formula.hpp"

namespace nusim {

namespace detail {

// Recursive-descent parser for the formula grammar:
//
//   or    ::= and ('|' and)*
//   and   ::= unary ('&' unary)*
//   unary ::= '<' label '>' unary | '[' label ']' unary | atom
//   atom  ::= 'tt' | 'ff' | 'X' digits | 'nu' digits ':' digits | '(' or ')'
//
// Labels are taken verbatim up to the closing delimiter and must be
// nonempty. Errors carry 1-based line/column positions within the input.
class FormulaCursor {
public:
    explicit FormulaCursor(std::string_view text) : text_(text) {}

    Formula parse_all()
    {
        Formula f = parse_or();
        skip_space();
        if (pos_ != text_.size()) fail("unexpected trailing input after formula");
        return f;
    }

private:
    // Chains associate to the right, matching conj_of and disj_of, so the
    // flat rendering of a combinator-built formula parses back to the same
    // tree.
    Formula parse_or()
    {
        Formula f = parse_and();
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == '|') {
            ++pos_;
            return Formula::disj(std::move(f), parse_or());
        }
        return f;
    }

    Formula parse_and()
    {
        Formula f = parse_unary();
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == '&') {
            ++pos_;
            return Formula::conj(std::move(f), parse_and());
        }
        return f;
    }

    Formula parse_unary()
    {
        skip_space();
        if (pos_ >= text_.size()) fail("expected formula, found end of input");
        const char c = text_[pos_];
        if (c == '<' || c == '[') {
            const char closer = c == '<' ? '>' : ']';
            const std::size_t open = pos_++;
            const std::size_t start = pos_;
            while (pos_ < text_.size() && text_[pos_] != closer) ++pos_;
            if (pos_ >= text_.size())
                fail(std::string("unterminated modality: missing '") + closer + "'", open);
            const std::string label(text_.substr(start, pos_ - start));
            if (label.empty()) fail("modality label must be nonempty", open);
            ++pos_;
            Formula body = parse_unary();
            return c == '<' ? Formula::diamond(label, std::move(body))
                            : Formula::box(label, std::move(body));
        }
        return parse_atom();
    }

    Formula parse_atom()
    {
        skip_space();
        if (pos_ >= text_.size()) fail("expected formula, found end of input");
        const char c = text_[pos_];
        if (c == '(') {
            const std::size_t open = pos_++;
            Formula f = parse_or();
            skip_space();
            if (pos_ >= text_.size() || text_[pos_] != ')')
                fail("unmatched '(' in formula", open);
            ++pos_;
            return f;
        }
        if (keyword("tt")) return Formula::tt();
        if (keyword("ff")) return Formula::ff();
        if (c == 'X') {
            ++pos_;
            return Formula::var(integer("variable index"));
        }
        if (text_.substr(pos_).starts_with("nu")) {
            pos_ += 2;
            const std::size_t level = integer("constant level");
            if (pos_ >= text_.size() || text_[pos_] != ':')
                fail("expected ':' in fixed-point constant");
            ++pos_;
            const std::size_t index = integer("constant index");
            return Formula::nu(static_cast<int>(level), index);
        }
        fail(std::string("expected formula, found '") + c + "'");
    }

    bool keyword(std::string_view word)
    {
        if (!text_.substr(pos_).starts_with(word)) return false;
        const std::size_t after = pos_ + word.size();
        if (after < text_.size() &&
            (std::isalnum(static_cast<unsigned char>(text_[after])) || text_[after] == '_'))
            return false;
        pos_ = after;
        return true;
    }

    std::size_t integer(const char* what)
    {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
        if (pos_ == start) fail(std::string("expected ") + what);
        if (pos_ - start > 9) fail(std::string(what) + " out of range", start);
        std::size_t value = 0;
        for (std::size_t i = start; i < pos_; ++i)
            value = value * 10 + static_cast<std::size_t>(text_[i] - '0');
        return value;
    }

    void skip_space()
    {
        while (pos_ < text_.size() &&
               std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    [[noreturn]] void fail(const std::string& message) const { fail(message, pos_); }

    [[noreturn]] void fail(const std::string& message, std::size_t at) const
    {
        std::size_t line = 1;
        std::size_t col = 1;
        for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
            if (text_[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ParseError(message, line, col);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

} // namespace detail

// Parses a complete formula; the whole input must be consumed apart from
// whitespace. Throws ParseError with a position on malformed input.
inline Formula parse_formula(std::string_view text)
{
    return detail::FormulaCursor(text).parse_all();
}

} // namespace nusim
