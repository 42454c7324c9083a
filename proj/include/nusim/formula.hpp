#pragma once

#include <compare>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace nusim {

// Name of a greatest-fixed-point constant: the solution component `index`
// of the level-`level` declaration in a nested system. Written nuL:i.
struct ConstName {
    int level = 0;
    std::size_t index = 0;

    auto operator<=>(const ConstName&) const = default;

    std::string to_string() const
    {
        return "nu" + std::to_string(level) + ":" + std::to_string(index);
    }
};

// Modal formula over a fixed action alphabet:
//
//   tt | ff | X_i | nuL:i | F & F | F '|' F | <a>F | [a]F
//
// Negation is deliberately absent; every connective is monotone, which is
// what makes every derived declaration function have a greatest fixed
// point. Values are immutable and share subterms, so evaluators can
// memoize on node identity.
class Formula {
public:
    enum class Kind { True, False, Var, Const, And, Or, Diamond, Box };

    Formula() : Formula(tt()) {}

    static Formula tt()
    {
        static const Formula f = leaf(Kind::True);
        return f;
    }

    static Formula ff()
    {
        static const Formula f = leaf(Kind::False);
        return f;
    }

    static Formula var(std::size_t index)
    {
        Node n;
        n.kind = Kind::Var;
        n.var_index = index;
        return Formula{std::make_shared<const Node>(std::move(n))};
    }

    static Formula nu(ConstName name)
    {
        Node n;
        n.kind = Kind::Const;
        n.constant = name;
        return Formula{std::make_shared<const Node>(std::move(n))};
    }

    static Formula nu(int level, std::size_t index) { return nu(ConstName{level, index}); }

    static Formula conj(Formula lhs, Formula rhs)
    {
        return binary(Kind::And, std::move(lhs), std::move(rhs));
    }

    static Formula disj(Formula lhs, Formula rhs)
    {
        return binary(Kind::Or, std::move(lhs), std::move(rhs));
    }

    static Formula diamond(std::string action, Formula body)
    {
        return modal(Kind::Diamond, std::move(action), std::move(body));
    }

    static Formula box(std::string action, Formula body)
    {
        return modal(Kind::Box, std::move(action), std::move(body));
    }

    // Right-folded n-ary connectives; the empty conjunction is tt and the
    // empty disjunction is ff, so a process with no matching successors
    // gets [a]ff rather than a missing conjunct.
    static Formula conj_of(std::span<const Formula> parts)
    {
        if (parts.empty()) return tt();
        Formula acc = parts.back();
        for (std::size_t i = parts.size() - 1; i-- > 0;) acc = conj(parts[i], acc);
        return acc;
    }

    static Formula disj_of(std::span<const Formula> parts)
    {
        if (parts.empty()) return ff();
        Formula acc = parts.back();
        for (std::size_t i = parts.size() - 1; i-- > 0;) acc = disj(parts[i], acc);
        return acc;
    }

    static Formula conj_of(const std::vector<Formula>& parts)
    {
        return conj_of(std::span<const Formula>(parts));
    }

    static Formula disj_of(const std::vector<Formula>& parts)
    {
        return disj_of(std::span<const Formula>(parts));
    }

    Kind kind() const { return node_->kind; }

    std::size_t var_index() const
    {
        require(Kind::Var);
        return node_->var_index;
    }

    ConstName constant() const
    {
        require(Kind::Const);
        return node_->constant;
    }

    const std::string& action() const
    {
        if (node_->kind != Kind::Diamond && node_->kind != Kind::Box)
            throw std::logic_error("formula node has no action");
        return node_->action;
    }

    Formula lhs() const
    {
        if (!node_->a) throw std::logic_error("formula node has no operands");
        return Formula{node_->a};
    }

    Formula rhs() const
    {
        if (!node_->b) throw std::logic_error("formula node has no right operand");
        return Formula{node_->b};
    }

    Formula child() const { return lhs(); }

    // Stable identity of the underlying node; shared subterms compare equal.
    const void* id() const { return node_.get(); }

    friend bool operator==(const Formula& a, const Formula& b)
    {
        return a.node_ == b.node_ || structurally_equal(*a.node_, *b.node_);
    }

    // Concrete syntax accepted by parse_formula. '&' binds tighter than
    // '|', modalities tightest.
    std::string to_string() const
    {
        std::string out;
        print(*node_, Prec::Or, out);
        return out;
    }

private:
    struct Node {
        Kind kind = Kind::True;
        std::size_t var_index = 0;
        ConstName constant{};
        std::string action;
        std::shared_ptr<const Node> a;
        std::shared_ptr<const Node> b;
    };

    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    static Formula leaf(Kind kind)
    {
        Node n;
        n.kind = kind;
        return Formula{std::make_shared<const Node>(std::move(n))};
    }

    static Formula binary(Kind kind, Formula lhs, Formula rhs)
    {
        Node n;
        n.kind = kind;
        n.a = std::move(lhs.node_);
        n.b = std::move(rhs.node_);
        return Formula{std::make_shared<const Node>(std::move(n))};
    }

    static Formula modal(Kind kind, std::string action, Formula body)
    {
        if (action.empty()) throw std::invalid_argument("modal action label must be nonempty");
        Node n;
        n.kind = kind;
        n.action = std::move(action);
        n.a = std::move(body.node_);
        return Formula{std::make_shared<const Node>(std::move(n))};
    }

    void require(Kind kind) const
    {
        if (node_->kind != kind) throw std::logic_error("formula node kind mismatch");
    }

    static bool structurally_equal(const Node& a, const Node& b)
    {
        if (a.kind != b.kind) return false;
        switch (a.kind) {
        case Kind::True:
        case Kind::False: return true;
        case Kind::Var: return a.var_index == b.var_index;
        case Kind::Const: return a.constant == b.constant;
        case Kind::And:
        case Kind::Or:
            return (a.a == b.a || structurally_equal(*a.a, *b.a)) &&
                   (a.b == b.b || structurally_equal(*a.b, *b.b));
        case Kind::Diamond:
        case Kind::Box:
            return a.action == b.action && (a.a == b.a || structurally_equal(*a.a, *b.a));
        }
        return false;
    }

    enum class Prec { Or, And, Modal };

    static void print(const Node& n, Prec context, std::string& out)
    {
        switch (n.kind) {
        case Kind::True: out += "tt"; return;
        case Kind::False: out += "ff"; return;
        case Kind::Var: out += "X" + std::to_string(n.var_index); return;
        case Kind::Const: out += n.constant.to_string(); return;
        case Kind::Or: {
            // The parser chains to the right, so only a right operand may
            // continue at the same precedence; a nested left operand needs
            // parentheses to keep its shape.
            const bool parens = context != Prec::Or;
            if (parens) out += "(";
            print(*n.a, Prec::And, out);
            out += " | ";
            print(*n.b, Prec::Or, out);
            if (parens) out += ")";
            return;
        }
        case Kind::And: {
            const bool parens = context == Prec::Modal;
            if (parens) out += "(";
            print(*n.a, Prec::Modal, out);
            out += " & ";
            print(*n.b, Prec::And, out);
            if (parens) out += ")";
            return;
        }
        case Kind::Diamond:
        case Kind::Box:
            out += n.kind == Kind::Diamond ? "<" + n.action + ">" : "[" + n.action + "]";
            print(*n.a, Prec::Modal, out);
            return;
        }
    }

    std::shared_ptr<const Node> node_;
};

namespace detail {

inline bool check_level_impl(const Formula& f, int level, bool allow_vars)
{
    switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False: return true;
    case Formula::Kind::Var: return allow_vars;
    case Formula::Kind::Const: return f.constant().level < level;
    case Formula::Kind::And:
    case Formula::Kind::Or:
        return check_level_impl(f.lhs(), level, allow_vars) &&
               check_level_impl(f.rhs(), level, allow_vars);
    case Formula::Kind::Diamond:
    case Formula::Kind::Box: return check_level_impl(f.child(), level, allow_vars);
    }
    return false;
}

} // namespace detail

// Nesting discipline: a formula interpreted at `level` may only mention
// fixed-point constants introduced strictly below it. Variables are fine
// (membership in the variable logic of that level).
inline bool check_level(const Formula& f, int level)
{
    return detail::check_level_impl(f, level, /*allow_vars=*/true);
}

// As check_level, but additionally variable-free (membership in the closed
// logic of that level).
inline bool check_level_closed(const Formula& f, int level)
{
    return detail::check_level_impl(f, level, /*allow_vars=*/false);
}

} // namespace nusim
