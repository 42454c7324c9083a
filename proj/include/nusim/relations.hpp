#pragma once

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nusim/bitset.hpp"
#include "nusim/lts.hpp"

namespace nusim {

// Binary relation over the processes of an LTS, stored as one bit row per
// source process: row(p) = { q | (p,q) in the relation }.
class Relation {
public:
    Relation() = default;

    explicit Relation(std::size_t n) : n_(n), rows_(n, Bitset(n)) {}

    static Relation empty(std::size_t n) { return Relation(n); }

    static Relation full(std::size_t n)
    {
        Relation r(n);
        for (auto& row : r.rows_) row = Bitset::all(n);
        return r;
    }

    static Relation identity(std::size_t n)
    {
        Relation r(n);
        for (std::size_t p = 0; p < n; ++p) r.rows_[p].set(p);
        return r;
    }

    static Relation from_pairs(std::size_t n,
                               std::initializer_list<std::pair<std::size_t, std::size_t>> pairs)
    {
        Relation r(n);
        for (auto [p, q] : pairs) r.add(p, q);
        return r;
    }

    std::size_t n() const { return n_; }

    bool contains(std::size_t p, std::size_t q) const { return rows_[p].test(q); }
    void add(std::size_t p, std::size_t q) { rows_[p].set(q); }
    void remove(std::size_t p, std::size_t q) { rows_[p].reset(q); }

    const Bitset& row(std::size_t p) const { return rows_[p]; }

    void set_row(std::size_t p, Bitset row)
    {
        if (row.size() != n_) throw std::invalid_argument("relation row has wrong width");
        rows_[p] = std::move(row);
    }

    Relation inverse() const
    {
        Relation r(n_);
        for (std::size_t p = 0; p < n_; ++p)
            for (auto q : rows_[p].elements()) r.rows_[q].set(p);
        return r;
    }

    Relation& operator&=(const Relation& other)
    {
        check_same(other);
        for (std::size_t p = 0; p < n_; ++p) rows_[p] &= other.rows_[p];
        return *this;
    }

    friend Relation operator&(Relation lhs, const Relation& rhs) { return lhs &= rhs; }

    Relation& operator|=(const Relation& other)
    {
        check_same(other);
        for (std::size_t p = 0; p < n_; ++p) rows_[p] |= other.rows_[p];
        return *this;
    }

    friend Relation operator|(Relation lhs, const Relation& rhs) { return lhs |= rhs; }

    friend bool operator==(const Relation&, const Relation&) = default;

    bool is_subset_of(const Relation& other) const
    {
        check_same(other);
        for (std::size_t p = 0; p < n_; ++p)
            if (!rows_[p].is_subset_of(other.rows_[p])) return false;
        return true;
    }

    std::size_t pair_count() const
    {
        std::size_t c = 0;
        for (const auto& row : rows_) c += row.count();
        return c;
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs() const
    {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        out.reserve(pair_count());
        for (std::size_t p = 0; p < n_; ++p)
            for (auto q : rows_[p].elements()) out.emplace_back(p, q);
        return out;
    }

    bool is_reflexive() const { return identity(n_).is_subset_of(*this); }

    bool is_symmetric() const { return *this == inverse(); }

    // R transitive iff for every (p,q) in R, row(q) is contained in row(p).
    bool is_transitive() const
    {
        for (std::size_t p = 0; p < n_; ++p)
            for (auto q : rows_[p].elements())
                if (!rows_[q].is_subset_of(rows_[p])) return false;
        return true;
    }

private:
    void check_same(const Relation& other) const
    {
        if (n_ != other.n_) throw std::invalid_argument("relation dimension mismatch");
    }

    std::size_t n_ = 0;
    std::vector<Bitset> rows_;
};

inline Relation inverse(const Relation& r) { return r.inverse(); }

// One matching step: (p,q) is kept iff every transition p --a--> p' can be
// answered by some q --a--> q' with (p',q') already in S.
inline Relation simulation_step(const Lts& lts, const Relation& s)
{
    const std::size_t n = lts.num_processes();
    if (s.n() != n) throw std::invalid_argument("relation dimension mismatch with LTS");
    Relation result(n);
    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = 0; q < n; ++q) {
            bool ok = true;
            for (ActionId a = 0; a < lts.num_actions() && ok; ++a) {
                const Bitset& answers = lts.successors(q, a);
                for (auto succ : lts.successors(p, a).elements()) {
                    if (!answers.intersects(s.row(succ))) {
                        ok = false;
                        break;
                    }
                }
            }
            if (ok) result.add(p, q);
        }
    }
    return result;
}

// Monotone endofunction on relations, built from the matching step, the
// mirror combinator S |-> (F(S^-1))^-1, and intersection with a fixed
// relation or with another transformer.
class Transformer {
public:
    static Transformer base() { return Transformer(make_base_node()); }

    static Transformer tilde(Transformer inner)
    {
        return Transformer(
            std::make_shared<Node>(Node{Kind::Tilde, std::move(inner.node_), nullptr, {}}));
    }

    static Transformer cap(Transformer inner, Relation constant)
    {
        return Transformer(std::make_shared<Node>(
            Node{Kind::CapConst, std::move(inner.node_), nullptr, std::move(constant)}));
    }

    static Transformer cap(Transformer lhs, Transformer rhs)
    {
        return Transformer(std::make_shared<Node>(
            Node{Kind::CapFun, std::move(lhs.node_), std::move(rhs.node_), {}}));
    }

    Relation apply(const Lts& lts, const Relation& s) const { return apply_node(*node_, lts, s); }

private:
    enum class Kind { Base, Tilde, CapConst, CapFun };

    struct Node {
        Kind kind = Kind::Base;
        std::shared_ptr<const Node> a;
        std::shared_ptr<const Node> b;
        Relation constant;
    };

    explicit Transformer(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    static std::shared_ptr<const Node> make_base_node()
    {
        return std::make_shared<const Node>();
    }

    static Relation apply_node(const Node& node, const Lts& lts, const Relation& s)
    {
        switch (node.kind) {
        case Kind::Base:
            return simulation_step(lts, s);
        case Kind::Tilde:
            return apply_node(*node.a, lts, s.inverse()).inverse();
        case Kind::CapConst:
            if (node.constant.n() != s.n())
                throw std::invalid_argument("relation dimension mismatch in transformer");
            return apply_node(*node.a, lts, s) & node.constant;
        case Kind::CapFun:
            return apply_node(*node.a, lts, s) & apply_node(*node.b, lts, s);
        }
        throw std::logic_error("unreachable");
    }

    std::shared_ptr<const Node> node_;
};

inline Relation apply(const Transformer& t, const Lts& lts, const Relation& s)
{
    return t.apply(lts, s);
}

struct RelationFixpoint {
    Relation relation;
    std::size_t iterations = 0; // function applications performed
};

// Greatest fixed point by descending iteration from the full relation.
// Terminates within |P|^2 + 1 applications: every application before the
// last removes at least one pair.
inline RelationFixpoint gfp_rel_traced(const Transformer& t, const Lts& lts)
{
    Relation current = Relation::full(lts.num_processes());
    std::size_t iterations = 0;
    for (;;) {
        Relation next = t.apply(lts, current);
        ++iterations;
        if (next == current) return {std::move(current), iterations};
        current = std::move(next);
    }
}

inline Relation gfp_rel(const Transformer& t, const Lts& lts)
{
    return gfp_rel_traced(t, lts).relation;
}

// The behavioural relations of the simulation family.
struct RelationKind {
    enum class Family { Sim, OpSim, Bisim, SimEq, NestedSim, NestedOpSim };

    Family family = Family::Sim;
    int depth = 1; // nesting depth for NestedSim / NestedOpSim

    static RelationKind sim() { return {Family::Sim, 1}; }
    static RelationKind opsim() { return {Family::OpSim, 1}; }
    static RelationKind bisim() { return {Family::Bisim, 1}; }
    static RelationKind simeq() { return {Family::SimEq, 1}; }

    static RelationKind nsim(int n)
    {
        if (n < 1) throw std::invalid_argument("nested simulation depth must be at least 1");
        return {Family::NestedSim, n};
    }

    static RelationKind nopsim(int n)
    {
        if (n < 1) throw std::invalid_argument("nested simulation depth must be at least 1");
        return {Family::NestedOpSim, n};
    }

    // Accepts sim | opsim | bisim | simeq | nsim:N | nopsim:N with N >= 1.
    static std::optional<RelationKind> parse(std::string_view text)
    {
        if (text == "sim") return sim();
        if (text == "opsim") return opsim();
        if (text == "bisim") return bisim();
        if (text == "simeq") return simeq();
        for (auto [prefix, family] : {std::pair{std::string_view("nsim:"), Family::NestedSim},
                                      std::pair{std::string_view("nopsim:"), Family::NestedOpSim}}) {
            if (text.substr(0, prefix.size()) != prefix) continue;
            std::string_view digits = text.substr(prefix.size());
            if (digits.empty() || digits.size() > 3) return std::nullopt;
            int n = 0;
            for (char c : digits) {
                if (c < '0' || c > '9') return std::nullopt;
                n = n * 10 + (c - '0');
            }
            if (n < 1) return std::nullopt;
            return RelationKind{family, n};
        }
        return std::nullopt;
    }

    std::string to_string() const
    {
        switch (family) {
        case Family::Sim: return "sim";
        case Family::OpSim: return "opsim";
        case Family::Bisim: return "bisim";
        case Family::SimEq: return "simeq";
        case Family::NestedSim: return "nsim:" + std::to_string(depth);
        case Family::NestedOpSim: return "nopsim:" + std::to_string(depth);
        }
        return {};
    }

    friend bool operator==(const RelationKind&, const RelationKind&) = default;
};

struct PreorderTrace {
    Relation relation;
    std::vector<std::size_t> iteration_counts; // one entry per fixed point computed
};

// Simulation preorder and friends, straight from their fixed-point
// definitions. Nested levels are computed bottom-up: depth n+1 intersects
// the one-step transformer with the fixed relation from depth n.
inline PreorderTrace preorder_traced(const RelationKind& kind, const Lts& lts)
{
    using Family = RelationKind::Family;
    PreorderTrace trace;
    auto run = [&](const Transformer& t) {
        auto fp = gfp_rel_traced(t, lts);
        trace.iteration_counts.push_back(fp.iterations);
        return std::move(fp.relation);
    };

    switch (kind.family) {
    case Family::Sim:
        trace.relation = run(Transformer::base());
        return trace;
    case Family::OpSim:
        trace.relation = run(Transformer::tilde(Transformer::base()));
        return trace;
    case Family::Bisim:
        trace.relation =
            run(Transformer::cap(Transformer::base(), Transformer::tilde(Transformer::base())));
        return trace;
    case Family::SimEq: {
        // An intersection of two preorders, not itself a fixed point.
        Relation sim = run(Transformer::base());
        Relation opsim = run(Transformer::tilde(Transformer::base()));
        trace.relation = sim & opsim;
        return trace;
    }
    case Family::NestedSim:
    case Family::NestedOpSim: {
        if (kind.depth < 1)
            throw std::invalid_argument("nested simulation depth must be at least 1");
        Relation sim = run(Transformer::base());
        Relation opsim = run(Transformer::tilde(Transformer::base()));
        for (int level = 2; level <= kind.depth; ++level) {
            Relation next_sim = run(Transformer::cap(Transformer::base(), opsim));
            Relation next_opsim =
                run(Transformer::cap(Transformer::tilde(Transformer::base()), sim));
            sim = std::move(next_sim);
            opsim = std::move(next_opsim);
        }
        trace.relation = kind.family == Family::NestedSim ? std::move(sim) : std::move(opsim);
        return trace;
    }
    }
    throw std::logic_error("unreachable");
}

inline Relation preorder(const RelationKind& kind, const Lts& lts)
{
    return preorder_traced(kind, lts).relation;
}

// Uniform random relation: an unbiased coin per pair.
inline Relation random_relation(std::size_t n, std::mt19937_64& rng)
{
    Relation r(n);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q = 0; q < n; ++q)
            if (rng() & 1u) r.add(p, q);
    return r;
}

namespace detail {

inline std::string process_text(const Lts* lts, std::size_t p)
{
    if (lts != nullptr)
        if (const std::string* name = lts->display_name(p)) return *name;
    return std::to_string(p);
}

} // namespace detail

// One "p q" pair per line, sorted by (p, q).
inline std::string render_pairs(const Relation& r, const Lts* lts = nullptr)
{
    std::string out;
    for (auto [p, q] : r.pairs())
        out += detail::process_text(lts, p) + " " + detail::process_text(lts, q) + "\n";
    return out;
}

// One "p: q1 q2 ..." line per source process.
inline std::string render_summary(const Relation& r, const Lts* lts = nullptr)
{
    std::string out;
    for (std::size_t p = 0; p < r.n(); ++p) {
        out += detail::process_text(lts, p) + ":";
        for (auto q : r.row(p).elements()) out += " " + detail::process_text(lts, q);
        out += "\n";
    }
    return out;
}

} // namespace nusim
