#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nusim/declarations.hpp"
#include "nusim/formula.hpp"
#include "nusim/lts.hpp"
#include "nusim/relations.hpp"
#include "nusim/semantics.hpp"

// Characteristic declarations: equation systems over the index set I = P
// whose greatest fixed points carve out, per process p, exactly the set of
// q related to p. The bridge to the relational route is the isomorphism
// phi between relations on P×P and interpretations in P(P)^P.

namespace nusim {

// phi(S)(p) = {q | (p,q) in S} — row read-off.
inline Interpretation phi(const Relation& s)
{
    const std::size_t n = s.n();
    Interpretation sigma(n, n);
    for (std::size_t p = 0; p < n; ++p) sigma.assign(p, s.row(p));
    return sigma;
}

inline Relation phi_inverse(const Interpretation& sigma)
{
    if (sigma.index_count() != sigma.num_processes())
        throw std::invalid_argument("interpretation index set must equal the process set");
    Relation s = Relation::empty(sigma.num_processes());
    for (std::size_t p = 0; p < sigma.num_processes(); ++p) s.set_row(p, sigma.at(p));
    return s;
}

namespace detail {

// body(p) = conjunction over p's transitions of <a>X_{p'}; empty -> tt.
inline std::vector<Formula> sim_bodies(const Lts& lts)
{
    std::vector<Formula> bodies;
    bodies.reserve(lts.num_processes());
    for (ProcessId p = 0; p < lts.num_processes(); ++p) {
        std::vector<Formula> parts;
        for (ActionId a = 0; a < lts.num_actions(); ++a)
            for (ProcessId q : lts.successors(p, a).elements())
                parts.push_back(Formula::diamond(lts.action_label(a), Formula::var(q)));
        bodies.push_back(Formula::conj_of(parts));
    }
    return bodies;
}

// body(p) = conjunction over the WHOLE alphabet of [a](disjunction of
// X_{p'} over a-successors); empty disjunction -> ff, so [a]ff forbids
// a-moves that p cannot match.
inline std::vector<Formula> opsim_bodies(const Lts& lts)
{
    std::vector<Formula> bodies;
    bodies.reserve(lts.num_processes());
    for (ProcessId p = 0; p < lts.num_processes(); ++p) {
        std::vector<Formula> parts;
        for (ActionId a = 0; a < lts.num_actions(); ++a) {
            std::vector<Formula> branches;
            for (ProcessId q : lts.successors(p, a).elements())
                branches.push_back(Formula::var(q));
            parts.push_back(Formula::box(lts.action_label(a), Formula::disj_of(branches)));
        }
        bodies.push_back(Formula::conj_of(parts));
    }
    return bodies;
}

} // namespace detail

inline Declaration decl_sim(const Lts& lts) { return Declaration(0, detail::sim_bodies(lts)); }

inline Declaration decl_opsim(const Lts& lts) { return Declaration(0, detail::opsim_bodies(lts)); }

inline Declaration decl_bisim(const Lts& lts)
{
    const auto sim = detail::sim_bodies(lts);
    const auto opsim = detail::opsim_bodies(lts);
    std::vector<Formula> bodies;
    bodies.reserve(sim.size());
    for (std::size_t p = 0; p < sim.size(); ++p)
        bodies.push_back(Formula::conj(sim[p], opsim[p]));
    return Declaration(0, std::move(bodies));
}

// Nested system plus the level whose gfp is read off as the characterized
// relation.
struct CharSystem {
    NestedSystem system;
    int target_level = 0;
};

// Three levels: simulation at 0, inverse simulation at 1, and a constant
// top level whose body(p) = nu0:p & nu1:p intersects the two.
inline CharSystem decl_simeq(const Lts& lts)
{
    std::vector<Declaration> levels;
    levels.push_back(decl_sim(lts));
    levels.push_back(decl_opsim(lts).with_level(1));
    std::vector<Formula> meet;
    for (ProcessId p = 0; p < lts.num_processes(); ++p)
        meet.push_back(Formula::conj(Formula::nu(0, p), Formula::nu(1, p)));
    levels.emplace_back(2, std::move(meet));
    return CharSystem{NestedSystem{std::move(levels)}, 2};
}

// The interleaved hierarchy: level 2i-2 refines simulation with the
// constant of level 2i-3, level 2i-1 refines inverse simulation with the
// constant of level 2i-4. n-nested (inverse) simulation is the target.
inline CharSystem char_system(const RelationKind& kind, const Lts& lts)
{
    using Family = RelationKind::Family;
    const bool op_side =
        kind.family == Family::OpSim || kind.family == Family::NestedOpSim;
    switch (kind.family) {
    case Family::Bisim: return CharSystem{NestedSystem{{decl_bisim(lts)}}, 0};
    case Family::SimEq: return decl_simeq(lts);
    case Family::Sim:
    case Family::OpSim:
    case Family::NestedSim:
    case Family::NestedOpSim: {
        if (kind.depth == 1) {
            Declaration d = op_side ? decl_opsim(lts) : decl_sim(lts);
            return CharSystem{NestedSystem{{std::move(d)}}, 0};
        }
        const int target = op_side ? 2 * kind.depth - 1 : 2 * kind.depth - 2;
        const auto sim = detail::sim_bodies(lts);
        const auto opsim = detail::opsim_bodies(lts);
        std::vector<Declaration> levels;
        levels.emplace_back(0, sim);
        levels.emplace_back(1, opsim);
        for (int level = 2; level <= target; ++level) {
            const bool sim_side = level % 2 == 0;
            const auto& base = sim_side ? sim : opsim;
            const int const_level = sim_side ? level - 1 : level - 3;
            std::vector<Formula> bodies;
            for (ProcessId p = 0; p < lts.num_processes(); ++p)
                bodies.push_back(Formula::conj(base[p], Formula::nu(const_level, p)));
            levels.emplace_back(level, std::move(bodies));
        }
        return CharSystem{NestedSystem{std::move(levels)}, target};
    }
    }
    throw std::logic_error("unreachable relation kind");
}

struct CharTrace {
    Relation relation;
    std::vector<FixpointResult> levels;
};

// Elaborate the system bottom-up and read the target level's solution
// back through phi.
inline CharTrace characterized_relation_traced(const CharSystem& cs, const Lts& lts)
{
    if (cs.system.index_count() != lts.num_processes())
        throw std::invalid_argument("characteristic system index set must equal the process set");
    ElaborationTrace trace = elaborate_traced(cs.system, lts);
    Relation rel = phi_inverse(trace.levels.at(static_cast<std::size_t>(cs.target_level)).solution);
    return CharTrace{std::move(rel), std::move(trace.levels)};
}

inline Relation characterized_relation(const CharSystem& cs, const Lts& lts)
{
    return characterized_relation_traced(cs, lts).relation;
}

// Executable form of "D expresses t": one step of the derived function
// agrees with one step of the transformer through phi, on `samples`
// seeded random relations plus the empty and full ones.
inline bool expresses_check(const Declaration& d, const Transformer& t, const Lts& lts,
                            std::size_t samples, std::uint64_t seed, const ConstantEnv& env = {})
{
    const std::size_t n = lts.num_processes();
    if (d.index_count() != n)
        throw std::invalid_argument("declaration index set must equal the process set");
    const auto agree = [&](const Relation& s) {
        return apply(t, lts, s) == phi_inverse(apply(d, lts, env, phi(s)));
    };
    if (!agree(Relation::empty(n)) || !agree(Relation::full(n))) return false;
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < samples; ++k)
        if (!agree(random_relation(n, rng))) return false;
    return true;
}

namespace detail {

inline Formula unfold_constant(const CharSystem& cs, ConstName c, std::size_t depth);

inline Formula unfold_body(const CharSystem& cs, const Formula& f, int level, std::size_t depth)
{
    switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False: return f;
    case Formula::Kind::Var:
        return unfold_constant(cs, ConstName{level, f.var_index()}, depth);
    case Formula::Kind::Const: return unfold_constant(cs, f.constant(), depth);
    case Formula::Kind::And:
        return Formula::conj(unfold_body(cs, f.lhs(), level, depth),
                             unfold_body(cs, f.rhs(), level, depth));
    case Formula::Kind::Or:
        return Formula::disj(unfold_body(cs, f.lhs(), level, depth),
                             unfold_body(cs, f.rhs(), level, depth));
    case Formula::Kind::Diamond:
        return Formula::diamond(f.action(), unfold_body(cs, f.child(), level, depth));
    case Formula::Kind::Box:
        return Formula::box(f.action(), unfold_body(cs, f.child(), level, depth));
    }
    throw std::logic_error("unreachable formula kind");
}

inline Formula unfold_constant(const CharSystem& cs, ConstName c, std::size_t depth)
{
    if (depth == 0) return Formula::nu(c);
    const Declaration& d = cs.system.level(static_cast<std::size_t>(c.level));
    return unfold_body(cs, d.body(c.index), c.level, depth - 1);
}

} // namespace detail

// Depth-bounded unfolding of a fixed-point constant into plain modal
// syntax; every constant or variable expansion costs one depth unit, and
// remaining constants are printed by name. Documentation aid only — full
// unfolding may blow up or not terminate on cyclic systems.
inline Formula unfold(const CharSystem& cs, ConstName c, std::size_t depth)
{
    if (c.level < 0 || static_cast<std::size_t>(c.level) >= cs.system.num_levels())
        throw std::invalid_argument("constant level out of range for this system");
    if (c.index >= cs.system.index_count())
        throw std::invalid_argument("constant index out of range for this system");
    return detail::unfold_constant(cs, c, depth);
}

// Unfolding of the target constant for process p.
inline Formula unfold(const CharSystem& cs, ProcessId p, std::size_t depth)
{
    return unfold(cs, ConstName{cs.target_level, p}, depth);
}

} // namespace nusim
