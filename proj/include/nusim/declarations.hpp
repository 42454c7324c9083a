#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nusim/formula.hpp"
#include "nusim/lts.hpp"
#include "nusim/semantics.hpp"

namespace nusim {

// A declaration at level j assigns to each index in {0..k-1} a body
// formula over variables X0..X{k-1} and fixed-point constants of levels
// strictly below j. Its meaning (relative to an environment for those
// constants) is the greatest fixed point of the derived function on
// interpretations.
class Declaration {
public:
    Declaration(int level, std::vector<Formula> body)
        : level_(level), body_(std::move(body))
    {
        if (level_ < 0) throw std::invalid_argument("declaration level must be nonnegative");
        if (body_.empty()) throw std::invalid_argument("declaration must have at least one index");
        for (const Formula& f : body_) validate(f);
    }

    int level() const { return level_; }
    std::size_t index_count() const { return body_.size(); }

    const Formula& body(std::size_t index) const
    {
        if (index >= body_.size()) throw std::invalid_argument("declaration index out of range");
        return body_[index];
    }

    const std::vector<Formula>& bodies() const { return body_; }

    // Same bodies reinterpreted at another level; the level constraint on
    // constants is rechecked.
    Declaration with_level(int new_level) const { return Declaration(new_level, body_); }

    friend bool operator==(const Declaration& a, const Declaration& b)
    {
        if (a.level_ != b.level_ || a.body_.size() != b.body_.size()) return false;
        for (std::size_t i = 0; i < a.body_.size(); ++i)
            if (!(a.body_[i] == b.body_[i])) return false;
        return true;
    }

private:
    void validate(const Formula& f) const
    {
        switch (f.kind()) {
        case Formula::Kind::True:
        case Formula::Kind::False: return;
        case Formula::Kind::Var:
            if (f.var_index() >= body_.size())
                throw std::invalid_argument("variable X" + std::to_string(f.var_index()) +
                                            " out of range for declaration");
            return;
        case Formula::Kind::Const: {
            const ConstName c = f.constant();
            if (c.level < 0 || c.level >= level_)
                throw std::invalid_argument("constant " + c.to_string() +
                                            " not below declaration level " +
                                            std::to_string(level_));
            if (c.index >= body_.size())
                throw std::invalid_argument("constant " + c.to_string() +
                                            " index out of range for declaration");
            return;
        }
        case Formula::Kind::And:
        case Formula::Kind::Or:
            validate(f.lhs());
            validate(f.rhs());
            return;
        case Formula::Kind::Diamond:
        case Formula::Kind::Box:
            validate(f.child());
            return;
        }
    }

    int level_;
    std::vector<Formula> body_;
};

// One step of the derived function: evaluate every body under sigma.
inline Interpretation apply(const Declaration& d, const Lts& lts, const ConstantEnv& env,
                            const Interpretation& sigma)
{
    if (sigma.index_count() != d.index_count())
        throw std::invalid_argument("interpretation shape does not match declaration");
    Interpretation out(d.index_count(), lts.num_processes());
    for (std::size_t i = 0; i < d.index_count(); ++i)
        out.assign(i, eval_open(d.body(i), lts, env, sigma));
    return out;
}

// The derived function as a first-class value (for monotonicity and
// fixed-point property checks). The Lts must outlive the returned function.
inline std::function<Interpretation(const Interpretation&)>
derived_function(Declaration d, const Lts& lts, ConstantEnv env = {})
{
    return [d = std::move(d), &lts, env = std::move(env)](const Interpretation& sigma) {
        return apply(d, lts, env, sigma);
    };
}

struct FixpointResult {
    Interpretation solution;
    // Number of applications of the derived function until two successive
    // interpretations coincide; at most index_count * |P| + 1.
    std::size_t iterations = 0;
};

// Greatest fixed point by descending Kleene iteration from the top
// interpretation. Every connective is monotone, so the iterates form a
// decreasing chain and the first repeat is the gfp.
inline FixpointResult gfp(const Declaration& d, const Lts& lts, const ConstantEnv& env = {})
{
    Interpretation current = Interpretation::top(d.index_count(), lts.num_processes());
    std::size_t applications = 0;
    while (true) {
        Interpretation next = apply(d, lts, env, current);
        ++applications;
        if (next == current) return {std::move(current), applications};
        current = std::move(next);
    }
}

// Declarations D_0 .. D_{N-1} over a common index set, where level j may
// mention constants of levels below j only.
class NestedSystem {
public:
    explicit NestedSystem(std::vector<Declaration> declarations)
        : declarations_(std::move(declarations))
    {
        if (declarations_.empty())
            throw std::invalid_argument("nested system must have at least one level");
        for (std::size_t j = 0; j < declarations_.size(); ++j) {
            if (declarations_[j].level() != static_cast<int>(j))
                throw std::invalid_argument("nested system levels must be 0..N-1 in order");
            if (declarations_[j].index_count() != declarations_[0].index_count())
                throw std::invalid_argument("nested system levels must share one index set");
        }
    }

    std::size_t num_levels() const { return declarations_.size(); }
    std::size_t index_count() const { return declarations_[0].index_count(); }

    const Declaration& level(std::size_t j) const
    {
        if (j >= declarations_.size())
            throw std::invalid_argument("nested system level out of range");
        return declarations_[j];
    }

    const std::vector<Declaration>& levels() const { return declarations_; }

    friend bool operator==(const NestedSystem& a, const NestedSystem& b)
    {
        return a.declarations_ == b.declarations_;
    }

private:
    std::vector<Declaration> declarations_;
};

struct ElaborationTrace {
    // nu j:i bound for every level j and index i of the system.
    ConstantEnv constants;
    std::vector<FixpointResult> levels;
};

// Solves the system bottom-up: level j is solved with the constants of
// levels below j already bound, then contributes its own nu j:i bindings.
inline ElaborationTrace elaborate_traced(const NestedSystem& system, const Lts& lts)
{
    ElaborationTrace trace;
    for (std::size_t j = 0; j < system.num_levels(); ++j) {
        FixpointResult result = gfp(system.level(j), lts, trace.constants);
        for (std::size_t i = 0; i < system.index_count(); ++i)
            trace.constants.bind(ConstName{static_cast<int>(j), i}, result.solution.at(i));
        trace.levels.push_back(std::move(result));
    }
    return trace;
}

inline ConstantEnv elaborate(const NestedSystem& system, const Lts& lts)
{
    return elaborate_traced(system, lts).constants;
}

// Solution interpretation of one level within the elaborated system.
inline Interpretation solution_at(const NestedSystem& system, const Lts& lts, std::size_t level)
{
    ElaborationTrace trace = elaborate_traced(system, lts);
    if (level >= trace.levels.size())
        throw std::invalid_argument("nested system level out of range");
    return std::move(trace.levels[level].solution);
}

} // namespace nusim
