#pragma once

#include <map>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "nusim/bitset.hpp"
#include "nusim/formula.hpp"
#include "nusim/lts.hpp"

namespace nusim {

// Assignment of a process set to each variable X0..X{k-1}. Interpretations
// over the same shape form a complete lattice under pointwise inclusion;
// fixed-point iteration walks down from top().
class Interpretation {
public:
    Interpretation() = default;

    Interpretation(std::size_t index_count, std::size_t n_processes)
        : n_(n_processes), sets_(index_count, Bitset::none(n_processes))
    {
    }

    static Interpretation top(std::size_t index_count, std::size_t n_processes)
    {
        Interpretation s(index_count, n_processes);
        for (auto& set : s.sets_) set = Bitset::all(n_processes);
        return s;
    }

    std::size_t index_count() const { return sets_.size(); }
    std::size_t num_processes() const { return n_; }

    const Bitset& at(std::size_t index) const
    {
        if (index >= sets_.size()) throw std::invalid_argument("variable index out of range");
        return sets_[index];
    }

    void assign(std::size_t index, Bitset value)
    {
        if (index >= sets_.size()) throw std::invalid_argument("variable index out of range");
        if (value.size() != n_) throw std::invalid_argument("process set has wrong width");
        sets_[index] = std::move(value);
    }

    bool pointwise_subset_of(const Interpretation& other) const
    {
        if (sets_.size() != other.sets_.size() || n_ != other.n_)
            throw std::invalid_argument("interpretations have different shapes");
        for (std::size_t i = 0; i < sets_.size(); ++i)
            if (!sets_[i].is_subset_of(other.sets_[i])) return false;
        return true;
    }

    friend bool operator==(const Interpretation&, const Interpretation&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Bitset> sets_;
};

// Binding of fixed-point constants (solutions of lower-level declarations)
// to process sets. Evaluation of a level-j formula only ever looks up
// constants of levels below j.
class ConstantEnv {
public:
    ConstantEnv() = default;

    void bind(ConstName name, Bitset value) { bindings_[name] = std::move(value); }

    bool contains(ConstName name) const { return bindings_.contains(name); }

    const Bitset& at(ConstName name) const
    {
        auto it = bindings_.find(name);
        if (it == bindings_.end())
            throw std::invalid_argument("unbound fixed-point constant " + name.to_string());
        return it->second;
    }

    friend bool operator==(const ConstantEnv&, const ConstantEnv&) = default;

private:
    std::map<ConstName, Bitset> bindings_;
};

namespace detail {

class Evaluator {
public:
    Evaluator(const Lts& lts, const ConstantEnv& env, const Interpretation* sigma)
        : lts_(lts), env_(env), sigma_(sigma)
    {
    }

    Bitset eval(const Formula& f)
    {
        if (auto it = memo_.find(f.id()); it != memo_.end()) return it->second;
        Bitset result = compute(f);
        memo_.emplace(f.id(), result);
        return result;
    }

private:
    Bitset compute(const Formula& f)
    {
        switch (f.kind()) {
        case Formula::Kind::True: return lts_.all_processes();
        case Formula::Kind::False: return Bitset::none(lts_.num_processes());
        case Formula::Kind::Var:
            if (!sigma_)
                throw std::logic_error("variable in formula evaluated without an interpretation");
            return sigma_->at(f.var_index());
        case Formula::Kind::Const: return env_.at(f.constant());
        case Formula::Kind::And: return eval(f.lhs()) & eval(f.rhs());
        case Formula::Kind::Or: return eval(f.lhs()) | eval(f.rhs());
        case Formula::Kind::Diamond:
            return lts_.may(lts_.require_action(f.action()), eval(f.child()));
        case Formula::Kind::Box:
            return lts_.must(lts_.require_action(f.action()), eval(f.child()));
        }
        throw std::logic_error("unreachable formula kind");
    }

    const Lts& lts_;
    const ConstantEnv& env_;
    const Interpretation* sigma_;
    std::unordered_map<const void*, Bitset> memo_;
};

} // namespace detail

// Denotation of a formula that may contain variables, relative to an
// interpretation of the variables and an environment for constants.
// Diamond is the may-transition preimage, box the must (all-successors)
// preimage. Shared subterms are evaluated once per call.
inline Bitset eval_open(const Formula& f, const Lts& lts, const ConstantEnv& env,
                        const Interpretation& sigma)
{
    return detail::Evaluator(lts, env, &sigma).eval(f);
}

// Denotation of a variable-free formula. A variable is a logic error here:
// closed-logic membership is the caller's contract.
inline Bitset eval_closed(const Formula& f, const Lts& lts, const ConstantEnv& env = {})
{
    return detail::Evaluator(lts, env, nullptr).eval(f);
}

} // namespace nusim
