#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "nusim/bitset.hpp"

namespace nusim {

using ActionId = std::size_t;
using ProcessId = std::size_t;

struct LabelledTransition {
    ProcessId src = 0;
    std::string label;
    ProcessId dst = 0;

    friend bool operator==(const LabelledTransition&, const LabelledTransition&) = default;

    friend bool operator<(const LabelledTransition& a, const LabelledTransition& b)
    {
        return std::tie(a.src, a.label, a.dst) < std::tie(b.src, b.label, b.dst);
    }
};

// Finite labelled transition system: processes 0..n-1, a fixed action
// alphabet, and a set of labelled transitions. Immutable after construction;
// safe to share for concurrent reads.
//
// The alphabet is frozen when the value is built: it is the set of labels
// appearing in the transitions plus any explicitly declared extra actions,
// sorted lexicographically. Every modal operation quantifies over exactly
// this alphabet, so a declared action with no transitions still matters
// (every process trivially satisfies its box over the empty set).
class Lts {
public:
    Lts(std::size_t n_processes,
        const std::vector<LabelledTransition>& transitions,
        const std::vector<std::string>& extra_actions = {},
        ProcessId initial_state = 0)
        : n_(n_processes), initial_(initial_state)
    {
        if (n_processes == 0)
            throw std::invalid_argument("an LTS needs at least one process");
        if (initial_state >= n_processes)
            throw std::invalid_argument("initial state out of range");

        std::vector<std::string> labels;
        for (const auto& t : transitions) labels.push_back(t.label);
        labels.insert(labels.end(), extra_actions.begin(), extra_actions.end());
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        for (const auto& l : labels) {
            if (l.empty())
                throw std::invalid_argument("action labels must be nonempty");
            if (l.find('"') != std::string::npos)
                throw std::invalid_argument("action labels must not contain '\"'");
        }
        labels_ = std::move(labels);
        for (ActionId a = 0; a < labels_.size(); ++a) label_ids_[labels_[a]] = a;

        succ_.assign(labels_.size() * n_, Bitset(n_));
        for (const auto& t : transitions) {
            if (t.src >= n_ || t.dst >= n_)
                throw std::invalid_argument("transition endpoint out of range");
            succ_[label_ids_.at(t.label) * n_ + t.src].set(t.dst);
        }
        n_transitions_ = 0;
        for (const auto& s : succ_) n_transitions_ += s.count();
    }

    std::size_t num_processes() const { return n_; }
    std::size_t num_actions() const { return labels_.size(); }
    std::size_t num_transitions() const { return n_transitions_; }
    ProcessId initial_state() const { return initial_; }

    const std::vector<std::string>& alphabet() const { return labels_; }

    const std::string& action_label(ActionId a) const
    {
        check_action(a);
        return labels_[a];
    }

    std::optional<ActionId> action_id(std::string_view label) const
    {
        auto it = label_ids_.find(std::string(label));
        if (it == label_ids_.end()) return std::nullopt;
        return it->second;
    }

    ActionId require_action(std::string_view label) const
    {
        auto id = action_id(label);
        if (!id)
            throw std::invalid_argument("unknown action \"" + std::string(label) +
                                        "\" (not in this LTS's alphabet)");
        return *id;
    }

    // { p' | p --a--> p' }
    const Bitset& successors(ProcessId p, ActionId a) const
    {
        check_process(p);
        check_action(a);
        return succ_[a * n_ + p];
    }

    // <a>M: processes with at least one a-successor in M.
    Bitset may(ActionId a, const Bitset& m) const
    {
        check_action(a);
        check_set(m);
        Bitset r(n_);
        for (ProcessId p = 0; p < n_; ++p)
            if (succ_[a * n_ + p].intersects(m)) r.set(p);
        return r;
    }

    // [a]M: processes all of whose a-successors lie in M. Contains every
    // process with no a-successors.
    Bitset must(ActionId a, const Bitset& m) const
    {
        check_action(a);
        check_set(m);
        Bitset r(n_);
        for (ProcessId p = 0; p < n_; ++p)
            if (succ_[a * n_ + p].is_subset_of(m)) r.set(p);
        return r;
    }

    Bitset all_processes() const { return Bitset::all(n_); }

    // Transition set, sorted by (src, label, dst).
    std::vector<LabelledTransition> transitions() const
    {
        std::vector<LabelledTransition> out;
        out.reserve(n_transitions_);
        for (ProcessId p = 0; p < n_; ++p)
            for (ActionId a = 0; a < labels_.size(); ++a)
                for (auto q : succ_[a * n_ + p].elements())
                    out.push_back({p, labels_[a], q});
        std::sort(out.begin(), out.end());
        return out;
    }

    // Optional display names, e.g. from a sidecar names file. Empty string
    // means unnamed; nonempty names must be unique.
    Lts with_display_names(std::vector<std::string> names) const
    {
        if (names.size() != n_)
            throw std::invalid_argument("need one display name entry per process");
        std::vector<std::string> sorted;
        for (const auto& s : names)
            if (!s.empty()) sorted.push_back(s);
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw std::invalid_argument("display names must be unique");
        Lts copy = *this;
        copy.names_ = std::move(names);
        return copy;
    }

    const std::string* display_name(ProcessId p) const
    {
        check_process(p);
        if (names_.empty() || names_[p].empty()) return nullptr;
        return &names_[p];
    }

    std::optional<ProcessId> process_by_name(std::string_view name) const
    {
        for (ProcessId p = 0; p < names_.size(); ++p)
            if (names_[p] == name) return p;
        return std::nullopt;
    }

    // Structural model equality; display names are presentation only and
    // do not participate.
    friend bool operator==(const Lts& a, const Lts& b)
    {
        return a.n_ == b.n_ && a.initial_ == b.initial_ && a.labels_ == b.labels_ &&
               a.succ_ == b.succ_;
    }

private:
    void check_process(ProcessId p) const
    {
        if (p >= n_) throw std::invalid_argument("unknown process " + std::to_string(p));
    }

    void check_action(ActionId a) const
    {
        if (a >= labels_.size())
            throw std::invalid_argument("unknown action id " + std::to_string(a));
    }

    void check_set(const Bitset& m) const
    {
        if (m.size() != n_)
            throw std::invalid_argument("process set has wrong universe size");
    }

    std::size_t n_ = 0;
    ProcessId initial_ = 0;
    std::vector<std::string> labels_;
    std::map<std::string, ActionId, std::less<>> label_ids_;
    std::vector<Bitset> succ_; // indexed a * n_ + p
    std::size_t n_transitions_ = 0;
    std::vector<std::string> names_;
};

// Random LTS: each candidate (p, a, q) triple is included independently with
// the given probability. A deterministic function of all four arguments,
// byte-stable across platforms.
inline Lts generate_random(std::size_t n_states, const std::vector<std::string>& actions,
                           double density, std::uint64_t seed)
{
    if (n_states == 0) throw std::invalid_argument("n_states must be at least 1");
    if (!(density >= 0.0 && density <= 1.0))
        throw std::invalid_argument("density must lie in [0, 1]");

    std::vector<std::string> labels = actions;
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

    std::mt19937_64 rng(seed);
    // Map the top 53 bits to [0, 1); avoids std::uniform_real_distribution,
    // whose output is implementation-defined.
    const auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    std::vector<LabelledTransition> transitions;
    for (ProcessId p = 0; p < n_states; ++p)
        for (const auto& label : labels)
            for (ProcessId q = 0; q < n_states; ++q)
                if (unit() < density) transitions.push_back({p, label, q});
    return Lts(n_states, transitions, labels);
}

} // namespace nusim
