#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nusim/aut.hpp"
#include "nusim/charform.hpp"
#include "nusim/declarations.hpp"
#include "nusim/lts.hpp"
#include "nusim/relations.hpp"

// Cross-verification harness: computes every behavioural relation twice —
// relationally (fixed points of transformers) and logically (elaborated
// characteristic systems) — and checks the two routes plus the algebraic
// identities that connect them, over given or generated transition systems.

namespace nusim {

// Hand-built instances used throughout the suite.

// 0 --a--> 1, with 1 deadlocked.
inline Lts classic_two_state_chain() { return Lts(2, {{0, "a", 1}}); }

// Single state with a- and b-loops.
inline Lts classic_one_state_loop() { return Lts(1, {{0, "a", 0}, {0, "b", 0}}); }

// a.(b+c) rooted at 0 versus a.b + a.c rooted at 4: the right root is
// simulated by the left one but not conversely, and that remaining pair
// drops out from 2-nested simulation upward.
inline Lts classic_branching_choice()
{
    return Lts(9, {{0, "a", 1},
                   {1, "b", 2},
                   {1, "c", 3},
                   {4, "a", 5},
                   {5, "b", 6},
                   {4, "a", 7},
                   {7, "c", 8}});
}

// a.b rooted at 0 versus a.b + a rooted at 3: simulation equivalent but
// not bisimilar (the bare a-move to deadlocked 6 cannot be matched).
inline Lts classic_extra_a_branch()
{
    return Lts(7, {{0, "a", 1}, {1, "b", 2}, {3, "a", 4}, {4, "b", 5}, {3, "a", 6}});
}

inline std::vector<Lts> classic_corpus()
{
    return {classic_two_state_chain(), classic_one_state_loop(), classic_branching_choice(),
            classic_extra_a_branch()};
}

// Deterministic corpus: instance k has (k mod max_states)+1 states, cycles
// through the densities, and is generated from seed+k.
inline std::vector<Lts> make_random_corpus(std::size_t count, std::size_t max_states,
                                           const std::vector<std::string>& actions,
                                           const std::vector<double>& densities,
                                           std::uint64_t seed)
{
    if (max_states == 0) throw std::invalid_argument("max_states must be at least 1");
    if (densities.empty()) throw std::invalid_argument("densities must be nonempty");
    std::vector<Lts> corpus;
    corpus.reserve(count);
    for (std::size_t k = 0; k < count; ++k)
        corpus.push_back(generate_random((k % max_states) + 1, actions,
                                         densities[k % densities.size()], seed + k));
    return corpus;
}

// The full battery of relation kinds exercised by default.
inline std::vector<RelationKind> default_kinds()
{
    std::vector<RelationKind> kinds = {RelationKind::sim(), RelationKind::opsim(),
                                       RelationKind::bisim(), RelationKind::simeq()};
    for (int n = 2; n <= 4; ++n) {
        kinds.push_back(RelationKind::nsim(n));
        kinds.push_back(RelationKind::nopsim(n));
    }
    return kinds;
}

// Transformer whose greatest fixed point is preorder(kind); simulation
// equivalence is an intersection of two fixed points, not one itself.
inline std::optional<Transformer> transformer_for(const RelationKind& kind, const Lts& lts)
{
    using Family = RelationKind::Family;
    const Transformer base = Transformer::base();
    switch (kind.family) {
    case Family::Sim: return base;
    case Family::OpSim: return Transformer::tilde(base);
    case Family::Bisim: return Transformer::cap(base, Transformer::tilde(base));
    case Family::SimEq: return std::nullopt;
    case Family::NestedSim:
        if (kind.depth == 1) return base;
        return Transformer::cap(base, preorder(RelationKind::nopsim(kind.depth - 1), lts));
    case Family::NestedOpSim:
        if (kind.depth == 1) return Transformer::tilde(base);
        return Transformer::cap(Transformer::tilde(base),
                                preorder(RelationKind::nsim(kind.depth - 1), lts));
    }
    return std::nullopt;
}

// A transformer and the declaration expressing it: the target level of the
// characteristic system, with the lower levels pre-elaborated into env.
struct MatchedPair {
    Transformer transformer;
    Declaration declaration;
    ConstantEnv env;
};

inline std::optional<MatchedPair> matched_pair(const RelationKind& kind, const Lts& lts)
{
    auto t = transformer_for(kind, lts);
    if (!t) return std::nullopt;
    CharSystem cs = char_system(kind, lts);
    ConstantEnv env = elaborate(cs.system, lts);
    Declaration d = cs.system.level(static_cast<std::size_t>(cs.target_level));
    return MatchedPair{std::move(*t), std::move(d), std::move(env)};
}

struct PropertyResult {
    std::string name;
    std::size_t checks = 0;
    std::size_t failures = 0;
    std::vector<std::string> witnesses;
};

class VerifyReport {
public:
    static constexpr std::size_t max_witnesses = 3;

    void record(std::string_view name, bool ok,
                const std::function<std::string()>& witness = {})
    {
        PropertyResult& p = slot(name);
        ++p.checks;
        if (!ok) {
            ++p.failures;
            if (witness && p.witnesses.size() < max_witnesses) p.witnesses.push_back(witness());
        }
    }

    // Order-independent given that both reports list properties in the
    // same (code-defined) order; counts add, witnesses keep the cap.
    void merge(const VerifyReport& other)
    {
        for (const PropertyResult& theirs : other.properties_) {
            PropertyResult& mine = slot(theirs.name);
            mine.checks += theirs.checks;
            mine.failures += theirs.failures;
            for (const std::string& w : theirs.witnesses) {
                if (mine.witnesses.size() >= max_witnesses) break;
                mine.witnesses.push_back(w);
            }
        }
    }

    bool all_passed() const
    {
        for (const PropertyResult& p : properties_)
            if (p.failures != 0) return false;
        return true;
    }

    const std::vector<PropertyResult>& properties() const { return properties_; }

    std::string to_text() const
    {
        std::string out;
        for (const PropertyResult& p : properties_) {
            out += p.name + ": " + std::to_string(p.checks) + " checks, " +
                   std::to_string(p.failures) + " failures  [" +
                   (p.failures == 0 ? "PASS" : "FAIL") + "]\n";
            for (const std::string& w : p.witnesses) {
                out += "  witness:\n";
                std::size_t start = 0;
                while (start <= w.size()) {
                    std::size_t end = w.find('\n', start);
                    if (end == std::string::npos) end = w.size();
                    out += "    " + w.substr(start, end - start) + "\n";
                    if (end == w.size()) break;
                    start = end + 1;
                }
            }
        }
        out += std::string("overall: ") + (all_passed() ? "PASS" : "FAIL") + "\n";
        return out;
    }

private:
    PropertyResult& slot(std::string_view name)
    {
        for (PropertyResult& p : properties_)
            if (p.name == name) return p;
        properties_.push_back(PropertyResult{std::string(name), 0, 0, {}});
        return properties_.back();
    }

    std::vector<PropertyResult> properties_;
};

struct VerifyOptions {
    std::vector<RelationKind> kinds = default_kinds();
    std::size_t samples = 50;
    std::uint64_t seed = 0;
};

namespace detail {

inline std::string witness_lts(const Lts& lts) { return "lts:\n" + render_aut(lts); }

// Covers all four combinator shapes.
inline std::vector<Transformer> transformer_suite(const Lts& lts)
{
    const Transformer base = Transformer::base();
    return {base, Transformer::tilde(base), Transformer::cap(base, Transformer::tilde(base)),
            Transformer::cap(base, Relation::identity(lts.num_processes())),
            Transformer::cap(Transformer::tilde(base), preorder(RelationKind::sim(), lts))};
}

} // namespace detail

inline VerifyReport verify_lts(const Lts& lts, const VerifyOptions& options)
{
    VerifyReport report;
    const std::size_t n = lts.num_processes();
    std::mt19937_64 rng(options.seed);
    const auto lts_witness = [&lts](const std::string& detail) {
        return [&lts, detail] { return detail::witness_lts(lts) + "\n" + detail; };
    };

    // Two-route agreement, solver bounds, and the phi transfer, per kind.
    for (const RelationKind& kind : options.kinds) {
        const PreorderTrace rel = preorder_traced(kind, lts);
        const CharTrace chr = characterized_relation_traced(char_system(kind, lts), lts);

        bool ok = chr.relation == rel.relation;
        report.record("characterization", ok,
                      lts_witness("kind: " + kind.to_string() + "\nrelational route:\n" +
                                  render_pairs(rel.relation) + "declaration route:\n" +
                                  render_pairs(chr.relation)));

        bool bounds_ok = true;
        for (std::size_t count : rel.iteration_counts)
            if (count > n * n + 1) bounds_ok = false;
        for (const FixpointResult& level : chr.levels)
            if (level.iterations > level.solution.index_count() * n + 1) bounds_ok = false;
        report.record("solver-bounds", bounds_ok,
                      lts_witness("kind: " + kind.to_string() + " exceeded an iteration bound"));

        if (auto mp = matched_pair(kind, lts)) {
            const Interpretation via_relation = phi(gfp_rel(mp->transformer, lts));
            const Interpretation via_logic = gfp(mp->declaration, lts, mp->env).solution;
            report.record("phi-transfer", via_relation == via_logic,
                          lts_witness("kind: " + kind.to_string()));
        }
    }

    // One-step agreement of declaration and transformer through phi.
    report.record("expresses-sim",
                  expresses_check(decl_sim(lts), Transformer::base(), lts, options.samples, rng()),
                  lts_witness("decl_sim vs base transformer"));
    report.record("expresses-opsim",
                  expresses_check(decl_opsim(lts), Transformer::tilde(Transformer::base()), lts,
                                  options.samples, rng()),
                  lts_witness("decl_opsim vs tilde transformer"));

    const std::vector<Transformer> suite = detail::transformer_suite(lts);

    // nu of the tilde'd transformer is the inverse of nu of the transformer.
    for (std::size_t i = 0; i < suite.size(); ++i) {
        const bool ok =
            gfp_rel(Transformer::tilde(suite[i]), lts) == inverse(gfp_rel(suite[i], lts));
        report.record("nu-tilde-inverse", ok,
                      lts_witness("suite transformer #" + std::to_string(i)));
    }

    // tilde(t cap A) = tilde(t) cap inverse(A), pointwise on random input.
    for (std::size_t k = 0; k < options.samples; ++k) {
        const Relation s = random_relation(n, rng);
        const Relation a = random_relation(n, rng);
        for (const Transformer& t :
             {Transformer::base(), Transformer::tilde(Transformer::base())}) {
            const bool ok = apply(Transformer::tilde(Transformer::cap(t, a)), lts, s) ==
                            apply(Transformer::cap(Transformer::tilde(t), inverse(a)), lts, s);
            report.record("tilde-cap", ok,
                          lts_witness("sample " + std::to_string(k) + ":\nS:\n" + render_pairs(s) +
                                      "A:\n" + render_pairs(a)));
        }
    }

    // Monotonicity of every suite transformer on random nested inputs.
    for (std::size_t k = 0; k < options.samples; ++k) {
        const Relation s1 = random_relation(n, rng);
        const Relation s2 = s1 | random_relation(n, rng);
        for (std::size_t i = 0; i < suite.size(); ++i) {
            const bool ok = apply(suite[i], lts, s1).is_subset_of(apply(suite[i], lts, s2));
            report.record("monotone", ok,
                          lts_witness("suite transformer #" + std::to_string(i)));
        }
    }

    // Every post-fixed point lies below the greatest fixed point.
    for (std::size_t i = 0; i < suite.size(); ++i) {
        const Relation top = gfp_rel(suite[i], lts);
        for (std::size_t k = 0; k < options.samples; ++k) {
            Relation t = random_relation(n, rng);
            while (true) {
                Relation next = t & apply(suite[i], lts, t);
                if (next == t) break;
                t = next;
            }
            report.record("post-fixed-below-gfp", t.is_subset_of(top),
                          lts_witness("suite transformer #" + std::to_string(i)));
        }
    }

    // phi is a bijection respecting intersections.
    for (std::size_t k = 0; k < options.samples; ++k) {
        const Relation s = random_relation(n, rng);
        report.record("phi-roundtrip", phi_inverse(phi(s)) == s,
                      lts_witness("relation:\n" + render_pairs(s)));
        const Relation a1 = random_relation(n, rng);
        const Relation a2 = random_relation(n, rng);
        const Interpretation meet_of_images = [&] {
            Interpretation out(n, n);
            const Interpretation i1 = phi(a1);
            const Interpretation i2 = phi(a2);
            for (std::size_t p = 0; p < n; ++p) out.assign(p, i1.at(p) & i2.at(p));
            return out;
        }();
        report.record("phi-intersection", phi(a1 & a2) == meet_of_images,
                      lts_witness("sample " + std::to_string(k)));
    }

    // Order-theoretic sanity of the whole family.
    {
        const Relation sim = preorder(RelationKind::sim(), lts);
        const Relation opsim = preorder(RelationKind::opsim(), lts);
        const Relation bisim = preorder(RelationKind::bisim(), lts);
        const Relation simeq = preorder(RelationKind::simeq(), lts);
        std::vector<Relation> nsim = {sim};
        std::vector<Relation> nopsim = {opsim};
        for (int d = 2; d <= 4; ++d) {
            nsim.push_back(preorder(RelationKind::nsim(d), lts));
            nopsim.push_back(preorder(RelationKind::nopsim(d), lts));
        }

        const auto check = [&](const std::string& what, bool ok) {
            report.record("hierarchy", ok, lts_witness(what));
        };
        for (std::size_t d = 1; d < nsim.size(); ++d) {
            check("nsim:" + std::to_string(d + 1) + " included in nsim:" + std::to_string(d),
                  nsim[d].is_subset_of(nsim[d - 1]));
            check("nopsim:" + std::to_string(d + 1) + " included in nopsim:" + std::to_string(d),
                  nopsim[d].is_subset_of(nopsim[d - 1]));
        }
        for (std::size_t d = 0; d < nsim.size(); ++d) {
            check("bisim included in nsim:" + std::to_string(d + 1),
                  bisim.is_subset_of(nsim[d]));
            check("bisim included in nopsim:" + std::to_string(d + 1),
                  bisim.is_subset_of(nopsim[d]));
            check("nopsim:" + std::to_string(d + 1) + " is the inverse of nsim:" +
                      std::to_string(d + 1),
                  nopsim[d] == inverse(nsim[d]));
        }
        check("bisim included in simeq", bisim.is_subset_of(simeq));
        check("simeq included in sim", simeq.is_subset_of(sim));
        check("simeq included in opsim", simeq.is_subset_of(opsim));
        check("simeq is sim meet opsim", simeq == (sim & opsim));
        check("bisim symmetric", bisim.is_symmetric());
        check("simeq symmetric", simeq.is_symmetric());
        for (const RelationKind& kind : options.kinds) {
            const Relation r = preorder(kind, lts);
            check(kind.to_string() + " reflexive", r.is_reflexive());
            check(kind.to_string() + " transitive", r.is_transitive());
        }
    }

    return report;
}

// Corpus instance k runs with seed+k, so the merged report is independent
// of evaluation order.
inline VerifyReport verify_corpus(const std::vector<Lts>& corpus, const VerifyOptions& options)
{
    VerifyReport report;
    for (std::size_t k = 0; k < corpus.size(); ++k) {
        VerifyOptions per = options;
        per.seed = options.seed + k;
        report.merge(verify_lts(corpus[k], per));
    }
    return report;
}

} // namespace nusim
