#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "nusim/decl_io.hpp"
#include "nusim/declarations.hpp"
#include "nusim/formula.hpp"
#include "nusim/formula_parser.hpp"
#include "nusim/lts.hpp"

#include "oracles.hpp"

using nusim::ConstName;
using nusim::ConstantEnv;
using nusim::Declaration;
using nusim::Formula;
using nusim::Interpretation;
using nusim::Lts;
using nusim::NestedSystem;
using nusim::ParseError;

namespace {

Interpretation from_sets(const std::vector<std::set<std::size_t>>& sets, std::size_t n)
{
    Interpretation sigma(sets.size(), n);
    for (std::size_t i = 0; i < sets.size(); ++i) {
        nusim::Bitset m(n);
        for (std::size_t p : sets[i]) m.set(p);
        sigma.assign(i, m);
    }
    return sigma;
}

std::vector<std::set<std::size_t>> to_sets(const Interpretation& sigma)
{
    std::vector<std::set<std::size_t>> out(sigma.index_count());
    for (std::size_t i = 0; i < sigma.index_count(); ++i) out[i] = oracle::to_set(sigma.at(i));
    return out;
}

} // namespace

TEST_CASE( "Declaration validates levels, variables and constants" )
{
    CHECK_THROWS_AS( Declaration(-1, {Formula::tt()}), std::invalid_argument );
    CHECK_THROWS_AS( Declaration(0, {}), std::invalid_argument );
    CHECK_THROWS_AS( Declaration(0, {Formula::var(1)}), std::invalid_argument );
    CHECK_THROWS_AS( Declaration(0, {Formula::nu(0, 0)}), std::invalid_argument );
    CHECK_THROWS_AS( Declaration(1, {Formula::nu(1, 0)}), std::invalid_argument );
    CHECK_THROWS_AS( Declaration(1, {Formula::nu(0, 1)}), std::invalid_argument );
    CHECK_NOTHROW( Declaration(1, {Formula::box("a", Formula::nu(0, 0))}) );
    CHECK_NOTHROW( Declaration(0, {Formula::var(0)}) );

    const Declaration d(1, {Formula::nu(0, 0), Formula::var(0)});
    CHECK( d.level() == 1 );
    CHECK( d.index_count() == 2 );
    CHECK( d.body(1) == Formula::var(0) );
    CHECK_THROWS_AS( d.body(2), std::invalid_argument );
    CHECK( d.with_level(3).level() == 3 );
    CHECK_THROWS_AS( d.with_level(0), std::invalid_argument );
}

TEST_CASE( "apply performs one parallel evaluation step" )
{
    const Lts chain(2, {{0, "a", 1}});
    const Declaration d(0, {Formula::diamond("a", Formula::var(1)), Formula::var(0)});

    Interpretation sigma(2, 2);
    sigma.assign(0, nusim::Bitset::all(2));
    sigma.assign(1, nusim::Bitset::all(2));
    const Interpretation next = nusim::apply(d, chain, {}, sigma);
    CHECK( oracle::to_set(next.at(0)) == std::set<std::size_t>{0} );
    CHECK( oracle::to_set(next.at(1)) == std::set<std::size_t>{0, 1} );

    CHECK_THROWS_AS( nusim::apply(d, chain, {}, Interpretation(1, 2)), std::invalid_argument );
}

TEST_CASE( "apply agrees with the per-process oracle on random declarations" )
{
    std::mt19937_64 rng(31);
    const std::vector<std::string> actions = {"a", "b"};
    for (int round = 0; round < 80; ++round) {
        const std::size_t n = 1 + round % 5;
        const Lts lts = nusim::generate_random(n, actions, 0.45, rng());
        const std::size_t k = 1 + round % 3;

        std::vector<Formula> bodies;
        for (std::size_t i = 0; i < k; ++i)
            bodies.push_back(oracle::random_formula(rng, 2, k, actions));
        const Declaration d(0, bodies);

        std::vector<std::set<std::size_t>> sigma_sets(k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t p = 0; p < n; ++p)
                if (rng() & 1u) sigma_sets[i].insert(p);
        const Interpretation sigma = from_sets(sigma_sets, n);

        const Interpretation stepped = nusim::apply(d, lts, {}, sigma);
        for (std::size_t i = 0; i < k; ++i)
            CHECK( oracle::to_set(stepped.at(i)) ==
                   oracle::sat_set(d.body(i), lts, {}, sigma_sets) );
    }
}

TEST_CASE( "The derived function is monotone" )
{
    std::mt19937_64 rng(77);
    const std::vector<std::string> actions = {"a", "b"};
    for (int round = 0; round < 60; ++round) {
        const std::size_t n = 1 + round % 5;
        const Lts lts = nusim::generate_random(n, actions, 0.4, rng());
        const std::size_t k = 1 + round % 3;
        std::vector<Formula> bodies;
        for (std::size_t i = 0; i < k; ++i)
            bodies.push_back(oracle::random_formula(rng, 3, k, actions));
        const auto f = nusim::derived_function(Declaration(0, bodies), lts);

        Interpretation lo(k, n);
        Interpretation hi(k, n);
        for (std::size_t i = 0; i < k; ++i) {
            nusim::Bitset small(n);
            nusim::Bitset big(n);
            for (std::size_t p = 0; p < n; ++p) {
                const bool in_small = (rng() & 1u) != 0;
                if (in_small) small.set(p);
                if (in_small || (rng() & 1u)) big.set(p);
            }
            lo.assign(i, small);
            hi.assign(i, big);
        }
        CHECK( f(lo).pointwise_subset_of(f(hi)) );
    }
}

TEST_CASE( "gfp equals the union of all post-fixed interpretations" )
{
    std::mt19937_64 rng(55);
    const std::vector<std::string> actions = {"a", "b"};
    for (int round = 0; round < 60; ++round) {
        const std::size_t n = 1 + round % 3;
        const std::size_t k = 1 + round % 4;
        if (n * k > 12) continue;
        const Lts lts = nusim::generate_random(n, actions, 0.5, rng());
        std::vector<Formula> bodies;
        for (std::size_t i = 0; i < k; ++i)
            bodies.push_back(oracle::random_formula(rng, 2, k, actions));
        const Declaration d(0, bodies);

        const nusim::FixpointResult result = nusim::gfp(d, lts);
        CHECK( to_sets(result.solution) == oracle::gfp_interp_union(d, lts) );
        CHECK( result.iterations <= k * n + 1 );
        CHECK( nusim::apply(d, lts, {}, result.solution) == result.solution );
    }
}

TEST_CASE( "gfp solves the invariance example" )
{
    // X1 = <a>tt & [a]X1 & [b]X1 — "invariantly able to do an a" — with a
    // padding index X0 = tt to keep the index set dense.
    const Declaration d(
        0, {Formula::tt(), nusim::parse_formula("<a>tt & [a]X1 & [b]X1")});

    const Lts loop(1, {{0, "a", 0}, {0, "b", 0}});
    CHECK( oracle::to_set(nusim::gfp(d, loop).solution.at(1)) == std::set<std::size_t>{0} );

    const Lts chain(2, {{0, "a", 1}}, {"b"});
    CHECK( oracle::to_set(nusim::gfp(d, chain).solution.at(1)).empty() );

    // Mixed verdict: a cycle that can always do a, and an escape into a
    // state that cannot.
    const Lts mixed(3, {{0, "a", 0}, {0, "b", 1}, {1, "a", 2}, {2, "b", 2}});
    CHECK( oracle::to_set(nusim::gfp(d, mixed).solution.at(1)).empty() );
    const Lts cycle(2, {{0, "a", 1}, {1, "a", 0}}, {"b"});
    CHECK( oracle::to_set(nusim::gfp(d, cycle).solution.at(1)) ==
           std::set<std::size_t>{0, 1} );
}

TEST_CASE( "NestedSystem validates level structure" )
{
    const Declaration d0(0, {Formula::tt()});
    const Declaration d1(1, {Formula::nu(0, 0)});
    CHECK_THROWS_AS( NestedSystem(std::vector<Declaration>{}), std::invalid_argument );
    CHECK_THROWS_AS( NestedSystem({d1}), std::invalid_argument );
    CHECK_THROWS_AS( NestedSystem({d0, d1.with_level(2)}), std::invalid_argument );
    CHECK_THROWS_AS( NestedSystem({d0, Declaration(1, {Formula::tt(), Formula::ff()})}),
                     std::invalid_argument );

    const NestedSystem system({d0, d1});
    CHECK( system.num_levels() == 2 );
    CHECK( system.index_count() == 1 );
    CHECK( system.level(1) == d1 );
    CHECK_THROWS_AS( system.level(2), std::invalid_argument );
}

TEST_CASE( "elaborate solves levels bottom-up" )
{
    const Lts chain(2, {{0, "a", 1}});
    // Level 0: X0 = states that can do a; X1 = all states.
    // Level 1: X0 = [a](nu0:0), X1 = nu0:0 & X1 (gfp in X1 = nu0:0).
    const NestedSystem system({
        Declaration(0, {nusim::parse_formula("<a>tt"), Formula::tt()}),
        Declaration(1, {nusim::parse_formula("[a]nu0:0"),
                        nusim::parse_formula("nu0:0 & X1")}),
    });

    const nusim::ElaborationTrace trace = nusim::elaborate_traced(system, chain);
    REQUIRE( trace.levels.size() == 2 );
    CHECK( oracle::to_set(trace.constants.at(ConstName{0, 0})) == std::set<std::size_t>{0} );
    CHECK( oracle::to_set(trace.constants.at(ConstName{0, 1})) == std::set<std::size_t>{0, 1} );
    // 1 has no a-successors, so [a]nu0:0 holds there; 0's only successor is
    // 1, outside nu0:0.
    CHECK( oracle::to_set(trace.constants.at(ConstName{1, 0})) == std::set<std::size_t>{1} );
    CHECK( oracle::to_set(trace.constants.at(ConstName{1, 1})) == std::set<std::size_t>{0} );

    const ConstantEnv env = nusim::elaborate(system, chain);
    CHECK( env.at(ConstName{1, 0}) == trace.constants.at(ConstName{1, 0}) );
    CHECK( nusim::solution_at(system, chain, 0) == trace.levels[0].solution );
    CHECK_THROWS_AS( nusim::solution_at(system, chain, 2), std::invalid_argument );
}

TEST_CASE( "elaborate matches the exhaustive oracle level by level" )
{
    std::mt19937_64 rng(13);
    const std::vector<std::string> actions = {"a", "b"};
    for (int round = 0; round < 40; ++round) {
        const std::size_t n = 1 + round % 3;
        const std::size_t k = 1 + round % 2;
        const Lts lts = nusim::generate_random(n, actions, 0.5, rng());

        std::vector<ConstName> level0_consts;
        for (std::size_t i = 0; i < k; ++i) level0_consts.push_back(ConstName{0, i});
        std::vector<Formula> level0;
        std::vector<Formula> level1;
        for (std::size_t i = 0; i < k; ++i) {
            level0.push_back(oracle::random_formula(rng, 2, k, actions));
            level1.push_back(oracle::random_formula(rng, 2, k, actions, level0_consts));
        }
        const NestedSystem system({Declaration(0, level0), Declaration(1, level1)});
        const nusim::ElaborationTrace trace = nusim::elaborate_traced(system, lts);

        const auto sol0 = oracle::gfp_interp_union(system.level(0), lts);
        CHECK( to_sets(trace.levels[0].solution) == sol0 );

        std::map<ConstName, std::set<std::size_t>> env_sets;
        for (std::size_t i = 0; i < k; ++i) env_sets[ConstName{0, i}] = sol0[i];
        CHECK( to_sets(trace.levels[1].solution) ==
               oracle::gfp_interp_union(system.level(1), lts, env_sets) );
    }
}

TEST_CASE( "Declaration files parse and render" )
{
    const std::string text = "target-level: 1\n"
                             "level 0:\n"
                             "X0 = <a>tt ;\n"
                             "X1 = tt ;\n"
                             "level 1:\n"
                             "X0 = [a]nu0:0 ;\n"
                             "X1 = nu0:0 &\n"
                             "     X1 ;\n";
    const nusim::DeclarationFile file = nusim::parse_declaration_file(text);
    CHECK( file.target_level == 1 );
    CHECK( file.system.num_levels() == 2 );
    CHECK( file.system.index_count() == 2 );
    CHECK( file.system.level(0).body(0) == nusim::parse_formula("<a>tt") );
    CHECK( file.system.level(1).body(1) ==
           Formula::conj(Formula::nu(0, 0), Formula::var(1)) );

    const std::string rendered = nusim::render_declaration_file(file.system, file.target_level);
    const nusim::DeclarationFile reparsed = nusim::parse_declaration_file(rendered);
    CHECK( reparsed.system == file.system );
    CHECK( reparsed.target_level == file.target_level );

    const std::string no_target = nusim::render_declaration_file(file.system);
    CHECK( nusim::parse_declaration_file(no_target).target_level == std::nullopt );
}

TEST_CASE( "Declaration files reject malformed input" )
{
    CHECK_THROWS_AS( nusim::parse_declaration_file(""), ParseError );
    CHECK_THROWS_AS( nusim::parse_declaration_file("target-level: 0\n"), ParseError );
    CHECK_THROWS_AS( nusim::parse_declaration_file("target-level: x\nlevel 0:\nX0 = tt ;\n"),
                     ParseError );
    CHECK_THROWS_AS( nusim::parse_declaration_file("target-level: 3\nlevel 0:\nX0 = tt ;\n"),
                     ParseError );
    CHECK_THROWS_AS( nusim::parse_declaration_file("level 1:\nX0 = tt ;\n"), ParseError );
    CHECK_THROWS_AS( nusim::parse_declaration_file("level 0:\n"), ParseError );
    CHECK_THROWS_AS( nusim::parse_declaration_file("level 0\nX0 = tt ;\n"), ParseError );
    CHECK_THROWS_AS( nusim::parse_declaration_file("level 0:\nX0 = tt ;\nX0 = ff ;\n"),
                     ParseError );
    CHECK_THROWS_AS( nusim::parse_declaration_file("level 0:\nX1 = tt ;\n"), ParseError );
    CHECK_THROWS_AS( nusim::parse_declaration_file("level 0:\nX0 = tt\n"), ParseError );
    CHECK_THROWS_AS( nusim::parse_declaration_file("level 0:\nX0 = tt ; ff\n"), ParseError );
    CHECK_THROWS_AS( nusim::parse_declaration_file("level 0:\nX0 tt ;\n"), ParseError );
    CHECK_THROWS_AS( nusim::parse_declaration_file("level 0:\nX0 = (tt ;\n"), ParseError );
    CHECK_THROWS_AS( nusim::parse_declaration_file("level 0:\nX0 = nu0:0 ;\n"), ParseError );
    CHECK_THROWS_AS(
        nusim::parse_declaration_file("level 0:\nX0 = tt ;\nlevel 1:\nX0 = tt ;\nX1 = ff ;\n"),
        ParseError );

    try {
        nusim::parse_declaration_file("level 0:\nX0 = tt &\n& ff ;\n");
        FAIL( "expected a parse error" );
    } catch (const ParseError& e) {
        CHECK( e.line() == 2 );
    }
}
