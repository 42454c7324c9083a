#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "nusim/bitset.hpp"

using nusim::Bitset;

namespace {

std::set<std::size_t> as_set(const Bitset& b)
{
    const auto v = b.elements();
    return {v.begin(), v.end()};
}

Bitset from_set(std::size_t size, const std::set<std::size_t>& s)
{
    Bitset b(size);
    for (std::size_t i : s) b.set(i);
    return b;
}

} // namespace

TEST_CASE( "Bitset none and all" )
{
    const Bitset none = Bitset::none(5);
    CHECK( none.size() == 5 );
    CHECK( none.count() == 0 );
    CHECK_FALSE( none.any() );

    const Bitset all = Bitset::all(5);
    CHECK( all.count() == 5 );
    CHECK( all.any() );
    for (std::size_t i = 0; i < 5; ++i) CHECK( all.test(i) );

    CHECK( Bitset::all(0).count() == 0 );
    CHECK( none.complement() == all );
    CHECK( all.complement() == none );
}

TEST_CASE( "Bitset set, reset and elements" )
{
    Bitset b(10);
    b.set(3);
    b.set(7);
    b.set(3);
    CHECK( b.count() == 2 );
    CHECK( b.test(3) );
    CHECK( b.test(7) );
    CHECK_FALSE( b.test(0) );
    CHECK( b.elements() == std::vector<std::size_t>{3, 7} );

    b.reset(3);
    b.reset(0);
    CHECK( b.elements() == std::vector<std::size_t>{7} );
}

TEST_CASE( "Bitset equality ignores nothing and order of operations" )
{
    Bitset a(70);
    Bitset b(70);
    a.set(0);
    a.set(69);
    b.set(69);
    b.set(0);
    CHECK( a == b );
    b.reset(69);
    CHECK( a != b );
}

TEST_CASE( "Bitset complement stays inside the universe" )
{
    // Word boundaries are where stray high bits would leak.
    for (std::size_t size : {1u, 63u, 64u, 65u, 127u, 128u, 130u}) {
        Bitset b(size);
        b.set(0);
        const Bitset c = b.complement();
        CHECK( c.count() == size - 1 );
        CHECK_FALSE( c.test(0) );
        CHECK( (b | c) == Bitset::all(size) );
        CHECK( (b & c) == Bitset::none(size) );
        CHECK( c.complement() == b );
    }
}

TEST_CASE( "Bitset operations agree with a set model" )
{
    std::mt19937_64 rng(20260814);
    for (std::size_t size : {1u, 7u, 63u, 64u, 65u, 130u}) {
        for (int round = 0; round < 30; ++round) {
            std::set<std::size_t> ma;
            std::set<std::size_t> mb;
            for (std::size_t i = 0; i < size; ++i) {
                if (rng() & 1u) ma.insert(i);
                if (rng() & 1u) mb.insert(i);
            }
            const Bitset a = from_set(size, ma);
            const Bitset b = from_set(size, mb);

            CHECK( as_set(a) == ma );
            CHECK( a.count() == ma.size() );
            CHECK( a.any() == !ma.empty() );

            std::set<std::size_t> m_and;
            std::set<std::size_t> m_or;
            std::set<std::size_t> m_not;
            for (std::size_t i = 0; i < size; ++i) {
                if (ma.contains(i) && mb.contains(i)) m_and.insert(i);
                if (ma.contains(i) || mb.contains(i)) m_or.insert(i);
                if (!ma.contains(i)) m_not.insert(i);
            }
            CHECK( as_set(a & b) == m_and );
            CHECK( as_set(a | b) == m_or );
            CHECK( as_set(a.complement()) == m_not );

            CHECK( a.is_subset_of(b) == std::includes(mb.begin(), mb.end(),
                                                      ma.begin(), ma.end()) );
            CHECK( a.intersects(b) == !m_and.empty() );
            CHECK( (a == b) == (ma == mb) );

            Bitset acc = a;
            acc &= b;
            CHECK( acc == (a & b) );
            acc = a;
            acc |= b;
            CHECK( acc == (a | b) );
        }
    }
}
