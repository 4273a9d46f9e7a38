#include "support.hh"

#include <dpoly/schemes.hh>

#include <doctest.h>

using namespace dpoly;

namespace
{
    /// Each tuple is forced or in exactly one cell's linkage class.
    auto covers_exactly_once(const IdentityScheme & s) -> bool
    {
        std::vector<int> seen(tuple_count(s.n, s.arity), 0);
        for (auto & [t, v] : s.forced)
            ++seen[t];
        for (auto & c : s.cells)
            for (auto t : c.links)
                ++seen[t];
        return std::all_of(seen.begin(), seen.end(), [](int k) { return k == 1; });
    }

    auto pow(int b, int e) -> std::uint64_t
    {
        std::uint64_t r = 1;
        while (e--)
            r *= b;
        return r;
    }

    auto projection_wnu3(int n) -> OperationTable
    {
        // t(x,x,y) = x on pair tuples, first argument elsewhere.
        OperationTable t{n, 3, std::vector<Vertex>(tuple_count(n, 3))};
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z) {
                    Vertex v = static_cast<Vertex>(x);
                    if (x != y && y == z)
                        v = static_cast<Vertex>(y);
                    t.values[encode_tuple(n, {x, y, z})] = v;
                }
        return t;
    }
}

TEST_CASE("tuple codes")
{
    CHECK(encode_tuple(4, {0, 0, 1}) == 1);
    CHECK(encode_tuple(4, {1, 2, 3}) == 27);
    CHECK(decode_tuple(4, 3, 27) == std::vector<Vertex>{1, 2, 3});
    CHECK(tuple_count(5, 3) == 125);
}

TEST_CASE("cell counts")
{
    CHECK(scheme_majority(4).cells.size() == 24);
    CHECK(scheme_majority(2).cells.empty());
    CHECK(scheme_majority(5).cells.size() == 60);

    CHECK(scheme_wnu2(4).cells.size() == 6);
    CHECK(pow(4, 6) == 4096);
    CHECK(scheme_wnu2(5).cells.size() == 10);
    CHECK(pow(5, 10) == 9765625);
    CHECK(scheme_wnu2(2).cells.size() == 1);

    CHECK(scheme_wnu3(4).cells.size() == 36);
    CHECK(scheme_wnu3(5).cells.size() == 80);
    CHECK(scheme_wnu3(2).cells.size() == 2);
}

TEST_CASE("pq scheme shape")
{
    for (int n : {2, 4, 5}) {
        auto q = projection_wnu3(n);
        REQUIRE(satisfies_identities(q, SchemeKind::wnu3));
        auto s = scheme_p_given_q(Digraph(n), q);
        int pairs = n * (n - 1);
        CHECK(s.cells.size() == static_cast<std::size_t>(2 * pairs + n * (n - 1) * (n - 2)));
        CHECK(s.prefix.size() == static_cast<std::size_t>(pairs));
        for (std::size_t i = 0; i < s.prefix.size(); ++i) {
            auto [cell, value] = s.prefix[i];
            CHECK(cell == static_cast<int>(i));
            auto t = decode_tuple(n, 3, s.cells[cell].links.front());
            CHECK(t[0] == t[2]);
            CHECK(value == q({t[0], t[0], t[1]}));
        }
        CHECK(covers_exactly_once(s));
    }
    CHECK(scheme_p_given_q(Digraph(4), projection_wnu3(4)).cells.size() == 48);
    CHECK(scheme_p_given_q(Digraph(5), projection_wnu3(5)).cells.size() == 100);

    auto not_wnu = projection_wnu3(3);
    not_wnu.values[encode_tuple(3, {0, 0, 1})] = 2;
    CHECK_THROWS_AS(scheme_p_given_q(Digraph(3), not_wnu), DomainError);
    // A wnu3 that does not preserve the edges.
    auto min3 = OperationTable::parse(2, 3, "00000001");
    REQUIRE(satisfies_identities(min3, SchemeKind::wnu3));
    CHECK_THROWS_AS(scheme_p_given_q(Digraph::parse(2, "0110"), min3), DomainError);
    CHECK_THROWS_AS(scheme_for(SchemeKind::p_given_q, 3), DomainError);
}

TEST_CASE("every tuple is covered exactly once")
{
    for (int n = min_vertices; n <= max_vertices; ++n)
        for (auto kind : {SchemeKind::majority, SchemeKind::wnu2, SchemeKind::wnu3, SchemeKind::semilattice2}) {
            auto s = scheme_for(kind, n);
            CAPTURE(n);
            CAPTURE(to_string(kind));
            CHECK(s.arity == arity_of(kind));
            CHECK(covers_exactly_once(s));
            for (int x = 0; x < n; ++x) {
                auto diagonal = s.arity == 2 ? encode_tuple(n, {x, x}) : encode_tuple(n, {x, x, x});
                auto it = std::find_if(s.forced.begin(), s.forced.end(), [&](auto & f) { return f.first == diagonal; });
                REQUIRE(it != s.forced.end());
                CHECK(it->second == x);
            }
        }
}

TEST_CASE("wnu3 cell order: pair cells first, each linking its three tuples")
{
    auto s = scheme_wnu3(4);
    std::vector<std::pair<int, int>> pair_order;
    for (int c = 0; c < 12; ++c) {
        auto & links = s.cells[c].links;
        REQUIRE(links.size() == 3);
        auto t = decode_tuple(4, 3, links.front());
        CHECK(t[0] == t[1]);
        pair_order.emplace_back(t[0], t[2]);
        std::set<TupleCode> expected = {encode_tuple(4, {t[0], t[0], t[2]}), encode_tuple(4, {t[0], t[2], t[0]}),
            encode_tuple(4, {t[2], t[0], t[0]})};
        CHECK(std::set(links.begin(), links.end()) == expected);
    }
    CHECK(std::is_sorted(pair_order.begin(), pair_order.end()));
    for (std::size_t c = 12; c < s.cells.size(); ++c)
        CHECK(s.cells[c].links.size() == 1);
}

TEST_CASE("expand_to_table")
{
    auto maj = expand_to_table(scheme_majority(2), {});
    CHECK(maj.render() == "00010111");
    CHECK(satisfies_identities(maj, SchemeKind::majority));

    auto w = expand_to_table(scheme_wnu2(2), {0});
    CHECK(w.render() == "0001");

    auto s = scheme_wnu3(4);
    Assignment a(s.cells.size(), 3);
    for (int c = 0; c < 12; ++c)
        a[c] = 0;
    auto t = expand_to_table(s, a);
    for (int c = 0; c < 12; ++c)
        for (auto tuple : s.cells[c].links)
            CHECK(t.values[tuple] == 0);

    Assignment missing(s.cells.size(), 0);
    missing[5] = -1;
    CHECK_THROWS_AS(expand_to_table(s, missing), DomainError);
    CHECK_THROWS_AS(expand_to_table(s, Assignment(3, 0)), DomainError);
}

TEST_CASE("identity checks agree with the definitions")
{
    for (int i = 0; i < 2000; ++i) {
        int n = 2 + static_cast<int>(testing::rng()() % 2);
        OperationTable t3{n, 3, std::vector<Vertex>(tuple_count(n, 3))};
        OperationTable t2{n, 2, std::vector<Vertex>(tuple_count(n, 2))};
        // Bias towards tables that are nearly lawful so both outcomes occur.
        auto base = testing::rng()() % 2 ? expand_to_table(scheme_majority(n), Assignment(scheme_majority(n).cells.size(), 0))
                                          : expand_to_table(scheme_wnu3(n), Assignment(scheme_wnu3(n).cells.size(), 1));
        t3 = base;
        if (testing::rng()() % 2)
            t3.values[testing::rng()() % t3.values.size()] = static_cast<Vertex>(testing::rng()() % n);
        t2 = expand_to_table(scheme_wnu2(n), Assignment(scheme_wnu2(n).cells.size(), 1));
        if (testing::rng()() % 2)
            t2.values[testing::rng()() % t2.values.size()] = static_cast<Vertex>(testing::rng()() % n);

        auto v3 = testing::values_of(t3), v2 = testing::values_of(t2);
        REQUIRE(satisfies_identities(t3, SchemeKind::majority) == testing::is_majority(n, v3));
        REQUIRE(satisfies_identities(t3, SchemeKind::wnu3) == testing::is_wnu3(n, v3));
        REQUIRE(satisfies_identities(t2, SchemeKind::wnu2) == testing::is_wnu2(n, v2));
        REQUIRE(satisfies_identities(t2, SchemeKind::semilattice2) == testing::is_semilattice2(n, v2));
    }
}

TEST_CASE("projections are not wnu operations")
{
    OperationTable first{3, 3, std::vector<Vertex>(27)};
    for (int code = 0; code < 27; ++code)
        first.values[code] = static_cast<Vertex>(code / 9);
    CHECK_FALSE(satisfies_identities(first, SchemeKind::wnu3));
    CHECK_FALSE(satisfies_identities(first, SchemeKind::majority));
    CHECK(preserves_edges(Digraph::parse(3, "011101110"), first));
}

TEST_CASE("table text")
{
    auto t = OperationTable::parse(2, 2, "0001");
    CHECK(t({1, 1}) == 1);
    CHECK(t.render() == "0001");
    CHECK_THROWS_AS(OperationTable::parse(2, 2, "001"), ParseError);
    CHECK_THROWS_AS(OperationTable::parse(2, 2, "0021"), ParseError);
}

TEST_CASE("kind names")
{
    for (auto k : {SchemeKind::majority, SchemeKind::wnu2, SchemeKind::wnu3, SchemeKind::p_given_q, SchemeKind::semilattice2})
        CHECK(parse_scheme_kind(to_string(k)) == k);
    CHECK(to_string(SchemeKind::p_given_q) == "pq");
    CHECK_FALSE(parse_scheme_kind("nu4"));
}
