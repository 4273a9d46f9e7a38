#include "support.hh"

#include <dpoly/invariants.hh>
#include <dpoly/iso.hh>
#include <dpoly/search.hh>

#include <doctest.h>

#include <bit>

using namespace dpoly;

namespace
{
    auto set_of(std::initializer_list<int> vs) -> VertexSet
    {
        VertexSet s = 0;
        for (int v : vs)
            s = static_cast<VertexSet>(s | (1u << v));
        return s;
    }

    auto position(int n, VertexSet s) -> std::size_t
    {
        auto & all = enumerate_proper_subsets(n);
        return std::find(all.begin(), all.end(), s) - all.begin();
    }

    /// The four checks, read straight from the definition, without closure.
    auto directly_marked(const Digraph & g, VertexSet s) -> bool
    {
        int n = g.vertex_count();
        VertexSet has_in = 0, has_out = 0;
        for (int v = 0; v < n; ++v) {
            VertexSet out = 0, in = 0;
            for (int u = 0; u < n; ++u) {
                if (g.has_edge(v, u))
                    out = static_cast<VertexSet>(out | (1u << u));
                if (g.has_edge(u, v))
                    in = static_cast<VertexSet>(in | (1u << u));
            }
            if (out == s || in == s)
                return true;
            if (in)
                has_in = static_cast<VertexSet>(has_in | (1u << v));
            if (out)
                has_out = static_cast<VertexSet>(has_out | (1u << v));
        }
        return s == has_in || s == has_out;
    }
}

TEST_CASE("subset enumeration order")
{
    auto & four = enumerate_proper_subsets(4);
    std::vector<VertexSet> expected = {set_of({0, 1}), set_of({0, 2}), set_of({0, 3}), set_of({1, 2}), set_of({1, 3}),
        set_of({2, 3}), set_of({0, 1, 2}), set_of({0, 1, 3}), set_of({0, 2, 3}), set_of({1, 2, 3})};
    CHECK(four == expected);
    CHECK(enumerate_proper_subsets(5).size() == 25);
    CHECK(enumerate_proper_subsets(3).size() == 3);
    CHECK(enumerate_proper_subsets(2).empty());
    CHECK(enumerate_proper_subsets(6).size() == 62 - 6);
}

TEST_CASE("definition examples")
{
    CHECK(compute_subsets(Digraph(4)).empty());

    Digraph g(4);
    g.set_edge(2, 0);
    g.set_edge(3, 0);
    auto t = compute_subsets(g);
    CHECK(t.is_marked(position(4, set_of({2, 3}))));
    CHECK(t.render().size() == 10);
}

TEST_CASE("marks are the four checks closed under intersection")
{
    for (int n : {3, 4}) {
        for (std::uint64_t k = 0; k < digraph_count(n); k += (n == 4 ? 7 : 1)) {
            auto g = Digraph::from_index(n, {k});
            auto t = compute_subsets(g);
            auto & all = enumerate_proper_subsets(n);

            // Expected: direct marks, then intersections to a fixpoint.
            std::set<VertexSet> expected;
            for (auto s : all)
                if (directly_marked(g, s))
                    expected.insert(s);
            bool grew = true;
            while (grew) {
                grew = false;
                for (auto a : std::set(expected))
                    for (auto b : std::set(expected)) {
                        auto m = static_cast<VertexSet>(a & b);
                        if (std::popcount(m) >= 2 && ! expected.contains(m))
                            grew = expected.insert(m).second;
                    }
            }
            for (std::size_t i = 0; i < all.size(); ++i)
                REQUIRE(t.is_marked(i) == expected.contains(all[i]));
        }
    }
}

TEST_CASE("marking is preserved by relabeling")
{
    for (int i = 0; i < 100; ++i) {
        auto g = digraph_of({testing::rng()() % digraph_count(5)}, 5);
        auto p = testing::random_permutation(5);
        auto h = apply_permutation(g, p);
        std::set<VertexSet> moved;
        for (auto s : compute_subsets(g).marked_sets()) {
            VertexSet m = 0;
            for (int v = 0; v < 5; ++v)
                if ((s >> v) & 1u)
                    m = static_cast<VertexSet>(m | (1u << p[v]));
            moved.insert(m);
        }
        auto marked = compute_subsets(h).marked_sets();
        REQUIRE(std::set(marked.begin(), marked.end()) == moved);
    }
}

TEST_CASE("restrict_domains")
{
    SubsetTable none(4);
    auto plain = scheme_wnu3(4);
    auto same = restrict_domains(plain, none);
    for (std::size_t c = 0; c < plain.cells.size(); ++c)
        CHECK(same.cells[c].domain == plain.cells[c].domain);

    SubsetTable low(4);
    low.mark(position(4, set_of({0, 1})));
    auto r = restrict_domains(scheme_wnu3(4), low);
    auto cell001 = std::find_if(r.cells.begin(), r.cells.end(), [](auto & c) { return c.links.front() == encode_tuple(4, {0, 0, 1}); });
    REQUIRE(cell001 != r.cells.end());
    CHECK(cell001->domain == set_of({0, 1}));

    SubsetTable high(4);
    high.mark(position(4, set_of({1, 2, 3})));
    auto m = restrict_domains(scheme_majority(4), high);
    auto cell123 = std::find_if(m.cells.begin(), m.cells.end(), [](auto & c) { return c.links.front() == encode_tuple(4, {1, 2, 3}); });
    REQUIRE(cell123 != m.cells.end());
    CHECK_FALSE((cell123->domain & 1u));
    CHECK(cell123->domain == set_of({1, 2, 3}));

    CHECK_THROWS_AS(restrict_domains(scheme_wnu3(3), low), DomainError);
}

TEST_CASE("every marked subset is closed under every witness found")
{
    auto reps = dedupe_sieve(4).representatives();
    std::size_t checked = 0;
    for (auto k : testing::sample(reps, 400)) {
        auto g = Digraph::from_index(4, k);
        auto t = compute_subsets(g);
        for (auto kind : {SchemeKind::majority, SchemeKind::wnu2, SchemeKind::wnu3}) {
            auto out = search(g, scheme_for(kind, 4));
            if (! out.found())
                continue;
            for (auto s : t.marked_sets()) {
                REQUIRE(table_preserves_subset(*out.witness, s));
                ++checked;
            }
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("table_preserves_subset")
{
    auto first = OperationTable{3, 2, {0, 0, 0, 1, 1, 1, 2, 2, 2}};
    CHECK(table_preserves_subset(first, set_of({0, 1})));
    auto constant = OperationTable{3, 2, {2, 2, 2, 2, 2, 2, 2, 2, 2}};
    CHECK_FALSE(table_preserves_subset(constant, set_of({0, 1})));
}
