#include "support.hh"

#include <dpoly/iso.hh>

#include <doctest.h>

#include <sstream>

using namespace dpoly;

namespace
{
    auto oracle_classes(int n) -> std::set<std::uint64_t>
    {
        std::set<std::uint64_t> reps;
        for (std::uint64_t k = 0; k < digraph_count(n); ++k)
            reps.insert(testing::min_relabeling(n, k));
        return reps;
    }

    auto values(const std::vector<DigraphIndex> & v) -> std::set<std::uint64_t>
    {
        std::set<std::uint64_t> s;
        for (auto k : v)
            s.insert(k.value);
        return s;
    }
}

TEST_CASE("class counts for n = 2 and 3 agree with canonical-form hashing")
{
    auto two = oracle_classes(2);
    auto three = oracle_classes(3);
    REQUIRE(two.size() == 10);
    REQUIRE(three.size() == 104);

    CHECK(values(dedupe_bruteforce(2).representatives()) == two);
    CHECK(values(dedupe_sieve(2).representatives()) == two);
    CHECK(values(dedupe_bruteforce(3).representatives()) == three);
    CHECK(values(dedupe_sieve(3).representatives()) == three);

    std::set<std::uint64_t> canonical;
    for (auto g : generate_all(3))
        canonical.insert(canonical_index(g).value);
    CHECK(canonical == three);
}

TEST_CASE("n = 4: both methods give 3044 classes and identical flags")
{
    auto sieve = dedupe_sieve(4);
    auto brute = dedupe_bruteforce(4);
    CHECK(sieve.representative_count() == 3044);
    CHECK(sieve == brute);

    std::ostringstream a, b;
    sieve.write(a);
    brute.write(b);
    CHECK(a.str() == b.str());

    // Every representative is the least member of its class.
    auto reps = sieve.representatives();
    for (auto k : testing::sample(reps, 300))
        REQUIRE(testing::min_relabeling(4, k.value) == k.value);
    for (int i = 0; i < 300; ++i) {
        auto k = testing::rng()() % digraph_count(4);
        REQUIRE(sieve.is_copy(k) == (testing::min_relabeling(4, k) != k));
    }
}

TEST_CASE("n = 5 sieve")
{
    auto flags = dedupe_sieve(5);
    CHECK(flags.size() == 33554432);
    CHECK(flags.representative_count() == 291968);
}

TEST_CASE("canonical_index")
{
    CHECK(canonical_index(Digraph(4)).value == 0);
    CHECK(canonical_index(Digraph::parse(2, "0100")) == canonical_index(Digraph::parse(2, "0010")));
    for (int i = 0; i < 100; ++i) {
        auto g = digraph_of({testing::rng()() % digraph_count(5)}, 5);
        auto p = testing::random_permutation(5);
        REQUIRE(canonical_index(apply_permutation(g, p)) == canonical_index(g));
    }
}

TEST_CASE("PermutationAction matches apply_permutation")
{
    for (auto & p : all_permutations(4)) {
        PermutationAction action(p);
        for (int i = 0; i < 20; ++i) {
            auto g = digraph_of({testing::rng()() % digraph_count(4)}, 4);
            REQUIRE(action.apply(g.index()) == apply_permutation(g, p).index());
        }
    }
}

TEST_CASE("flag file round trip and validation")
{
    auto flags = dedupe_sieve(3);
    std::stringstream s;
    flags.write(s);
    auto bytes = s.str();
    CHECK(bytes.size() == 8 + 512 / 8);
    CHECK(bytes[0] == 3);
    CHECK(static_cast<unsigned char>(bytes[4]) == 104);

    std::istringstream in(bytes);
    CHECK(ClassFlags::read(in) == flags);

    auto wrong_count = bytes;
    wrong_count[4] = 105;
    std::istringstream bad(wrong_count);
    CHECK_THROWS_AS(ClassFlags::read(bad), ParseError);

    std::istringstream truncated(bytes.substr(0, 20));
    CHECK_THROWS_AS(ClassFlags::read(truncated), ParseError);
}
