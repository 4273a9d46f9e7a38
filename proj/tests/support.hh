#pragma once

// Reference implementations written against the definitions only, used as
// oracles for the library.

#include <dpoly/digraph.hh>
#include <dpoly/schemes.hh>

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace testing
{
    using Edges = std::vector<std::vector<bool>>;

    inline auto edges_of(int n, std::uint64_t index) -> Edges
    {
        Edges e(n, std::vector<bool>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                e[i][j] = (index >> (n * n - 1 - (i * n + j))) & 1u;
        return e;
    }

    inline auto index_of(const Edges & e) -> std::uint64_t
    {
        int n = static_cast<int>(e.size());
        std::uint64_t k = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                k = (k << 1) | (e[i][j] ? 1u : 0u);
        return k;
    }

    /// Least index among all relabelings.
    inline auto min_relabeling(int n, std::uint64_t index) -> std::uint64_t
    {
        auto e = edges_of(n, index);
        std::vector<int> p(n);
        std::iota(p.begin(), p.end(), 0);
        std::uint64_t best = index;
        do {
            Edges f(n, std::vector<bool>(n));
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    f[p[i]][p[j]] = e[i][j];
            best = std::min(best, index_of(f));
        } while (std::next_permutation(p.begin(), p.end()));
        return best;
    }

    /// Every edge tuple (a_1..a_k) -> (b_1..b_k) maps to an edge.
    inline auto is_polymorphism(const Edges & e, int arity, const std::vector<int> & table) -> bool
    {
        int n = static_cast<int>(e.size());
        std::vector<std::pair<int, int>> list;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (e[i][j])
                    list.emplace_back(i, j);
        std::vector<std::size_t> pick(arity, 0);
        if (list.empty())
            return true;
        while (true) {
            int from = 0, to = 0;
            for (int i = 0; i < arity; ++i) {
                from = from * n + list[pick[i]].first;
                to = to * n + list[pick[i]].second;
            }
            if (! e[table[from]][table[to]])
                return false;
            int i = arity - 1;
            while (i >= 0 && ++pick[i] == list.size())
                pick[i--] = 0;
            if (i < 0)
                return true;
        }
    }

    inline auto at(int n, const std::vector<int> & t, int x, int y) -> int { return t[x * n + y]; }
    inline auto at(int n, const std::vector<int> & t, int x, int y, int z) -> int { return t[(x * n + y) * n + z]; }

    inline auto is_majority(int n, const std::vector<int> & t) -> bool
    {
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (at(n, t, x, x, y) != x || at(n, t, x, y, x) != x || at(n, t, y, x, x) != x)
                    return false;
        return true;
    }

    inline auto is_wnu3(int n, const std::vector<int> & t) -> bool
    {
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (at(n, t, x, x, x) != x)
                    return false;
                if (at(n, t, x, x, y) != at(n, t, x, y, x) || at(n, t, x, x, y) != at(n, t, y, x, x))
                    return false;
            }
        return true;
    }

    inline auto is_wnu2(int n, const std::vector<int> & t) -> bool
    {
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (at(n, t, x, x) != x || at(n, t, x, y) != at(n, t, y, x))
                    return false;
        return true;
    }

    inline auto is_semilattice2(int n, const std::vector<int> & t) -> bool
    {
        if (! is_wnu2(n, t))
            return false;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (at(n, t, at(n, t, x, y), x) != at(n, t, x, y))
                    return false;
        return true;
    }

    inline auto values_of(const dpoly::OperationTable & t) -> std::vector<int>
    {
        return {t.values.begin(), t.values.end()};
    }

    /// Smallest polymorphism satisfying accept, by brute force over all tables
    /// whose non-constant entries vary (constants fixed to idempotence). Only
    /// for tiny n and arity.
    template <typename Accept>
    auto first_table(const Edges & e, int arity, Accept && accept) -> std::optional<std::vector<int>>
    {
        int n = static_cast<int>(e.size());
        int count = 1;
        for (int i = 0; i < arity; ++i)
            count *= n;
        std::vector<int> t(count, 0), free;
        for (int code = 0; code < count; ++code) {
            int first = code % n, rest = code, same = 1;
            for (int i = 0; i < arity; ++i, rest /= n)
                same &= rest % n == first;
            if (same)
                t[code] = first;
            else
                free.push_back(code);
        }
        while (true) {
            if (accept(t) && is_polymorphism(e, arity, t))
                return t;
            std::size_t i = free.size();
            while (i > 0 && ++t[free[i - 1]] == n)
                t[free[--i]] = 0;
            if (i == 0)
                return std::nullopt;
        }
    }

    inline auto rng() -> std::mt19937_64 &
    {
        static std::mt19937_64 r(20240917);
        return r;
    }

    inline auto random_permutation(int n) -> dpoly::VertexPermutation
    {
        std::vector<dpoly::Vertex> p(n);
        std::iota(p.begin(), p.end(), 0);
        std::shuffle(p.begin(), p.end(), rng());
        return dpoly::VertexPermutation(p);
    }

    /// Distinct entries drawn without replacement.
    template <typename T>
    auto sample(const std::vector<T> & from, std::size_t k) -> std::vector<T>
    {
        std::vector<T> out;
        std::sample(from.begin(), from.end(), std::back_inserter(out), k, rng());
        return out;
    }
}
