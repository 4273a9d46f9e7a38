#pragma once

#include <dpoly/errors.hh>

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <ranges>
#include <string>
#include <string_view>
#include <vector>

namespace dpoly
{
    using Vertex = std::uint8_t;

    inline constexpr int min_vertices = 2;
    inline constexpr int max_vertices = 6;

    /// Position of a digraph in the census: its edge string read as a binary
    /// number, edge (0,0) being the most significant bit.
    struct DigraphIndex
    {
        std::uint64_t value = 0;

        auto operator<=>(const DigraphIndex &) const = default;
    };

    /// Number of digraphs on n vertices, 2^(n*n).
    auto digraph_count(int n) -> std::uint64_t;

    void check_vertex_count(int n);

    /// Bijection on {0..n-1}; image of vertex v is (*this)[v].
    class VertexPermutation
    {
    public:
        explicit VertexPermutation(std::vector<Vertex> mapping);

        static auto identity(int n) -> VertexPermutation;

        auto size() const noexcept -> int { return _n; }
        auto operator[](int v) const noexcept -> Vertex { return _map[v]; }
        auto is_identity() const noexcept -> bool;

        auto inverse() const -> VertexPermutation;

        /// (this ∘ other): apply other first.
        auto after(const VertexPermutation & other) const -> VertexPermutation;

        auto operator==(const VertexPermutation & other) const -> bool;

    private:
        VertexPermutation() = default;

        int _n = 0;
        std::array<Vertex, max_vertices> _map{};
    };

    /// All n! permutations in lexicographic order of their image sequences;
    /// the identity comes first.
    auto all_permutations(int n) -> std::vector<VertexPermutation>;

    /// A digraph on n vertices, loops allowed. Edges are kept packed so that the
    /// bit pattern is the DigraphIndex itself.
    class Digraph
    {
    public:
        explicit Digraph(int n);

        static auto from_index(int n, DigraphIndex k) -> Digraph;

        /// Exactly n*n characters from {'0','1'}, row-major.
        static auto parse(int n, std::string_view bits) -> Digraph;

        /// Infers n from the length (must be a perfect square in range).
        static auto parse(std::string_view bits) -> Digraph;

        auto vertex_count() const noexcept -> int { return _n; }
        auto index() const noexcept -> DigraphIndex { return {_bits}; }

        auto has_edge(int from, int to) const noexcept -> bool
        {
            return (_bits >> bit_of(from, to)) & 1u;
        }

        void set_edge(int from, int to, bool present = true);

        auto edge_count() const noexcept -> int;

        /// Bitmask of out-neighbours / in-neighbours of v.
        auto out_mask(int v) const noexcept -> unsigned;
        auto in_mask(int v) const noexcept -> unsigned;

        /// Edge-reversed digraph.
        auto reversed() const -> Digraph;

        auto render() const -> std::string;

        auto operator==(const Digraph &) const -> bool = default;

    private:
        auto bit_of(int from, int to) const noexcept -> int { return _n * _n - 1 - (from * _n + to); }

        int _n;
        std::uint64_t _bits = 0;
    };

    auto index_of(const Digraph & g) -> DigraphIndex;
    auto digraph_of(DigraphIndex k, int n) -> Digraph;
    auto edge_count(const Digraph & g) -> int;

    /// Result has edge (p(i), p(j)) iff g has edge (i, j).
    auto apply_permutation(const Digraph & g, const VertexPermutation & p) -> Digraph;

    /// Every digraph on n vertices in index order, starting from the edgeless one.
    inline auto generate_all(int n)
    {
        check_vertex_count(n);
        return std::views::iota(std::uint64_t{0}, digraph_count(n))
            | std::views::transform([n](std::uint64_t k) { return Digraph::from_index(n, DigraphIndex{k}); });
    }

    auto operator<<(std::ostream & s, const Digraph & g) -> std::ostream &;
}
