#pragma once

#include <dpoly/digraph.hh>
#include <dpoly/schemes.hh>

#include <cstdint>
#include <vector>

namespace dpoly
{
    using VertexSet = std::uint8_t;

    /// Proper subsets of size 2..n-1: by size, then lexicographically. For n=4
    /// that is {0,1},{0,2},{0,3},{1,2},{1,3},{2,3},{0,1,2},{0,1,3},{0,2,3},{1,2,3}.
    auto enumerate_proper_subsets(int n) -> const std::vector<VertexSet> &;

    /// Vertex subsets known to be closed under every idempotent polymorphism.
    class SubsetTable
    {
    public:
        explicit SubsetTable(int n);

        auto vertex_count() const noexcept -> int { return _n; }
        auto subsets() const -> const std::vector<VertexSet> & { return enumerate_proper_subsets(_n); }

        auto is_marked(std::size_t position) const noexcept -> bool { return (_marks >> position) & 1u; }
        void mark(std::size_t position) noexcept { _marks |= std::uint64_t{1} << position; }

        auto marked_sets() const -> std::vector<VertexSet>;
        auto empty() const noexcept -> bool { return _marks == 0; }

        /// '0'/'1' per enumerated subset.
        auto render() const -> std::string;

        auto operator==(const SubsetTable &) const -> bool = default;

    private:
        int _n;
        std::uint64_t _marks = 0;
    };

    /// Marks S when it is some vertex's out-neighbourhood or in-neighbourhood, or
    /// exactly the set of vertices with an incoming edge, or with an outgoing
    /// edge. Then closes the marks under intersections that are proper subsets.
    auto compute_subsets(const Digraph & g) -> SubsetTable;

    /// A cell whose tuples draw all entries from a marked S may only take values in S.
    auto restrict_domains(IdentityScheme scheme, const SubsetTable & t) -> IdentityScheme;

    /// True when t maps every tuple over S back into S.
    auto table_preserves_subset(const OperationTable & t, VertexSet s) -> bool;
}
