#pragma once

#include <dpoly/digraph.hh>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace dpoly
{
    /// One bit per DigraphIndex: set when the digraph is an isomorphic copy of a
    /// digraph with a smaller index. Unset bits are the class representatives.
    class ClassFlags
    {
    public:
        explicit ClassFlags(int n);

        auto vertex_count() const noexcept -> int { return _n; }
        auto size() const noexcept -> std::uint64_t { return _size; }

        auto is_copy(std::uint64_t k) const noexcept -> bool { return (_words[k >> 6] >> (k & 63)) & 1u; }
        void set_copy(std::uint64_t k) noexcept { _words[k >> 6] |= std::uint64_t{1} << (k & 63); }

        auto representative_count() const -> std::uint64_t;
        auto representatives() const -> std::vector<DigraphIndex>;

        auto operator==(const ClassFlags &) const -> bool = default;

        /// Raw bitmap file: 4-byte little-endian n, 4-byte little-endian
        /// representative count, then size()/8 bytes, bit k at byte k/8, bit k%8.
        void write(std::ostream & out) const;
        static auto read(std::istream & in) -> ClassFlags;

    private:
        int _n;
        std::uint64_t _size;
        std::vector<std::uint64_t> _words;
    };

    /// Relabels a digraph's packed edge bits under one vertex permutation.
    class PermutationAction
    {
    public:
        explicit PermutationAction(const VertexPermutation & p);

        auto apply(DigraphIndex k) const noexcept -> DigraphIndex;

    private:
        int _bit_count;
        std::array<std::uint8_t, max_vertices * max_vertices> _target{};
    };

    /// Compares each class leader against later digraphs with the same edge
    /// count, flagging every permuted copy.
    auto dedupe_bruteforce(int n) -> ClassFlags;

    /// Ascending scan; each unflagged index flags the indices of all its
    /// permuted copies that are strictly larger. Single-threaded by construction.
    auto dedupe_sieve(int n) -> ClassFlags;

    /// Least index over all n! relabelings of g.
    auto canonical_index(const Digraph & g) -> DigraphIndex;
}
