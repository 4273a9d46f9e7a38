#pragma once

#include <dpoly/digraph.hh>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dpoly
{
    enum class SchemeKind
    {
        majority,
        wnu2,
        wnu3,
        /// p of the two-term system, searched with q fixed.
        p_given_q,
        /// Binary idempotent commutative f with f(f(x,y),x) = f(x,y).
        semilattice2
    };

    auto to_string(SchemeKind k) -> std::string_view;
    auto parse_scheme_kind(std::string_view s) -> std::optional<SchemeKind>;
    auto arity_of(SchemeKind k) -> int;

    /// Argument tuple packed as a base-n number, first argument most significant.
    using TupleCode = std::uint16_t;
    using ValueMask = std::uint8_t;

    inline auto full_mask(int n) -> ValueMask { return static_cast<ValueMask>((1u << n) - 1); }

    auto encode_tuple(int n, std::initializer_list<int> args) -> TupleCode;
    auto decode_tuple(int n, int arity, TupleCode t) -> std::vector<Vertex>;
    auto tuple_count(int n, int arity) -> int;

    /// Total operation on n^arity tuples, indexed by TupleCode.
    struct OperationTable
    {
        int n = 0;
        int arity = 0;
        std::vector<Vertex> values;

        auto operator()(std::initializer_list<int> args) const -> Vertex { return values[encode_tuple(n, args)]; }
        auto operator==(const OperationTable &) const -> bool = default;

        /// Row-major values as digits, e.g. "0001" for the binary meet on {0,1}.
        auto render() const -> std::string;
        static auto parse(int n, int arity, std::string_view digits) -> OperationTable;
    };

    struct Cell
    {
        /// Linkage class; links.front() is the representative tuple.
        std::vector<TupleCode> links;
        ValueMask domain = 0;
    };

    /// A polymorphism search instance: free cells in search order, the tuples
    /// each cell determines, and tuples with values fixed in advance.
    struct IdentityScheme
    {
        SchemeKind kind = SchemeKind::majority;
        int n = 0;
        int arity = 0;
        std::vector<Cell> cells;
        std::vector<std::pair<TupleCode, Vertex>> forced;
        /// Cells pre-assigned before search starts; the backtracker never revisits them.
        std::vector<std::pair<int, Vertex>> prefix;
        /// For p_given_q: the q table the forced cells were copied from.
        std::optional<OperationTable> companion;
    };

    auto scheme_majority(int n) -> IdentityScheme;
    auto scheme_wnu2(int n) -> IdentityScheme;
    auto scheme_wnu3(int n) -> IdentityScheme;
    auto scheme_semilattice2(int n) -> IdentityScheme;

    /// Requires q to be a verified wnu3 polymorphism of g. The first cells are
    /// the (x,y,x) tuples, pre-assigned to q(x,x,y) through the prefix.
    auto scheme_p_given_q(const Digraph & g, const OperationTable & q) -> IdentityScheme;

    auto scheme_for(SchemeKind k, int n) -> IdentityScheme;

    /// Per-cell values (-1 = unassigned).
    using Assignment = std::vector<int>;

    /// Throws DomainError if any cell is unassigned.
    auto expand_to_table(const IdentityScheme & scheme, const Assignment & a) -> OperationTable;

    /// For every arity-many edges (a_i, b_i), table(a...) -> table(b...) is an edge.
    auto preserves_edges(const Digraph & g, const OperationTable & t) -> bool;

    /// The identities of a single-operation kind, checked at every instantiation.
    /// p_given_q is rejected here; use satisfies_pq_system.
    auto satisfies_identities(const OperationTable & t, SchemeKind kind) -> bool;

    /// p(x,x,y) = p(x,y,y), p(x,y,x) = q(x,x,y), q a wnu3, both idempotent.
    auto satisfies_pq_system(const OperationTable & p, const OperationTable & q) -> bool;
}
