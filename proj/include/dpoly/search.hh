#pragma once

#include <dpoly/digraph.hh>
#include <dpoly/schemes.hh>

#include <cstdint>
#include <optional>
#include <vector>

namespace dpoly
{
    enum class SearchStatus
    {
        found,
        not_found,
        /// Node budget exhausted before the question was settled.
        undecided
    };

    auto to_string(SearchStatus s) -> std::string_view;

    struct SearchStats
    {
        std::uint64_t nodes = 0;
        std::uint64_t backtracks = 0;
    };

    struct SearchOutcome
    {
        SearchStatus status = SearchStatus::not_found;
        std::optional<OperationTable> witness;
        Assignment assignment;
        SearchStats stats;

        auto found() const noexcept -> bool { return status == SearchStatus::found; }
    };

    /// Value filtering after each assignment. Every level removes only values
    /// that cannot occur in any solution extending the current assignment, so
    /// answers and the order in which solutions are found are the same for all.
    enum class Propagation
    {
        /// Check the new value against assigned cells only.
        none,
        /// Also drop values of unassigned neighbours that clash with it.
        forward_checking,
        /// Keep every unassigned cell's values supported by its neighbours' domains.
        arc_consistency
    };

    struct SearchOptions
    {
        /// Maximum value trials; 0 means unlimited.
        std::uint64_t node_budget = 0;
        Propagation propagation = Propagation::arc_consistency;
    };

    /// Depth-first search over a scheme's cells in order, values ascending.
    /// Each call to next() resumes where the previous solution left off, so
    /// solutions come out in lexicographic order of their assignments.
    class PolymorphismSearch
    {
    public:
        PolymorphismSearch(const Digraph & g, IdentityScheme scheme, SearchOptions options = {});

        auto next() -> SearchOutcome;

        auto scheme() const -> const IdentityScheme & { return _scheme; }
        auto stats() const -> const SearchStats & { return _stats; }

    private:
        void compile();
        auto try_assign(int cell, int value) -> bool;
        void unassign(int cell);
        auto absorption_holds() const -> bool;
        auto narrow(int cell, unsigned keep) -> bool;
        auto propagate(int from) -> bool;
        void initialise();

        Digraph _graph;
        IdentityScheme _scheme;
        SearchOptions _options;
        SearchStats _stats;

        std::vector<unsigned> _out, _in;
        /// Cell-level form of the edge rule: assigned values must satisfy
        /// value(c) -> value(d) for every d in _points_to[c].
        std::vector<std::vector<int>> _points_to, _pointed_from;
        std::vector<ValueMask> _domain;
        std::vector<std::pair<int, ValueMask>> _trail;
        std::vector<std::size_t> _trail_mark;
        bool _forced_consistent = true;

        std::vector<int> _value_of_tuple;
        Assignment _assignment;
        std::vector<int> _next_value;
        int _start = 0;
        int _cursor = 0;
        bool _exhausted = false;
        bool _started = false;
    };

    /// Is v acceptable for new_cell, given that every cell before it in
    /// scheme order is assigned in a? Checks the domain, then every pair of
    /// determined tuples involving new_cell's linkage class.
    auto check_partial(const Digraph & g, const IdentityScheme & scheme, const Assignment & a, int new_cell, int v) -> bool;

    auto search(const Digraph & g, const IdentityScheme & scheme, SearchOptions options = {}) -> SearchOutcome;

    inline constexpr std::uint64_t default_oracle_limit = 100'000'000;

    /// Enumerates every complete assignment in lexicographic order and returns
    /// the first whose table passes verify_table. Throws CapacityError when the
    /// product of domain sizes exceeds limit.
    auto exhaustive_oracle(const Digraph & g, const IdentityScheme & scheme, std::uint64_t limit = default_oracle_limit)
        -> SearchOutcome;

    /// Edge preservation plus every identity of the kind. For p_given_q the
    /// companion q table is required.
    auto verify_table(const Digraph & g, const OperationTable & t, SchemeKind kind, const OperationTable * companion = nullptr)
        -> bool;

    struct PqOutcome
    {
        SearchStatus status = SearchStatus::not_found;
        std::optional<OperationTable> q;
        std::optional<OperationTable> p;
        /// How many wnu3 candidates were tried as q, counting the successful one.
        int q_attempts = 0;
        SearchStats stats;

        auto found() const noexcept -> bool { return status == SearchStatus::found; }
    };

    /// Two-term system search: walks wnu3 witnesses in lexicographic order as
    /// q and, for each, searches for p. restrict maps each scheme before it is
    /// searched (e.g. domain restriction by invariant subsets).
    template <typename Restrict>
    auto search_pq(const Digraph & g, Restrict && restrict, SearchOptions options = {}) -> PqOutcome;

    /// Replays the wnu3 prefix-fixing strategy: every combination of values for
    /// pair cells lying inside a marked two-element subset is fixed up front,
    /// and the remaining cells are searched for each combination in turn.
    auto search_prefix_fixing(const Digraph & g, const IdentityScheme & restricted, SearchOptions options = {}) -> SearchOutcome;

    template <typename Restrict>
    auto search_pq(const Digraph & g, Restrict && restrict, SearchOptions options) -> PqOutcome
    {
        PqOutcome result;
        SearchStats spent_on_p;
        PolymorphismSearch qs(g, restrict(scheme_wnu3(g.vertex_count())), options);
        auto total = [&] {
            return SearchStats{qs.stats().nodes + spent_on_p.nodes, qs.stats().backtracks + spent_on_p.backtracks};
        };
        while (true) {
            auto q = qs.next();
            result.stats = total();
            if (! q.found()) {
                result.status = q.status;
                return result;
            }
            ++result.q_attempts;

            SearchOptions left = options;
            if (options.node_budget)
                left.node_budget = options.node_budget > result.stats.nodes ? options.node_budget - result.stats.nodes : 1;
            auto p = search(g, restrict(scheme_p_given_q(g, *q.witness)), left);
            spent_on_p.nodes += p.stats.nodes;
            spent_on_p.backtracks += p.stats.backtracks;
            result.stats = total();
            if (p.found()) {
                result.status = SearchStatus::found;
                result.q = std::move(q.witness);
                result.p = std::move(p.witness);
                return result;
            }
            if (p.status == SearchStatus::undecided) {
                result.status = SearchStatus::undecided;
                return result;
            }
        }
    }
}
