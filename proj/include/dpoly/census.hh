#pragma once

#include <dpoly/digraph.hh>
#include <dpoly/invariants.hh>
#include <dpoly/parallel.hh>
#include <dpoly/schemes.hh>
#include <dpoly/search.hh>

#include <functional>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace dpoly
{
    enum class Stage
    {
        generate,
        dedupe,
        subsets,
        majority,
        wnu2,
        wnu3,
        pq
    };

    auto to_string(Stage s) -> std::string_view;
    auto parse_stage(std::string_view s) -> std::optional<Stage>;

    enum class Verdict : char
    {
        skipped = '-',
        yes = '1',
        no = '0',
        undecided = '?'
    };

    inline auto verdict_of(SearchStatus s) -> Verdict
    {
        switch (s) {
            case SearchStatus::found: return Verdict::yes;
            case SearchStatus::not_found: return Verdict::no;
            case SearchStatus::undecided: return Verdict::undecided;
        }
        return Verdict::undecided;
    }

    struct ClassRecord
    {
        DigraphIndex index;
        std::optional<SubsetTable> subsets;

        Verdict majority = Verdict::skipped;
        Verdict wnu2 = Verdict::skipped;
        Verdict wnu3 = Verdict::skipped;
        Verdict pq = Verdict::skipped;
        Verdict semilattice2 = Verdict::skipped;

        std::optional<OperationTable> majority_witness;
        std::optional<OperationTable> wnu2_witness;
        std::optional<OperationTable> wnu3_witness;
        std::optional<OperationTable> q;
        std::optional<OperationTable> p;
        std::optional<OperationTable> semilattice2_witness;

        int q_attempts = 0;
        std::uint64_t nodes = 0;

        /// Has wnu3 but neither majority nor wnu2.
        auto wnu3_minimal() const -> bool
        {
            return wnu3 == Verdict::yes && majority == Verdict::no && wnu2 == Verdict::no;
        }
        auto undecided() const -> bool;
        /// '1'/'0'/'?'/'-' for majority, wnu2, wnu3, pq, 2sml.
        auto flags() const -> std::string;

        auto operator==(const ClassRecord &) const -> bool = default;
    };

    struct CensusOptions
    {
        Stage upto = Stage::pq;
        int workers = 1;
        SearchOptions search;
        /// Restrict cell domains by invariant subsets.
        bool pruning = true;
        /// For n <= 3, also look for a 2-semilattice operation and a wnu3 on
        /// every class without majority.
        bool semilattice = true;
        /// Called on the aggregating thread as each class completes.
        std::function<void(const ClassRecord &)> on_record;
        /// Classes already done (e.g. read back from a journal); not searched again.
        std::vector<ClassRecord> completed;
        /// Filled with the worker pool's counters when set.
        ParallelStats * parallel_stats = nullptr;
    };

    /// Classifies one digraph up to options.upto: majority, then wnu2 (on every
    /// class); wnu3 only without either; the (q, p) pair only for
    /// wnu3-minimal classes. Stops at the first undecided search.
    auto classify(const Digraph & g, const CensusOptions & options) -> ClassRecord;

    struct CensusReport
    {
        int n = 0;
        Stage stage = Stage::pq;
        /// One per class, ordered by representative index.
        std::vector<ClassRecord> records;

        auto class_count() const -> std::size_t { return records.size(); }
        auto majority_count() const -> std::size_t;
        /// wnu2 among the classes without majority.
        auto wnu2_count() const -> std::size_t;
        /// wnu2 over all classes.
        auto wnu2_total() const -> std::size_t;
        auto wnu3_minimal() const -> std::vector<DigraphIndex>;
        auto pq_satisfied() const -> std::vector<DigraphIndex>;
        auto semilattice2_count() const -> std::size_t;
        auto undecided() const -> std::vector<DigraphIndex>;

        auto operator==(const CensusReport &) const -> bool = default;
    };

    auto run_census(int n, const CensusOptions & options = {}) -> CensusReport;

    /// Checks every witness in the record against the digraph and its kind.
    auto verify_record(int n, const ClassRecord & r) -> bool;

    struct DualityPairing
    {
        /// (smaller, larger) representative of each class pair swapped by reversal.
        std::vector<std::pair<DigraphIndex, DigraphIndex>> pairs;
        std::vector<DigraphIndex> self_dual;
        /// Classes whose dual class is not among the input representatives.
        std::vector<DigraphIndex> unmatched;

        /// One class per pair (the smaller) plus every self-dual and unmatched class, sorted.
        auto orbit_representatives() const -> std::vector<DigraphIndex>;
    };

    auto dual_class(DigraphIndex k, int n) -> DigraphIndex;
    auto duality_pairing(const std::vector<DigraphIndex> & reps, int n) -> DualityPairing;

    /// One digraph per line, n*n '0'/'1' characters. n = 0 infers it from the
    /// first line; all lines must agree.
    auto read_catalog(std::istream & in, int n = 0) -> std::vector<Digraph>;
    void write_catalog(std::ostream & out, const std::vector<Digraph> & catalog);

    /// Record and witness lines, shared by the report body and the journal.
    void write_record(std::ostream & out, int n, const ClassRecord & r);
    auto read_records(std::istream & in, int n) -> std::vector<ClassRecord>;

    void write_report(std::ostream & out, const CensusReport & report);
    auto read_report(std::istream & in) -> CensusReport;

    /// The human-readable summary printed by the CLI.
    void write_summary(std::ostream & out, const CensusReport & report);
}
