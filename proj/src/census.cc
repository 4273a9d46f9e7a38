#include <dpoly/census.hh>
#include <dpoly/errors.hh>
#include <dpoly/iso.hh>
#include <dpoly/parallel.hh>

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

namespace dpoly
{
    namespace
    {
        constexpr std::string_view report_magic = "dpoly-census";
        constexpr int report_version = 1;

        constexpr Stage all_stages[] = {
            Stage::generate, Stage::dedupe, Stage::subsets, Stage::majority, Stage::wnu2, Stage::wnu3, Stage::pq};

        auto parse_verdict(char c, std::size_t line) -> Verdict
        {
            switch (c) {
                case '-': return Verdict::skipped;
                case '1': return Verdict::yes;
                case '0': return Verdict::no;
                case '?': return Verdict::undecided;
            }
            throw ParseError(std::string("invalid verdict '") + c + "'", line);
        }

        auto parse_u64(const std::string & s, std::size_t line) -> std::uint64_t
        {
            if (s.empty() || ! std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
                throw ParseError("expected a number, got '" + s + "'", line);
            try {
                return std::stoull(s);
            }
            catch (const std::out_of_range &) {
                throw ParseError("number out of range: " + s, line);
            }
        }

        auto subsets_from(int n, std::string_view bits, std::size_t line) -> SubsetTable
        {
            SubsetTable t(n);
            if (bits.size() != t.subsets().size())
                throw ParseError("subset field has " + std::to_string(bits.size()) + " entries, expected "
                        + std::to_string(t.subsets().size()),
                    line);
            for (std::size_t i = 0; i < bits.size(); ++i) {
                if (bits[i] == '1')
                    t.mark(i);
                else if (bits[i] != '0')
                    throw ParseError("invalid subset field", line);
            }
            return t;
        }

        struct WitnessSlot
        {
            std::string_view name;
            int arity;
            std::optional<OperationTable> ClassRecord::*member;
        };

        constexpr WitnessSlot witness_slots[] = {
            {"majority", 3, &ClassRecord::majority_witness},
            {"wnu2", 2, &ClassRecord::wnu2_witness},
            {"wnu3", 3, &ClassRecord::wnu3_witness},
            {"q", 3, &ClassRecord::q},
            {"p", 3, &ClassRecord::p},
            {"2sml", 2, &ClassRecord::semilattice2_witness},
        };

        auto merge_stats(ClassRecord & r, const SearchStats & s) { r.nodes += s.nodes; }

        auto header_count(std::istream & in, std::string_view key, std::size_t & line) -> std::uint64_t
        {
            std::string text, word, value;
            if (! std::getline(in, text))
                throw ParseError("missing header field '" + std::string(key) + "'", line + 1);
            ++line;
            std::istringstream fields(text);
            if (! (fields >> word >> value) || word != key)
                throw ParseError("expected header field '" + std::string(key) + "'", line);
            return parse_u64(value, line);
        }
    }

    auto to_string(Stage s) -> std::string_view
    {
        switch (s) {
            case Stage::generate: return "generate";
            case Stage::dedupe: return "dedupe";
            case Stage::subsets: return "subsets";
            case Stage::majority: return "majority";
            case Stage::wnu2: return "wnu2";
            case Stage::wnu3: return "wnu3";
            case Stage::pq: return "pq";
        }
        return "?";
    }

    auto parse_stage(std::string_view s) -> std::optional<Stage>
    {
        for (auto st : all_stages)
            if (to_string(st) == s)
                return st;
        return std::nullopt;
    }

    auto ClassRecord::undecided() const -> bool
    {
        for (auto v : {majority, wnu2, wnu3, pq, semilattice2})
            if (v == Verdict::undecided)
                return true;
        return false;
    }

    auto ClassRecord::flags() const -> std::string
    {
        return {static_cast<char>(majority), static_cast<char>(wnu2), static_cast<char>(wnu3), static_cast<char>(pq),
            static_cast<char>(semilattice2)};
    }

    auto classify(const Digraph & g, const CensusOptions & options) -> ClassRecord
    {
        ClassRecord r;
        r.index = g.index();
        if (options.upto < Stage::subsets)
            return r;

        int n = g.vertex_count();
        r.subsets = compute_subsets(g);
        SubsetTable table = options.pruning ? *r.subsets : SubsetTable(n);
        auto restrict = [&](IdentityScheme s) { return restrict_domains(std::move(s), table); };
        auto run = [&](SchemeKind kind, Verdict & verdict, std::optional<OperationTable> & witness) {
            auto outcome = search(g, restrict(scheme_for(kind, n)), options.search);
            merge_stats(r, outcome.stats);
            verdict = verdict_of(outcome.status);
            witness = std::move(outcome.witness);
            return verdict;
        };

        if (options.upto < Stage::majority)
            return r;
        auto majority = run(SchemeKind::majority, r.majority, r.majority_witness);
        if (majority == Verdict::undecided)
            return r;

        bool small = options.semilattice && n <= 3 && majority == Verdict::no;
        if (small)
            run(SchemeKind::semilattice2, r.semilattice2, r.semilattice2_witness);

        // wnu2 is looked for on every class so that its total over the census is known.
        if (options.upto < Stage::wnu2)
            return r;
        auto wnu2 = run(SchemeKind::wnu2, r.wnu2, r.wnu2_witness);
        if (majority == Verdict::yes || wnu2 == Verdict::undecided || (wnu2 == Verdict::yes && ! small))
            return r;

        if (options.upto < Stage::wnu3)
            return r;
        if (run(SchemeKind::wnu3, r.wnu3, r.wnu3_witness) != Verdict::yes || ! r.wnu3_minimal())
            return r;

        if (options.upto < Stage::pq)
            return r;
        auto pq = search_pq(g, restrict, options.search);
        merge_stats(r, pq.stats);
        r.pq = verdict_of(pq.status);
        r.q_attempts = pq.q_attempts;
        r.q = std::move(pq.q);
        r.p = std::move(pq.p);
        return r;
    }

    auto CensusReport::majority_count() const -> std::size_t
    {
        return std::count_if(records.begin(), records.end(), [](auto & r) { return r.majority == Verdict::yes; });
    }

    auto CensusReport::wnu2_count() const -> std::size_t
    {
        return std::count_if(records.begin(), records.end(),
            [](auto & r) { return r.majority == Verdict::no && r.wnu2 == Verdict::yes; });
    }

    auto CensusReport::wnu2_total() const -> std::size_t
    {
        return std::count_if(records.begin(), records.end(), [](auto & r) { return r.wnu2 == Verdict::yes; });
    }

    auto CensusReport::wnu3_minimal() const -> std::vector<DigraphIndex>
    {
        std::vector<DigraphIndex> out;
        for (auto & r : records)
            if (r.wnu3_minimal())
                out.push_back(r.index);
        return out;
    }

    auto CensusReport::pq_satisfied() const -> std::vector<DigraphIndex>
    {
        std::vector<DigraphIndex> out;
        for (auto & r : records)
            if (r.wnu3_minimal() && r.pq == Verdict::yes)
                out.push_back(r.index);
        return out;
    }

    auto CensusReport::semilattice2_count() const -> std::size_t
    {
        return std::count_if(records.begin(), records.end(), [](auto & r) { return r.semilattice2 == Verdict::yes; });
    }

    auto CensusReport::undecided() const -> std::vector<DigraphIndex>
    {
        std::vector<DigraphIndex> out;
        for (auto & r : records)
            if (r.undecided())
                out.push_back(r.index);
        return out;
    }

    auto run_census(int n, const CensusOptions & options) -> CensusReport
    {
        check_vertex_count(n);
        if (n > 5)
            throw DomainError("census supports n <= 5");
        CensusReport report;
        report.n = n;
        report.stage = options.upto;
        if (options.upto < Stage::dedupe)
            return report;

        auto reps = dedupe_sieve(n).representatives();

        std::map<std::uint64_t, ClassRecord> done;
        for (auto & r : options.completed)
            done.emplace(r.index.value, r);
        std::vector<DigraphIndex> jobs;
        for (auto k : reps)
            if (! done.contains(k.value))
                jobs.push_back(k);

        std::function<void(std::size_t, const ClassRecord &)> on_result;
        if (options.on_record)
            on_result = [&](std::size_t, const ClassRecord & r) { options.on_record(r); };
        auto results = run_parallel(
            jobs, options.workers, [&](DigraphIndex k) { return classify(Digraph::from_index(n, k), options); },
            on_result, options.parallel_stats);

        for (auto & r : results)
            done.emplace(r.index.value, std::move(r));
        report.records.reserve(reps.size());
        for (auto k : reps) {
            auto it = done.find(k.value);
            report.records.push_back(std::move(it->second));
        }
        return report;
    }

    auto verify_record(int n, const ClassRecord & r) -> bool
    {
        auto g = Digraph::from_index(n, r.index);
        auto check = [&](Verdict v, const std::optional<OperationTable> & w, SchemeKind kind,
                         const OperationTable * companion = nullptr) {
            if (v == Verdict::yes)
                return w && verify_table(g, *w, kind, companion);
            return ! w.has_value();
        };
        if (r.pq == Verdict::yes) {
            if (! r.q || ! r.p || ! verify_table(g, *r.q, SchemeKind::wnu3) || ! verify_table(g, *r.p, SchemeKind::p_given_q, &*r.q))
                return false;
        }
        else if (r.q || r.p)
            return false;
        return check(r.majority, r.majority_witness, SchemeKind::majority) && check(r.wnu2, r.wnu2_witness, SchemeKind::wnu2)
            && check(r.wnu3, r.wnu3_witness, SchemeKind::wnu3)
            && check(r.semilattice2, r.semilattice2_witness, SchemeKind::semilattice2);
    }

    auto DualityPairing::orbit_representatives() const -> std::vector<DigraphIndex>
    {
        std::vector<DigraphIndex> out(self_dual.begin(), self_dual.end());
        out.insert(out.end(), unmatched.begin(), unmatched.end());
        for (auto & [a, b] : pairs)
            out.push_back(a);
        std::sort(out.begin(), out.end());
        return out;
    }

    auto dual_class(DigraphIndex k, int n) -> DigraphIndex
    {
        return canonical_index(Digraph::from_index(n, k).reversed());
    }

    auto duality_pairing(const std::vector<DigraphIndex> & reps, int n) -> DualityPairing
    {
        DualityPairing out;
        std::set<DigraphIndex> members(reps.begin(), reps.end());
        std::set<DigraphIndex> seen;
        for (auto k : members) {
            if (seen.contains(k))
                continue;
            auto d = dual_class(k, n);
            seen.insert(k);
            if (d == k)
                out.self_dual.push_back(k);
            else if (members.contains(d)) {
                seen.insert(d);
                out.pairs.emplace_back(std::min(k, d), std::max(k, d));
            }
            else
                out.unmatched.push_back(k);
        }
        return out;
    }

    auto read_catalog(std::istream & in, int n) -> std::vector<Digraph>
    {
        std::vector<Digraph> out;
        std::string text;
        std::size_t line = 0;
        while (std::getline(in, text)) {
            ++line;
            if (! text.empty() && text.back() == '\r')
                text.pop_back();
            try {
                out.push_back(n ? Digraph::parse(n, text) : Digraph::parse(text));
            }
            catch (const std::exception & e) {
                throw ParseError(e.what(), line);
            }
            n = out.back().vertex_count();
        }
        return out;
    }

    void write_catalog(std::ostream & out, const std::vector<Digraph> & catalog)
    {
        for (auto & g : catalog)
            out << g.render() << '\n';
    }

    void write_record(std::ostream & out, int n, const ClassRecord & r)
    {
        out << "class " << r.index.value << ' ' << Digraph::from_index(n, r.index).render() << ' ';
        if (r.subsets)
            out << "s:" << r.subsets->render();
        else
            out << '-';
        out << ' ' << r.flags() << ' ' << r.q_attempts << ' ' << r.nodes << '\n';
        for (auto & slot : witness_slots)
            if (auto & w = r.*slot.member)
                out << "witness " << r.index.value << ' ' << slot.name << ' ' << w->render() << '\n';
    }

    namespace
    {
        auto read_record_lines(std::istream & in, int n, std::size_t & line) -> std::vector<ClassRecord>
        {
            std::vector<ClassRecord> out;
            std::string text;
            while (std::getline(in, text)) {
                ++line;
                if (text.empty())
                    continue;
                std::istringstream fields(text);
                std::string tag;
                fields >> tag;
                if (tag == "class") {
                    std::string index, bits, subsets, flags, attempts, nodes, extra;
                    if (! (fields >> index >> bits >> subsets >> flags >> attempts >> nodes) || (fields >> extra))
                        throw ParseError("class line needs 6 fields", line);
                    ClassRecord r;
                    r.index = {parse_u64(index, line)};
                    if (r.index.value >= digraph_count(n))
                        throw ParseError("index out of range", line);
                    Digraph g = [&] {
                        try {
                            return Digraph::parse(n, bits);
                        }
                        catch (const std::exception & e) {
                            throw ParseError(e.what(), line);
                        }
                    }();
                    if (g.index() != r.index)
                        throw ParseError("bitstring does not match index", line);
                    if (subsets != "-") {
                        if (! subsets.starts_with("s:"))
                            throw ParseError("invalid subset field", line);
                        r.subsets = subsets_from(n, std::string_view(subsets).substr(2), line);
                    }
                    if (flags.size() != 5)
                        throw ParseError("flags need 5 characters", line);
                    r.majority = parse_verdict(flags[0], line);
                    r.wnu2 = parse_verdict(flags[1], line);
                    r.wnu3 = parse_verdict(flags[2], line);
                    r.pq = parse_verdict(flags[3], line);
                    r.semilattice2 = parse_verdict(flags[4], line);
                    r.q_attempts = static_cast<int>(parse_u64(attempts, line));
                    r.nodes = parse_u64(nodes, line);
                    out.push_back(std::move(r));
                }
                else if (tag == "witness") {
                    std::string index, kind, digits, extra;
                    if (! (fields >> index >> kind >> digits) || (fields >> extra))
                        throw ParseError("witness line needs 3 fields", line);
                    if (out.empty() || out.back().index.value != parse_u64(index, line))
                        throw ParseError("witness does not follow its class line", line);
                    auto slot = std::find_if(
                        std::begin(witness_slots), std::end(witness_slots), [&](auto & s) { return s.name == kind; });
                    if (slot == std::end(witness_slots))
                        throw ParseError("unknown witness kind '" + kind + "'", line);
                    try {
                        out.back().*(slot->member) = OperationTable::parse(n, slot->arity, digits);
                    }
                    catch (const ParseError & e) {
                        throw ParseError(e.what(), line);
                    }
                }
                else
                    throw ParseError("unexpected line '" + text + "'", line);
            }
            return out;
        }
    }

    auto read_records(std::istream & in, int n) -> std::vector<ClassRecord>
    {
        std::size_t line = 0;
        return read_record_lines(in, n, line);
    }

    void write_report(std::ostream & out, const CensusReport & report)
    {
        out << report_magic << ' ' << report_version << '\n';
        out << "n " << report.n << '\n';
        out << "stage " << to_string(report.stage) << '\n';
        out << "classes " << report.class_count() << '\n';
        out << "majority " << report.majority_count() << '\n';
        out << "wnu2 " << report.wnu2_count() << '\n';
        out << "wnu2-total " << report.wnu2_total() << '\n';
        out << "wnu3-minimal " << report.wnu3_minimal().size() << '\n';
        out << "pq " << report.pq_satisfied().size() << '\n';
        out << "2sml " << report.semilattice2_count() << '\n';
        out << "undecided " << report.undecided().size() << '\n';
        for (auto & r : report.records)
            write_record(out, report.n, r);
    }

    auto read_report(std::istream & in) -> CensusReport
    {
        CensusReport report;
        std::size_t line = 0;
        std::string text, word;

        if (! std::getline(in, text))
            throw ParseError("empty report", 1);
        ++line;
        {
            std::istringstream fields(text);
            int version = 0;
            if (! (fields >> word >> version) || word != report_magic)
                throw ParseError("not a census report", line);
            if (version != report_version)
                throw ParseError("unsupported report version " + std::to_string(version), line);
        }

        auto n = header_count(in, "n", line);
        if (n < min_vertices || n > max_vertices)
            throw ParseError("vertex count out of range", line);
        report.n = static_cast<int>(n);

        if (! std::getline(in, text))
            throw ParseError("missing stage", line + 1);
        ++line;
        {
            std::istringstream fields(text);
            std::string name;
            auto stage = (fields >> word >> name) && word == "stage" ? parse_stage(name) : std::nullopt;
            if (! stage)
                throw ParseError("invalid stage line", line);
            report.stage = *stage;
        }

        std::size_t counts_line = line + 1;
        std::uint64_t counts[8];
        std::size_t i = 0;
        for (auto key : {"classes", "majority", "wnu2", "wnu2-total", "wnu3-minimal", "pq", "2sml", "undecided"})
            counts[i++] = header_count(in, key, line);

        report.records = read_record_lines(in, report.n, line);
        std::uint64_t actual[8] = {report.class_count(), report.majority_count(), report.wnu2_count(),
            report.wnu2_total(), report.wnu3_minimal().size(), report.pq_satisfied().size(),
            report.semilattice2_count(), report.undecided().size()};
        for (std::size_t k = 0; k < 8; ++k)
            if (counts[k] != actual[k])
                throw ParseError("header counts do not match the records", counts_line + k);
        return report;
    }

    void write_summary(std::ostream & out, const CensusReport & report)
    {
        out << "n = " << report.n << ", stage = " << to_string(report.stage) << '\n';
        out << "classes:       " << report.class_count() << '\n';
        if (report.stage >= Stage::majority)
            out << "majority:      " << report.majority_count() << '\n';
        if (report.n <= 3 && report.semilattice2_count())
            out << "2sml:          " << report.semilattice2_count() << '\n';
        if (report.stage >= Stage::wnu2) {
            out << "wnu2:          " << report.wnu2_count() << " without majority, " << report.wnu2_total()
                << " in all\n";
        }
        if (report.stage >= Stage::wnu3) {
            auto minimal = report.wnu3_minimal();
            out << "wnu3-minimal:  " << minimal.size() << '\n';
            if (! minimal.empty() && minimal.size() <= 64) {
                auto pairing = duality_pairing(minimal, report.n);
                out << "dual pairs:   ";
                for (auto & [a, b] : pairing.pairs)
                    out << ' ' << a.value << '/' << b.value;
                out << '\n';
                out << "self-dual:    ";
                for (auto k : pairing.self_dual)
                    out << ' ' << k.value;
                out << '\n';
            }
        }
        if (report.stage >= Stage::pq)
            out << "pq:            " << report.pq_satisfied().size() << '\n';
        out << "undecided:     " << report.undecided().size() << '\n';
        out << report.class_count();
        for (auto st : {Stage::majority, Stage::wnu3, Stage::pq})
            if (report.stage >= st)
                out << " / "
                    << (st == Stage::majority ? report.majority_count()
                            : st == Stage::wnu3 ? report.wnu3_minimal().size()
                                                : report.pq_satisfied().size());
        out << '\n';
    }
}
