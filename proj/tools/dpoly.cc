#include <dpoly/census.hh>
#include <dpoly/cnf.hh>
#include <dpoly/errors.hh>
#include <dpoly/invariants.hh>
#include <dpoly/iso.hh>
#include <dpoly/parallel.hh>
#include <dpoly/search.hh>

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace dpoly;

namespace
{
    enum ExitCode
    {
        exit_ok = 0,
        exit_failure = 1,
        exit_usage = 2,
        exit_capacity = 3,
        exit_undecided = 4
    };

    struct RunConfig
    {
        int n = 0;
        std::string kind = "majority";
        std::string digraph;
        std::string method = "sieve";
        std::string stage = "pq";
        std::string out;
        std::string flags_file;
        std::string solver;
        std::uint64_t budget = 0;
        int workers = 1;
        bool no_pruning = false;
        bool oracle = false;
        bool resume = false;
    };

    auto out_dir(const RunConfig & c) -> fs::path
    {
        if (! c.out.empty())
            return c.out;
        if (auto env = std::getenv("DPOLY_OUT_DIR"); env && *env)
            return env;
        return "dpoly-out";
    }

    void log_config(std::string_view command, const RunConfig & c)
    {
        std::cerr << "dpoly " << command << " n=" << c.n << " kind=" << c.kind << " digraph=" << (c.digraph.empty() ? "-" : c.digraph)
                  << " method=" << c.method << " stage=" << c.stage << " workers=" << c.workers << " budget=" << c.budget
                  << " pruning=" << (c.no_pruning ? "off" : "on") << " oracle=" << (c.oracle ? "on" : "off")
                  << " resume=" << (c.resume ? "on" : "off") << '\n';
    }

    /// A run of exactly n*n binary digits is an edge string; anything else is
    /// a decimal index and needs n.
    auto parse_digraph(const std::string & text, int n) -> Digraph
    {
        bool binary = ! text.empty() && text.find_first_not_of("01") == std::string::npos;
        if (binary && (n == 0 || text.size() == static_cast<std::size_t>(n * n)))
            return n ? Digraph::parse(n, text) : Digraph::parse(text);
        if (n == 0)
            throw ParseError("an index digraph needs --n", 0);
        if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("digraph must be an edge string or an index: '" + text + "'", 0);
        return digraph_of({std::stoull(text)}, n);
    }

    auto open_out(const fs::path & path) -> std::ofstream
    {
        if (path.has_parent_path())
            fs::create_directories(path.parent_path());
        std::ofstream f(path, std::ios::binary);
        if (! f)
            throw std::runtime_error("cannot write " + path.string());
        return f;
    }

    auto seconds_since(std::chrono::steady_clock::time_point t0) -> double
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    auto cmd_generate(const RunConfig & c) -> int
    {
        check_vertex_count(c.n);
        auto path = out_dir(c) / ("digraphs-n" + std::to_string(c.n) + ".txt");
        auto f = open_out(path);
        std::uint64_t count = 0;
        for (auto g : generate_all(c.n)) {
            f << g.render() << '\n';
            ++count;
        }
        std::cout << "generated " << count << " digraphs on " << c.n << " vertices -> " << path.string() << '\n';
        return exit_ok;
    }

    auto cmd_dedupe(const RunConfig & c) -> int
    {
        check_vertex_count(c.n);
        auto t0 = std::chrono::steady_clock::now();
        ClassFlags flags = c.method == "bruteforce" ? dedupe_bruteforce(c.n) : dedupe_sieve(c.n);
        auto elapsed = seconds_since(t0);

        auto path = out_dir(c) / ("representatives-n" + std::to_string(c.n) + ".txt");
        auto f = open_out(path);
        for (auto k : flags.representatives())
            f << Digraph::from_index(c.n, k).render() << '\n';
        if (! c.flags_file.empty()) {
            auto ff = open_out(c.flags_file);
            flags.write(ff);
        }
        std::cerr << "dedupe took " << elapsed << " s\n";
        std::cout << "classes " << flags.representative_count() << " of " << flags.size() << " digraphs (" << c.method
                  << ") -> " << path.string() << '\n';
        return exit_ok;
    }

    auto vertex_list(VertexSet s) -> std::string
    {
        std::string r = "{";
        for (int v = 0; v < 8; ++v)
            if ((s >> v) & 1u)
                r += (r.size() > 1 ? "," : "") + std::to_string(v);
        return r + "}";
    }

    auto cmd_subalgebras(const RunConfig & c) -> int
    {
        std::vector<Digraph> graphs;
        if (! c.digraph.empty())
            graphs.push_back(parse_digraph(c.digraph, c.n));
        else {
            check_vertex_count(c.n);
            for (auto k : dedupe_sieve(c.n).representatives())
                graphs.push_back(Digraph::from_index(c.n, k));
        }
        for (auto & g : graphs) {
            std::cout << g.index().value << ' ' << g.render() << ':';
            for (auto s : compute_subsets(g).marked_sets())
                std::cout << ' ' << vertex_list(s);
            std::cout << '\n';
        }
        return exit_ok;
    }

    struct SearchLine
    {
        SearchStatus status;
        std::string text;
    };

    auto search_one(const Digraph & g, SchemeKind kind, const RunConfig & c) -> SearchLine
    {
        SearchOptions options;
        options.node_budget = c.budget;
        SubsetTable table = c.no_pruning ? SubsetTable(g.vertex_count()) : compute_subsets(g);
        auto restrict = [&](IdentityScheme s) { return restrict_domains(std::move(s), table); };

        std::ostringstream out;
        if (kind == SchemeKind::p_given_q) {
            if (c.oracle)
                throw DomainError("--oracle does not support pq");
            auto r = search_pq(g, restrict, options);
            out << to_string(r.status) << " nodes " << r.stats.nodes << " q-attempts " << r.q_attempts;
            if (r.found())
                out << "\nq " << r.q->render() << "\np " << r.p->render();
            return {r.status, out.str()};
        }
        auto scheme = restrict(scheme_for(kind, g.vertex_count()));
        auto r = c.oracle ? exhaustive_oracle(g, scheme) : search(g, scheme, options);
        out << to_string(r.status) << " nodes " << r.stats.nodes << " backtracks " << r.stats.backtracks;
        if (r.found())
            out << "\ntable " << r.witness->render();
        return {r.status, out.str()};
    }

    auto cmd_search(const RunConfig & c) -> int
    {
        auto kind = parse_scheme_kind(c.kind);
        if (! kind)
            throw ParseError("unknown kind '" + c.kind + "'", 0);

        if (! c.digraph.empty()) {
            auto g = parse_digraph(c.digraph, c.n);
            auto r = search_one(g, *kind, c);
            std::cout << "digraph " << g.render() << " index " << g.index().value << " kind " << c.kind << '\n';
            std::cout << r.text << '\n';
            return r.status == SearchStatus::undecided ? exit_undecided : exit_ok;
        }

        check_vertex_count(c.n);
        auto reps = dedupe_sieve(c.n).representatives();
        ParallelStats stats;
        auto lines = run_parallel(
            reps, c.workers, [&](DigraphIndex k) { return search_one(Digraph::from_index(c.n, k), *kind, c); }, {}, &stats);
        std::size_t found = 0, undecided = 0;
        for (std::size_t i = 0; i < reps.size(); ++i) {
            auto text = lines[i].text;
            std::replace(text.begin(), text.end(), '\n', ' ');
            std::cout << reps[i].value << ' ' << text << '\n';
            found += lines[i].status == SearchStatus::found;
            undecided += lines[i].status == SearchStatus::undecided;
        }
        std::cerr << "workers:";
        for (auto w : stats.per_worker)
            std::cerr << ' ' << w;
        std::cerr << " retries " << stats.retries << '\n';
        std::cout << "found " << found << " of " << reps.size() << ", undecided " << undecided << '\n';
        return undecided ? exit_undecided : exit_ok;
    }

    /// Records from a journal left by an interrupted run. A torn last line and
    /// any record whose witnesses do not check out are dropped.
    auto load_journal(const fs::path & path, int n) -> std::vector<ClassRecord>
    {
        std::ifstream f(path, std::ios::binary);
        if (! f)
            return {};
        std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
        text.erase(text.find_last_of('\n') == std::string::npos ? 0 : text.find_last_of('\n') + 1);
        std::istringstream in(text);
        std::vector<ClassRecord> kept;
        for (auto & r : read_records(in, n))
            if (verify_record(n, r) && ! r.undecided())
                kept.push_back(std::move(r));
        return kept;
    }

    auto cmd_pipeline(const RunConfig & c) -> int
    {
        auto stage = parse_stage(c.stage);
        if (! stage)
            throw ParseError("unknown stage '" + c.stage + "'", 0);
        check_vertex_count(c.n);

        auto dir = out_dir(c);
        fs::create_directories(dir);
        auto suffix = "-n" + std::to_string(c.n);
        auto journal_path = dir / ("journal" + suffix + ".txt");

        CensusOptions options;
        options.upto = *stage;
        options.workers = c.workers;
        options.search.node_budget = c.budget;
        options.pruning = ! c.no_pruning;
        if (c.resume) {
            options.completed = load_journal(journal_path, c.n);
            std::cerr << "resuming with " << options.completed.size() << " classes from " << journal_path.string() << '\n';
        }

        // Rewrite the journal with what was kept, then append as classes finish.
        std::ofstream journal(journal_path, std::ios::binary | std::ios::trunc);
        for (auto & r : options.completed)
            write_record(journal, c.n, r);
        journal.flush();

        std::size_t done = 0;
        options.on_record = [&](const ClassRecord & r) {
            write_record(journal, c.n, r);
            journal.flush();
            if (++done % 10000 == 0)
                std::cerr << "classified " << done << '\n';
        };
        ParallelStats stats;
        options.parallel_stats = &stats;

        auto t0 = std::chrono::steady_clock::now();
        auto report = run_census(c.n, options);
        auto elapsed = seconds_since(t0);

        if (*stage >= Stage::dedupe) {
            auto f = open_out(dir / ("representatives" + suffix + ".txt"));
            for (auto & r : report.records)
                f << Digraph::from_index(c.n, r.index).render() << '\n';
        }
        {
            auto f = open_out(dir / ("report" + suffix + ".txt"));
            write_report(f, report);
        }
        {
            auto f = open_out(dir / ("witnesses" + suffix + ".txt"));
            for (auto & r : report.records) {
                std::ostringstream lines;
                write_record(lines, c.n, r);
                std::istringstream in(lines.str());
                std::string line;
                while (std::getline(in, line))
                    if (line.starts_with("witness "))
                        f << line.substr(8) << '\n';
            }
        }

        std::cerr << "pipeline took " << elapsed << " s; workers:";
        for (auto w : stats.per_worker)
            std::cerr << ' ' << w;
        std::cerr << " retries " << stats.retries << '\n';
        write_summary(std::cout, report);
        return report.undecided().empty() ? exit_ok : exit_undecided;
    }

    auto cmd_emit_cnf(const RunConfig & c) -> int
    {
        auto kind = parse_scheme_kind(c.kind);
        if (! kind)
            throw ParseError("unknown kind '" + c.kind + "'", 0);
        auto g = parse_digraph(c.digraph, c.n);
        auto text = emit_cnf(g, *kind);
        if (c.out.empty()) {
            if (! c.solver.empty())
                throw ParseError("--solver needs --out", 0);
            std::cout << text;
            return exit_ok;
        }
        {
            auto f = open_out(c.out);
            f << text;
        }
        std::cerr << "wrote " << c.out << '\n';
        if (! c.solver.empty()) {
            auto command = c.solver + " '" + c.out + "'";
            std::cerr << "running " << command << '\n';
            return std::system(command.c_str()) == 0 ? exit_ok : exit_failure;
        }
        return exit_ok;
    }
}

int main(int argc, char ** argv)
{
    CLI::App app{"Digraph polymorphism census"};
    app.require_subcommand(1);
    RunConfig c;

    auto n_opt = [&](CLI::App * sub, bool required) {
        auto o = sub->add_option("--n", c.n, "Vertex count")->check(CLI::Range(min_vertices, max_vertices));
        if (required)
            o->required();
    };

    auto generate = app.add_subcommand("generate", "Write every digraph on n vertices");
    n_opt(generate, true);
    generate->add_option("--out", c.out, "Output directory");

    auto dedupe = app.add_subcommand("dedupe", "Write one representative per isomorphism class");
    n_opt(dedupe, true);
    dedupe->add_option("--method", c.method, "sieve or bruteforce")->check(CLI::IsMember({"sieve", "bruteforce"}));
    dedupe->add_option("--out", c.out, "Output directory");
    dedupe->add_option("--flags", c.flags_file, "Also write the class flag bitmap here");

    auto subalgebras = app.add_subcommand("subalgebras", "Print the marked invariant subsets");
    n_opt(subalgebras, false);
    subalgebras->add_option("--digraph", c.digraph, "Edge string or index; all representatives when omitted");

    auto search_cmd = app.add_subcommand("search", "Search for a polymorphism");
    n_opt(search_cmd, false);
    search_cmd->add_option("--kind", c.kind, "majority, wnu2, wnu3, pq or 2sml");
    search_cmd->add_option("--digraph", c.digraph, "Edge string or index; all representatives when omitted");
    search_cmd->add_flag("--no-pruning", c.no_pruning, "Do not restrict domains by invariant subsets");
    search_cmd->add_flag("--oracle", c.oracle, "Use exhaustive enumeration instead of backtracking");
    search_cmd->add_option("--budget", c.budget, "Node budget per search, 0 for none");
    search_cmd->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);

    auto pipeline = app.add_subcommand("pipeline", "Run the census");
    n_opt(pipeline, true);
    pipeline->add_option("--stage", c.stage, "Last stage: generate, dedupe, subsets, majority, wnu2, wnu3, pq");
    pipeline->add_option("--workers", c.workers, "Worker threads")->check(CLI::PositiveNumber);
    pipeline->add_option("--out", c.out, "Output directory (default $DPOLY_OUT_DIR or dpoly-out)");
    pipeline->add_flag("--resume", c.resume, "Skip classes recorded in the journal");
    pipeline->add_option("--budget", c.budget, "Node budget per search, 0 for none");
    pipeline->add_flag("--no-pruning", c.no_pruning, "Do not restrict domains by invariant subsets");

    auto emit = app.add_subcommand("emit-cnf", "Write a CNF problem for a finite model finder");
    n_opt(emit, false);
    emit->add_option("--digraph", c.digraph, "Edge string or index")->required();
    emit->add_option("--kind", c.kind, "majority, wnu2, wnu3 or pq");
    emit->add_option("--out", c.out, "Output file; standard output when omitted");
    emit->add_option("--solver", c.solver, "Run this command on the written file");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError & e) {
        int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        auto sub = app.get_subcommands().front();
        log_config(sub->get_name(), c);
        if (sub == generate)
            return cmd_generate(c);
        if (sub == dedupe)
            return cmd_dedupe(c);
        if (sub == subalgebras)
            return cmd_subalgebras(c);
        if (sub == search_cmd)
            return cmd_search(c);
        if (sub == pipeline)
            return cmd_pipeline(c);
        return cmd_emit_cnf(c);
    }
    catch (const ParseError & e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const DomainError & e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (const CapacityError & e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_capacity;
    }
    catch (const std::exception & e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failure;
    }
}
