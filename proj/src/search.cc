#include <dpoly/search.hh>

#include <algorithm>
#include <bit>
#include <stdexcept>

namespace dpoly
{
    namespace
    {
        auto mask_values(ValueMask m) -> std::vector<int>
        {
            std::vector<int> r;
            for (int v = 0; m; ++v, m = static_cast<ValueMask>(m >> 1))
                if (m & 1u)
                    r.push_back(v);
            return r;
        }

        /// All tuples b with a_i -> b_i for every i (or b_i -> a_i when reverse).
        auto componentwise_neighbours(const Digraph & g, int arity, TupleCode t, bool reverse) -> std::vector<TupleCode>
        {
            int n = g.vertex_count();
            auto a = decode_tuple(n, arity, t);
            std::vector<TupleCode> result{0};
            for (int i = 0; i < arity; ++i) {
                auto mask = reverse ? g.in_mask(a[i]) : g.out_mask(a[i]);
                std::vector<TupleCode> grown;
                for (auto partial : result)
                    for (int b = 0; b < n; ++b)
                        if ((mask >> b) & 1u)
                            grown.push_back(static_cast<TupleCode>(partial * n + b));
                result = std::move(grown);
            }
            return result;
        }
    }

    auto to_string(SearchStatus s) -> std::string_view
    {
        switch (s) {
        case SearchStatus::found: return "found";
        case SearchStatus::not_found: return "not-found";
        case SearchStatus::undecided: return "undecided";
        }
        return "?";
    }

    PolymorphismSearch::PolymorphismSearch(const Digraph & g, IdentityScheme scheme, SearchOptions options) :
        _graph(g),
        _scheme(std::move(scheme)),
        _options(options)
    {
        if (_scheme.n != g.vertex_count())
            throw DomainError("scheme is for n=" + std::to_string(_scheme.n) + " but the digraph has "
                + std::to_string(g.vertex_count()) + " vertices");
        for (std::size_t i = 0; i < _scheme.prefix.size(); ++i)
            if (_scheme.prefix[i].first != static_cast<int>(i))
                throw DomainError("prefix cells must be the leading cells of the scheme");
        compile();
    }

    void PolymorphismSearch::compile()
    {
        int n = _scheme.n;
        int cells = static_cast<int>(_scheme.cells.size());
        int count = tuple_count(n, _scheme.arity);

        unsigned loops = 0;
        for (int v = 0; v < n; ++v) {
            _out.push_back(_graph.out_mask(v));
            _in.push_back(_graph.in_mask(v));
            if (_graph.has_edge(v, v))
                loops |= 1u << v;
        }

        _value_of_tuple.assign(count, -1);
        for (auto & [tuple, value] : _scheme.forced)
            _value_of_tuple[tuple] = value;
        std::vector<int> cell_of(count, -1);
        for (int c = 0; c < cells; ++c)
            for (auto t : _scheme.cells[c].links)
                cell_of[t] = c;

        // Every tuple pair s -> s' (componentwise) requires f(s) -> f(s'). Since
        // all tuples of a cell share one value, pairs collapse to unary
        // restrictions (against forced tuples or the cell itself) and to
        // directed cell-to-cell constraints.
        _points_to.assign(cells, {});
        _pointed_from.assign(cells, {});
        _domain.resize(cells);
        for (int c = 0; c < cells; ++c) {
            unsigned allowed = _scheme.cells[c].domain;
            for (auto t : _scheme.cells[c].links) {
                for (auto s : componentwise_neighbours(_graph, _scheme.arity, t, false)) {
                    if (_value_of_tuple[s] >= 0)
                        allowed &= _in[_value_of_tuple[s]];
                    else if (cell_of[s] == c)
                        allowed &= loops;
                    else if (cell_of[s] >= 0) {
                        _points_to[c].push_back(cell_of[s]);
                        _pointed_from[cell_of[s]].push_back(c);
                    }
                }
                for (auto s : componentwise_neighbours(_graph, _scheme.arity, t, true)) {
                    if (_value_of_tuple[s] >= 0)
                        allowed &= _out[_value_of_tuple[s]];
                    else if (cell_of[s] == c)
                        allowed &= loops;
                    else if (cell_of[s] >= 0) {
                        _points_to[cell_of[s]].push_back(c);
                        _pointed_from[c].push_back(cell_of[s]);
                    }
                }
            }
            _domain[c] = static_cast<ValueMask>(allowed);
        }
        for (auto * lists : {&_points_to, &_pointed_from})
            for (auto & l : *lists) {
                std::sort(l.begin(), l.end());
                l.erase(std::unique(l.begin(), l.end()), l.end());
            }

        for (auto & [tuple, value] : _scheme.forced)
            for (auto s : componentwise_neighbours(_graph, _scheme.arity, tuple, false))
                if (_value_of_tuple[s] >= 0 && ! ((_out[value] >> _value_of_tuple[s]) & 1u))
                    _forced_consistent = false;

        _assignment.assign(cells, -1);
        _next_value.assign(cells + 1, 0);
        _trail_mark.assign(cells, 0);
    }

    void PolymorphismSearch::initialise()
    {
        _started = true;
        if (! _forced_consistent) {
            _exhausted = true;
            return;
        }
        if (_options.propagation != Propagation::none)
            for (auto d : _domain)
                if (d == 0) {
                    _exhausted = true;
                    return;
                }
        if (_options.propagation == Propagation::arc_consistency)
            for (int c = 0; c < static_cast<int>(_domain.size()); ++c)
                if (! propagate(c)) {
                    _exhausted = true;
                    return;
                }
        for (auto & [cell, value] : _scheme.prefix)
            if (! try_assign(cell, value)) {
                _exhausted = true;
                return;
            }
        _start = _cursor = static_cast<int>(_scheme.prefix.size());
    }

    auto PolymorphismSearch::try_assign(int cell, int v) -> bool
    {
        if (! ((_domain[cell] >> v) & 1u))
            return false;
        for (auto d : _points_to[cell])
            if (_assignment[d] >= 0 && ! ((_out[v] >> _assignment[d]) & 1u))
                return false;
        for (auto d : _pointed_from[cell])
            if (_assignment[d] >= 0 && ! ((_out[_assignment[d]] >> v) & 1u))
                return false;

        for (auto t : _scheme.cells[cell].links)
            _value_of_tuple[t] = v;
        _assignment[cell] = v;
        _trail_mark[cell] = _trail.size();

        if (_scheme.kind == SchemeKind::semilattice2 && ! absorption_holds()) {
            unassign(cell);
            return false;
        }

        bool consistent = true;
        switch (_options.propagation) {
        case Propagation::none:
            break;
        case Propagation::forward_checking:
            for (auto d : _points_to[cell])
                consistent = consistent && (_assignment[d] >= 0 || narrow(d, _out[v]));
            for (auto d : _pointed_from[cell])
                consistent = consistent && (_assignment[d] >= 0 || narrow(d, _in[v]));
            break;
        case Propagation::arc_consistency:
            narrow(cell, 1u << v);
            consistent = propagate(cell);
            break;
        }
        if (! consistent) {
            unassign(cell);
            return false;
        }
        return true;
    }

    auto PolymorphismSearch::narrow(int cell, unsigned keep) -> bool
    {
        auto narrowed = static_cast<ValueMask>(_domain[cell] & keep);
        if (narrowed != _domain[cell]) {
            _trail.emplace_back(cell, _domain[cell]);
            _domain[cell] = narrowed;
        }
        return narrowed != 0;
    }

    auto PolymorphismSearch::propagate(int from) -> bool
    {
        std::vector<int> queue{from};
        while (! queue.empty()) {
            int e = queue.back();
            queue.pop_back();
            auto revise = [&](int d, bool e_points_to_d) {
                if (_assignment[d] >= 0)
                    return true;
                unsigned supported = 0;
                for (int w = 0; w < _scheme.n; ++w)
                    if ((_domain[d] >> w) & 1u) {
                        unsigned partners = e_points_to_d ? _in[w] : _out[w];
                        if (partners & _domain[e])
                            supported |= 1u << w;
                    }
                if (supported == _domain[d])
                    return true;
                if (! narrow(d, supported))
                    return false;
                queue.push_back(d);
                return true;
            };
            for (auto d : _points_to[e])
                if (! revise(d, true))
                    return false;
            for (auto d : _pointed_from[e])
                if (! revise(d, false))
                    return false;
        }
        return true;
    }

    void PolymorphismSearch::unassign(int cell)
    {
        while (_trail.size() > _trail_mark[cell]) {
            auto [d, mask] = _trail.back();
            _domain[d] = mask;
            _trail.pop_back();
        }
        for (auto t : _scheme.cells[cell].links)
            _value_of_tuple[t] = -1;
        _assignment[cell] = -1;
    }

    auto PolymorphismSearch::absorption_holds() const -> bool
    {
        // f(f(x,y),x) = f(x,y): with v = f(x,y) outside {x,y}, f(v,x) and f(v,y) must be v.
        int n = _scheme.n;
        for (auto & c : _scheme.cells) {
            auto xy = c.links.front();
            int v = _value_of_tuple[xy];
            if (v < 0)
                continue;
            int x = xy / n, y = xy % n;
            for (int z : {x, y}) {
                if (v == z)
                    continue;
                int w = _value_of_tuple[v * n + z];
                if (w >= 0 && w != v)
                    return false;
            }
        }
        return true;
    }

    auto PolymorphismSearch::next() -> SearchOutcome
    {
        int cells = static_cast<int>(_scheme.cells.size());
        if (! _started)
            initialise();
        else if (! _exhausted) {
            // Resume just past the previous solution.
            if (_cursor == _start)
                _exhausted = true;
            else
                unassign(--_cursor);
        }

        while (! _exhausted) {
            if (_cursor == cells) {
                SearchOutcome out{SearchStatus::found, expand_to_table(_scheme, _assignment), _assignment, _stats};
                if (! verify_table(_graph, *out.witness, _scheme.kind, _scheme.companion ? &*_scheme.companion : nullptr))
                    throw std::logic_error("search produced a table that fails verification");
                return out;
            }

            bool advanced = false;
            auto domain = _domain[_cursor];
            for (int v = _next_value[_cursor]; v < _scheme.n; ++v) {
                if (! ((domain >> v) & 1u))
                    continue;
                if (_options.node_budget && _stats.nodes >= _options.node_budget) {
                    _next_value[_cursor] = v;
                    return {SearchStatus::undecided, std::nullopt, {}, _stats};
                }
                ++_stats.nodes;
                if (try_assign(_cursor, v)) {
                    _next_value[_cursor] = v + 1;
                    _next_value[++_cursor] = 0;
                    advanced = true;
                    break;
                }
            }
            if (! advanced) {
                if (_cursor == _start) {
                    _exhausted = true;
                    break;
                }
                ++_stats.backtracks;
                unassign(--_cursor);
            }
        }
        return {SearchStatus::not_found, std::nullopt, {}, _stats};
    }

    auto check_partial(const Digraph & g, const IdentityScheme & scheme, const Assignment & a, int new_cell, int v) -> bool
    {
        if (new_cell < 0 || new_cell >= static_cast<int>(scheme.cells.size()) || a.size() != scheme.cells.size())
            throw DomainError("check_partial: cell or assignment does not match the scheme");

        int n = g.vertex_count();
        int count = tuple_count(n, scheme.arity);
        std::vector<int> value(count, -1);
        for (auto & [t, w] : scheme.forced)
            value[t] = w;
        for (int c = 0; c < new_cell; ++c) {
            if (a[c] < 0)
                throw DomainError("check_partial: cells before the cursor must be assigned");
            for (auto t : scheme.cells[c].links)
                value[t] = a[c];
        }

        auto & cell = scheme.cells[new_cell];
        if (v < 0 || v >= n || ! ((cell.domain >> v) & 1u))
            return false;
        for (auto t : cell.links)
            value[t] = v;

        // Pair-by-pair from the definition: s -> s' componentwise forces f(s) -> f(s').
        for (auto t : cell.links) {
            auto s = decode_tuple(n, scheme.arity, t);
            for (int u = 0; u < count; ++u) {
                if (value[u] < 0)
                    continue;
                auto s2 = decode_tuple(n, scheme.arity, static_cast<TupleCode>(u));
                bool forward = true, backward = true;
                for (int i = 0; i < scheme.arity; ++i) {
                    forward = forward && g.has_edge(s[i], s2[i]);
                    backward = backward && g.has_edge(s2[i], s[i]);
                }
                if (forward && ! g.has_edge(v, value[u]))
                    return false;
                if (backward && ! g.has_edge(value[u], v))
                    return false;
            }
        }

        if (scheme.kind == SchemeKind::semilattice2) {
            for (auto & c : scheme.cells) {
                auto xy = c.links.front();
                int w = value[xy];
                if (w < 0)
                    continue;
                for (int z : {xy / n, xy % n})
                    if (w != z && value[w * n + z] >= 0 && value[w * n + z] != w)
                        return false;
            }
        }
        return true;
    }

    auto search(const Digraph & g, const IdentityScheme & scheme, SearchOptions options) -> SearchOutcome
    {
        return PolymorphismSearch(g, scheme, options).next();
    }

    auto verify_table(const Digraph & g, const OperationTable & t, SchemeKind kind, const OperationTable * companion) -> bool
    {
        if (t.n != g.vertex_count() || t.arity != arity_of(kind)
            || t.values.size() != static_cast<std::size_t>(tuple_count(t.n, t.arity)))
            return false;
        if (! preserves_edges(g, t))
            return false;
        if (kind == SchemeKind::p_given_q)
            return companion && preserves_edges(g, *companion) && satisfies_pq_system(t, *companion);
        return satisfies_identities(t, kind);
    }

    auto exhaustive_oracle(const Digraph & g, const IdentityScheme & scheme, std::uint64_t limit) -> SearchOutcome
    {
        int n = g.vertex_count();
        if (scheme.n != n)
            throw DomainError("scheme and digraph disagree on n");
        std::size_t cells = scheme.cells.size();

        std::vector<std::vector<int>> choices(cells);
        for (std::size_t c = 0; c < cells; ++c)
            choices[c] = mask_values(scheme.cells[c].domain);
        for (auto & [cell, value] : scheme.prefix)
            choices[cell] = {value};

        std::uint64_t space = 1;
        for (auto & ch : choices) {
            if (ch.empty())
                return {SearchStatus::not_found, std::nullopt, {}, {}};
            if (space > limit / ch.size())
                throw CapacityError("exhaustive oracle: search space exceeds " + std::to_string(limit) + " assignments");
            space *= ch.size();
        }

        // Tuple pairs (s, s') with s -> s' componentwise; a table must map each to an edge.
        int count = tuple_count(n, scheme.arity);
        std::vector<std::pair<TupleCode, TupleCode>> premises;
        for (int s = 0; s < count; ++s)
            for (int s2 = 0; s2 < count; ++s2) {
                auto a = decode_tuple(n, scheme.arity, static_cast<TupleCode>(s));
                auto b = decode_tuple(n, scheme.arity, static_cast<TupleCode>(s2));
                bool all = true;
                for (int i = 0; i < scheme.arity; ++i)
                    all = all && g.has_edge(a[i], b[i]);
                if (all)
                    premises.emplace_back(static_cast<TupleCode>(s), static_cast<TupleCode>(s2));
            }

        const OperationTable * companion = scheme.companion ? &*scheme.companion : nullptr;
        std::vector<std::size_t> digit(cells, 0);
        Assignment a(cells);
        for (std::size_t c = 0; c < cells; ++c)
            a[c] = choices[c][0];
        auto table = expand_to_table(scheme, a);
        SearchStats stats;
        while (true) {
            ++stats.nodes;
            bool ok = true;
            for (auto & [s, s2] : premises)
                if (! g.has_edge(table.values[s], table.values[s2])) {
                    ok = false;
                    break;
                }
            if (ok && verify_table(g, table, scheme.kind, companion))
                return {SearchStatus::found, std::move(table), a, stats};

            // Odometer with the last cell fastest; only changed cells are rewritten.
            std::size_t c = cells;
            while (true) {
                if (c == 0)
                    return {SearchStatus::not_found, std::nullopt, {}, stats};
                --c;
                bool carry = ++digit[c] == choices[c].size();
                if (carry)
                    digit[c] = 0;
                a[c] = choices[c][digit[c]];
                for (auto t : scheme.cells[c].links)
                    table.values[t] = static_cast<Vertex>(a[c]);
                if (! carry)
                    break;
            }
        }
    }

    auto search_prefix_fixing(const Digraph & g, const IdentityScheme & restricted, SearchOptions options) -> SearchOutcome
    {
        // Move two-valued pair cells to the front, keep the rest in order.
        IdentityScheme base = restricted;
        base.cells.clear();
        base.prefix.clear();
        std::vector<Cell> rest;
        for (std::size_t c = 0; c < restricted.cells.size(); ++c) {
            auto & cell = restricted.cells[c];
            bool pair_cell = cell.links.size() > 1 && std::popcount(static_cast<unsigned>(cell.domain)) == 2;
            (pair_cell ? base.cells : rest).push_back(cell);
        }
        auto fixed = base.cells.size();
        base.cells.insert(base.cells.end(), rest.begin(), rest.end());

        SearchStats total;
        std::vector<std::size_t> digit(fixed, 0);
        std::vector<std::vector<int>> values(fixed);
        for (std::size_t c = 0; c < fixed; ++c)
            values[c] = mask_values(base.cells[c].domain);

        bool undecided = false;
        while (true) {
            auto attempt = base;
            for (std::size_t c = 0; c < fixed; ++c)
                attempt.prefix.emplace_back(static_cast<int>(c), values[c][digit[c]]);
            SearchOptions left = options;
            if (options.node_budget)
                left.node_budget = options.node_budget > total.nodes ? options.node_budget - total.nodes : 1;
            auto out = search(g, attempt, left);
            total.nodes += out.stats.nodes;
            total.backtracks += out.stats.backtracks;
            if (out.found()) {
                out.stats = total;
                return out;
            }
            if (out.status == SearchStatus::undecided)
                undecided = true;
            if (options.node_budget && total.nodes >= options.node_budget)
                return {SearchStatus::undecided, std::nullopt, {}, total};

            std::size_t c = fixed;
            bool wrapped = true;
            while (c > 0) {
                --c;
                if (++digit[c] < values[c].size()) {
                    wrapped = false;
                    break;
                }
                digit[c] = 0;
            }
            if (wrapped)
                break;
        }
        return {undecided ? SearchStatus::undecided : SearchStatus::not_found, std::nullopt, {}, total};
    }
}
