#include <dpoly/invariants.hh>

#include <algorithm>
#include <array>
#include <bit>
#include <map>

namespace dpoly
{
    auto enumerate_proper_subsets(int n) -> const std::vector<VertexSet> &
    {
        static const auto tables = [] {
            std::array<std::vector<VertexSet>, max_vertices + 1> t;
            for (int m = min_vertices; m <= max_vertices; ++m) {
                for (int size = 2; size < m; ++size) {
                    std::vector<VertexSet> of_size;
                    for (unsigned s = 0; s < (1u << m); ++s)
                        if (std::popcount(s) == size)
                            of_size.push_back(static_cast<VertexSet>(s));
                    // Lexicographic on the sorted element lists.
                    std::sort(of_size.begin(), of_size.end(), [](VertexSet a, VertexSet b) {
                        while (a && b) {
                            int x = std::countr_zero(a), y = std::countr_zero(b);
                            if (x != y)
                                return x < y;
                            a &= a - 1;
                            b &= b - 1;
                        }
                        return false;
                    });
                    t[m].insert(t[m].end(), of_size.begin(), of_size.end());
                }
            }
            return t;
        }();
        check_vertex_count(n);
        return tables[n];
    }

    SubsetTable::SubsetTable(int n) :
        _n(n)
    {
        check_vertex_count(n);
    }

    auto SubsetTable::marked_sets() const -> std::vector<VertexSet>
    {
        std::vector<VertexSet> r;
        auto & all = subsets();
        for (std::size_t i = 0; i < all.size(); ++i)
            if (is_marked(i))
                r.push_back(all[i]);
        return r;
    }

    auto SubsetTable::render() const -> std::string
    {
        std::string s;
        for (std::size_t i = 0; i < subsets().size(); ++i)
            s.push_back(is_marked(i) ? '1' : '0');
        return s;
    }

    auto compute_subsets(const Digraph & g) -> SubsetTable
    {
        int n = g.vertex_count();
        SubsetTable table(n);
        auto & all = enumerate_proper_subsets(n);

        unsigned has_in = 0, has_out = 0;
        std::vector<unsigned> neighbourhoods;
        for (int v = 0; v < n; ++v) {
            auto out = g.out_mask(v), in = g.in_mask(v);
            neighbourhoods.push_back(out);
            neighbourhoods.push_back(in);
            if (in)
                has_in |= 1u << v;
            if (out)
                has_out |= 1u << v;
        }

        std::map<VertexSet, std::size_t> position;
        for (std::size_t i = 0; i < all.size(); ++i) {
            position[all[i]] = i;
            unsigned s = all[i];
            if (s == has_in || s == has_out || std::find(neighbourhoods.begin(), neighbourhoods.end(), s) != neighbourhoods.end())
                table.mark(i);
        }

        bool changed = true;
        while (changed) {
            changed = false;
            auto marked = table.marked_sets();
            for (std::size_t a = 0; a < marked.size(); ++a)
                for (std::size_t b = a + 1; b < marked.size(); ++b) {
                    auto meet = static_cast<VertexSet>(marked[a] & marked[b]);
                    if (std::popcount(meet) < 2)
                        continue;
                    auto pos = position.at(meet);
                    if (! table.is_marked(pos)) {
                        table.mark(pos);
                        changed = true;
                    }
                }
        }
        return table;
    }

    auto restrict_domains(IdentityScheme scheme, const SubsetTable & t) -> IdentityScheme
    {
        if (scheme.n != t.vertex_count())
            throw DomainError("scheme and subset table disagree on n");
        auto marked = t.marked_sets();
        for (auto & cell : scheme.cells)
            for (auto tuple : cell.links) {
                VertexSet entries = 0;
                for (auto v : decode_tuple(scheme.n, scheme.arity, tuple))
                    entries = static_cast<VertexSet>(entries | (1u << v));
                for (auto s : marked)
                    if ((entries & ~s) == 0)
                        cell.domain = static_cast<ValueMask>(cell.domain & s);
            }
        return scheme;
    }

    auto table_preserves_subset(const OperationTable & t, VertexSet s) -> bool
    {
        for (int code = 0; code < static_cast<int>(t.values.size()); ++code) {
            bool inside = true;
            for (auto v : decode_tuple(t.n, t.arity, static_cast<TupleCode>(code)))
                inside = inside && ((s >> v) & 1u);
            if (inside && ! ((s >> t.values[code]) & 1u))
                return false;
        }
        return true;
    }
}
