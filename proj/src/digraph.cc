#include <dpoly/digraph.hh>

#include <algorithm>
#include <bit>
#include <numeric>
#include <ostream>

namespace dpoly
{
    void check_vertex_count(int n)
    {
        if (n < min_vertices || n > max_vertices)
            throw DomainError("vertex count " + std::to_string(n) + " outside [" + std::to_string(min_vertices) + ", "
                + std::to_string(max_vertices) + "]");
    }

    auto digraph_count(int n) -> std::uint64_t
    {
        check_vertex_count(n);
        return std::uint64_t{1} << (n * n);
    }

    VertexPermutation::VertexPermutation(std::vector<Vertex> mapping) :
        _n(static_cast<int>(mapping.size()))
    {
        check_vertex_count(_n);
        unsigned seen = 0;
        for (int v = 0; v < _n; ++v) {
            if (mapping[v] >= _n || (seen >> mapping[v]) & 1u)
                throw DomainError("permutation is not a bijection");
            seen |= 1u << mapping[v];
            _map[v] = mapping[v];
        }
    }

    auto VertexPermutation::identity(int n) -> VertexPermutation
    {
        std::vector<Vertex> m(n);
        std::iota(m.begin(), m.end(), Vertex{0});
        return VertexPermutation(std::move(m));
    }

    auto VertexPermutation::is_identity() const noexcept -> bool
    {
        for (int v = 0; v < _n; ++v)
            if (_map[v] != v)
                return false;
        return true;
    }

    auto VertexPermutation::inverse() const -> VertexPermutation
    {
        VertexPermutation r;
        r._n = _n;
        for (int v = 0; v < _n; ++v)
            r._map[_map[v]] = static_cast<Vertex>(v);
        return r;
    }

    auto VertexPermutation::after(const VertexPermutation & other) const -> VertexPermutation
    {
        if (other._n != _n)
            throw DomainError("permutation size mismatch");
        VertexPermutation r;
        r._n = _n;
        for (int v = 0; v < _n; ++v)
            r._map[v] = _map[other._map[v]];
        return r;
    }

    auto VertexPermutation::operator==(const VertexPermutation & other) const -> bool
    {
        return _n == other._n && std::equal(_map.begin(), _map.begin() + _n, other._map.begin());
    }

    auto all_permutations(int n) -> std::vector<VertexPermutation>
    {
        check_vertex_count(n);
        std::vector<Vertex> m(n);
        std::iota(m.begin(), m.end(), Vertex{0});
        std::vector<VertexPermutation> result;
        do
            result.emplace_back(m);
        while (std::next_permutation(m.begin(), m.end()));
        return result;
    }

    Digraph::Digraph(int n) :
        _n(n)
    {
        check_vertex_count(n);
    }

    auto Digraph::from_index(int n, DigraphIndex k) -> Digraph
    {
        Digraph g(n);
        if (k.value >= digraph_count(n))
            throw DomainError("digraph index " + std::to_string(k.value) + " out of range for n=" + std::to_string(n));
        g._bits = k.value;
        return g;
    }

    auto Digraph::parse(int n, std::string_view bits) -> Digraph
    {
        Digraph g(n);
        if (bits.size() != static_cast<std::size_t>(n * n))
            throw ParseError("expected " + std::to_string(n * n) + " edge characters, got " + std::to_string(bits.size()), 0);
        for (std::size_t i = 0; i < bits.size(); ++i) {
            if (bits[i] != '0' && bits[i] != '1')
                throw ParseError(std::string("invalid edge character '") + bits[i] + "'", 0);
            g._bits = (g._bits << 1) | static_cast<std::uint64_t>(bits[i] == '1');
        }
        return g;
    }

    auto Digraph::parse(std::string_view bits) -> Digraph
    {
        for (int n = min_vertices; n <= max_vertices; ++n)
            if (bits.size() == static_cast<std::size_t>(n * n))
                return parse(n, bits);
        throw ParseError("edge string length " + std::to_string(bits.size()) + " is not n*n for a supported n", 0);
    }

    void Digraph::set_edge(int from, int to, bool present)
    {
        if (from < 0 || from >= _n || to < 0 || to >= _n)
            throw DomainError("vertex out of range");
        auto mask = std::uint64_t{1} << bit_of(from, to);
        _bits = present ? (_bits | mask) : (_bits & ~mask);
    }

    auto Digraph::edge_count() const noexcept -> int
    {
        return std::popcount(_bits);
    }

    auto Digraph::out_mask(int v) const noexcept -> unsigned
    {
        unsigned m = 0;
        for (int w = 0; w < _n; ++w)
            if (has_edge(v, w))
                m |= 1u << w;
        return m;
    }

    auto Digraph::in_mask(int v) const noexcept -> unsigned
    {
        unsigned m = 0;
        for (int w = 0; w < _n; ++w)
            if (has_edge(w, v))
                m |= 1u << w;
        return m;
    }

    auto Digraph::reversed() const -> Digraph
    {
        Digraph r(_n);
        for (int i = 0; i < _n; ++i)
            for (int j = 0; j < _n; ++j)
                if (has_edge(i, j))
                    r.set_edge(j, i);
        return r;
    }

    auto Digraph::render() const -> std::string
    {
        std::string s(_n * _n, '0');
        for (int i = 0; i < _n * _n; ++i)
            if ((_bits >> (_n * _n - 1 - i)) & 1u)
                s[i] = '1';
        return s;
    }

    auto index_of(const Digraph & g) -> DigraphIndex
    {
        return g.index();
    }

    auto digraph_of(DigraphIndex k, int n) -> Digraph
    {
        return Digraph::from_index(n, k);
    }

    auto edge_count(const Digraph & g) -> int
    {
        return g.edge_count();
    }

    auto apply_permutation(const Digraph & g, const VertexPermutation & p) -> Digraph
    {
        int n = g.vertex_count();
        if (p.size() != n)
            throw DomainError("permutation size " + std::to_string(p.size()) + " does not match digraph size " + std::to_string(n));
        Digraph r(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (g.has_edge(i, j))
                    r.set_edge(p[i], p[j]);
        return r;
    }

    auto operator<<(std::ostream & s, const Digraph & g) -> std::ostream &
    {
        return s << g.render();
    }
}
