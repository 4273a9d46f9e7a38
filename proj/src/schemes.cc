#include <dpoly/schemes.hh>

#include <array>

namespace dpoly
{
    namespace
    {
        auto pow_int(int base, int exp) -> int
        {
            int r = 1;
            for (int i = 0; i < exp; ++i)
                r *= base;
            return r;
        }

        auto t3(int n, int a, int b, int c) -> TupleCode { return static_cast<TupleCode>((a * n + b) * n + c); }
        auto t2(int n, int a, int b) -> TupleCode { return static_cast<TupleCode>(a * n + b); }

        void add_diagonal(IdentityScheme & s)
        {
            for (int x = 0; x < s.n; ++x)
                s.forced.emplace_back(s.arity == 2 ? t2(s.n, x, x) : t3(s.n, x, x, x), static_cast<Vertex>(x));
        }

        void add_distinct_triples(IdentityScheme & s)
        {
            int n = s.n;
            for (int a = 0; a < n; ++a)
                for (int b = 0; b < n; ++b)
                    for (int c = 0; c < n; ++c)
                        if (a != b && b != c && a != c)
                            s.cells.push_back({{t3(n, a, b, c)}, full_mask(n)});
        }

        auto binary_commutative(SchemeKind kind, int n) -> IdentityScheme
        {
            check_vertex_count(n);
            IdentityScheme s{kind, n, 2, {}, {}, {}, {}};
            for (int x = 0; x < n; ++x)
                for (int y = x + 1; y < n; ++y)
                    s.cells.push_back({{t2(n, x, y), t2(n, y, x)}, full_mask(n)});
            add_diagonal(s);
            return s;
        }
    }

    auto to_string(SchemeKind k) -> std::string_view
    {
        switch (k) {
        case SchemeKind::majority: return "majority";
        case SchemeKind::wnu2: return "wnu2";
        case SchemeKind::wnu3: return "wnu3";
        case SchemeKind::p_given_q: return "pq";
        case SchemeKind::semilattice2: return "2sml";
        }
        return "?";
    }

    auto parse_scheme_kind(std::string_view s) -> std::optional<SchemeKind>
    {
        for (auto k : {SchemeKind::majority, SchemeKind::wnu2, SchemeKind::wnu3, SchemeKind::p_given_q, SchemeKind::semilattice2})
            if (to_string(k) == s)
                return k;
        return std::nullopt;
    }

    auto arity_of(SchemeKind k) -> int
    {
        return (k == SchemeKind::wnu2 || k == SchemeKind::semilattice2) ? 2 : 3;
    }

    auto encode_tuple(int n, std::initializer_list<int> args) -> TupleCode
    {
        int code = 0;
        for (int a : args)
            code = code * n + a;
        return static_cast<TupleCode>(code);
    }

    auto decode_tuple(int n, int arity, TupleCode t) -> std::vector<Vertex>
    {
        std::vector<Vertex> r(arity);
        for (int i = arity - 1; i >= 0; --i) {
            r[i] = static_cast<Vertex>(t % n);
            t = static_cast<TupleCode>(t / n);
        }
        return r;
    }

    auto tuple_count(int n, int arity) -> int
    {
        return pow_int(n, arity);
    }

    auto OperationTable::render() const -> std::string
    {
        std::string s;
        s.reserve(values.size());
        for (auto v : values)
            s.push_back(static_cast<char>('0' + v));
        return s;
    }

    auto OperationTable::parse(int n, int arity, std::string_view digits) -> OperationTable
    {
        OperationTable t{n, arity, {}};
        if (digits.size() != static_cast<std::size_t>(tuple_count(n, arity)))
            throw ParseError("operation table has " + std::to_string(digits.size()) + " entries, expected "
                    + std::to_string(tuple_count(n, arity)),
                0);
        for (char c : digits) {
            if (c < '0' || c >= '0' + n)
                throw ParseError(std::string("invalid table value '") + c + "'", 0);
            t.values.push_back(static_cast<Vertex>(c - '0'));
        }
        return t;
    }

    auto scheme_majority(int n) -> IdentityScheme
    {
        check_vertex_count(n);
        IdentityScheme s{SchemeKind::majority, n, 3, {}, {}, {}, {}};
        add_distinct_triples(s);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c) {
                    if (a == b || a == c)
                        s.forced.emplace_back(t3(n, a, b, c), static_cast<Vertex>(a));
                    else if (b == c)
                        s.forced.emplace_back(t3(n, a, b, c), static_cast<Vertex>(b));
                }
        return s;
    }

    auto scheme_wnu2(int n) -> IdentityScheme
    {
        return binary_commutative(SchemeKind::wnu2, n);
    }

    auto scheme_semilattice2(int n) -> IdentityScheme
    {
        return binary_commutative(SchemeKind::semilattice2, n);
    }

    auto scheme_wnu3(int n) -> IdentityScheme
    {
        check_vertex_count(n);
        IdentityScheme s{SchemeKind::wnu3, n, 3, {}, {}, {}, {}};
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (x != y)
                    s.cells.push_back({{t3(n, x, x, y), t3(n, x, y, x), t3(n, y, x, x)}, full_mask(n)});
        add_distinct_triples(s);
        add_diagonal(s);
        return s;
    }

    auto scheme_p_given_q(const Digraph & g, const OperationTable & q) -> IdentityScheme
    {
        int n = g.vertex_count();
        if (q.n != n || q.arity != 3 || ! satisfies_identities(q, SchemeKind::wnu3) || ! preserves_edges(g, q))
            throw DomainError("q is not a verified wnu3 polymorphism of this digraph");

        IdentityScheme s{SchemeKind::p_given_q, n, 3, {}, {}, {}, q};
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (x != y) {
                    s.prefix.emplace_back(static_cast<int>(s.cells.size()), q({x, x, y}));
                    s.cells.push_back({{t3(n, x, y, x)}, full_mask(n)});
                }
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                if (x != y)
                    s.cells.push_back({{t3(n, x, x, y), t3(n, x, y, y)}, full_mask(n)});
        add_distinct_triples(s);
        add_diagonal(s);
        return s;
    }

    auto scheme_for(SchemeKind k, int n) -> IdentityScheme
    {
        switch (k) {
        case SchemeKind::majority: return scheme_majority(n);
        case SchemeKind::wnu2: return scheme_wnu2(n);
        case SchemeKind::wnu3: return scheme_wnu3(n);
        case SchemeKind::semilattice2: return scheme_semilattice2(n);
        case SchemeKind::p_given_q: break;
        }
        throw DomainError("the pq scheme needs a digraph and a q witness");
    }

    auto expand_to_table(const IdentityScheme & scheme, const Assignment & a) -> OperationTable
    {
        if (a.size() != scheme.cells.size())
            throw DomainError("assignment size does not match the scheme");
        OperationTable t{scheme.n, scheme.arity, std::vector<Vertex>(tuple_count(scheme.n, scheme.arity), 0)};
        for (auto & [tuple, value] : scheme.forced)
            t.values[tuple] = value;
        for (std::size_t c = 0; c < scheme.cells.size(); ++c) {
            if (a[c] < 0 || a[c] >= scheme.n)
                throw DomainError("cell " + std::to_string(c) + " is unassigned");
            for (auto tuple : scheme.cells[c].links)
                t.values[tuple] = static_cast<Vertex>(a[c]);
        }
        return t;
    }

    auto preserves_edges(const Digraph & g, const OperationTable & t) -> bool
    {
        int n = g.vertex_count();
        if (t.n != n)
            return false;
        int count = tuple_count(n, t.arity);
        std::vector<std::vector<Vertex>> decoded;
        for (int s = 0; s < count; ++s)
            decoded.push_back(decode_tuple(n, t.arity, static_cast<TupleCode>(s)));
        // s -> s' componentwise for all pairs of tuples; enumerate pairs directly.
        for (int s = 0; s < count; ++s) {
            auto & a = decoded[s];
            for (int s2 = 0; s2 < count; ++s2) {
                auto & b = decoded[s2];
                bool premise = true;
                for (int i = 0; i < t.arity && premise; ++i)
                    premise = g.has_edge(a[i], b[i]);
                if (premise && ! g.has_edge(t.values[s], t.values[s2]))
                    return false;
            }
        }
        return true;
    }

    auto satisfies_identities(const OperationTable & t, SchemeKind kind) -> bool
    {
        int n = t.n;
        if (t.arity != arity_of(kind) || kind == SchemeKind::p_given_q)
            return false;
        if (t.arity == 2) {
            for (int x = 0; x < n; ++x) {
                if (t({x, x}) != x)
                    return false;
                for (int y = 0; y < n; ++y) {
                    if (t({x, y}) != t({y, x}))
                        return false;
                    if (kind == SchemeKind::semilattice2 && t({t({x, y}), x}) != t({x, y}))
                        return false;
                }
            }
            return true;
        }
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                auto a = t({x, x, y}), b = t({x, y, x}), c = t({y, x, x});
                if (a != b || b != c)
                    return false;
                if (kind == SchemeKind::majority && a != x)
                    return false;
                if (x == y && a != x)
                    return false;
            }
        return true;
    }

    auto satisfies_pq_system(const OperationTable & p, const OperationTable & q) -> bool
    {
        if (p.arity != 3 || q.arity != 3 || p.n != q.n || ! satisfies_identities(q, SchemeKind::wnu3))
            return false;
        int n = p.n;
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
                if (x == y && p({x, x, x}) != x)
                    return false;
                if (p({x, x, y}) != p({x, y, y}))
                    return false;
                if (p({x, y, x}) != q({x, x, y}))
                    return false;
            }
        return true;
    }
}
