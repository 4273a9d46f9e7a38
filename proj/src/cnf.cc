#include <dpoly/cnf.hh>
#include <dpoly/errors.hh>

namespace dpoly
{
    namespace
    {
        auto axiom(std::string_view tag, std::string_view body) -> std::string
        {
            return "cnf(" + std::string(tag) + ", axiom, " + std::string(body) + ").";
        }

        auto preservation3(char f) -> std::string
        {
            std::string s = "~gr(X0,X1) | ~gr(X2,X3) |  ~gr(X4,X5) | gr(f(X0,X2,X4),f(X1,X3,X5))";
            for (auto & c : s)
                if (c == 'f')
                    c = f;
            return axiom("pr", s);
        }

        auto vertex(int i) -> std::string { return "n" + std::to_string(i); }
    }

    auto CnfDocument::text() const -> std::string
    {
        std::string s;
        for (auto & l : lines) {
            s += l;
            s += '\n';
        }
        return s;
    }

    auto build_cnf(const Digraph & g, SchemeKind kind) -> CnfDocument
    {
        CnfDocument doc{g, kind, {}};
        auto & out = doc.lines;
        switch (kind) {
            case SchemeKind::p_given_q:
                out.push_back(axiom("mt", "p(X,X,X)=X"));
                out.push_back(axiom("mt", "p(X,X,Y)=p(X,Y,Y)"));
                out.push_back(preservation3('p'));
                out.push_back(axiom("wnu", "g(X,X,X)=X"));
                out.push_back(axiom("wnu", "g(X,X,Y)=g(X,Y,X)"));
                out.push_back(axiom("wnu", "g(X,X,Y)=g(Y,X,X)"));
                out.push_back(preservation3('g'));
                out.push_back(axiom("mt", "p(X,Y,X)=g(Y,X,X)"));
                break;
            case SchemeKind::majority:
                out.push_back(axiom("nu", "f(X,X,Y)=X"));
                out.push_back(axiom("nu", "f(X,Y,X)=X"));
                out.push_back(axiom("nu", "f(Y,X,X)=X"));
                out.push_back(preservation3('f'));
                break;
            case SchemeKind::wnu3:
                out.push_back(axiom("wnu", "f(X,X,X)=X"));
                out.push_back(axiom("wnu", "f(X,X,Y)=f(X,Y,X)"));
                out.push_back(axiom("wnu", "f(X,X,Y)=f(Y,X,X)"));
                out.push_back(preservation3('f'));
                break;
            case SchemeKind::wnu2:
                out.push_back(axiom("wnu", "f(X,X)=X"));
                out.push_back(axiom("wnu", "f(X,Y)=f(Y,X)"));
                out.push_back(axiom("pr", "~gr(X0,X1) | ~gr(X2,X3) | gr(f(X0,X2),f(X1,X3))"));
                break;
            case SchemeKind::semilattice2:
                throw DomainError("no CNF template for 2sml");
        }

        int n = g.vertex_count();
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out.push_back(axiom("graph", (g.has_edge(i, j) ? "gr(" : "~gr(") + vertex(i) + "," + vertex(j) + ")"));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                out.push_back(axiom("elems", vertex(i) + "!=" + vertex(j)));
        std::string closure = "(";
        for (int i = 0; i < n; ++i)
            closure += (i ? " | X=" : "X=") + vertex(i);
        out.push_back(axiom("elems", closure + ")"));
        return doc;
    }
}
