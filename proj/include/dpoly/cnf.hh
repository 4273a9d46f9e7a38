#pragma once

#include <dpoly/digraph.hh>
#include <dpoly/schemes.hh>

#include <string>
#include <vector>

namespace dpoly
{
    /// Clause lines of a first-order CNF problem, without line terminators.
    struct CnfDocument
    {
        Digraph graph;
        SchemeKind kind;
        std::vector<std::string> lines;

        /// Lines joined with LF, including a final LF.
        auto text() const -> std::string;
    };

    /// Problem whose finite models are the polymorphisms of g of the given kind:
    /// identity axioms, a preservation clause per term, one gr/~gr fact per
    /// vertex pair in row-major order, distinctness of the constants n0..n{n-1},
    /// and domain closure. For pq the second term is written g.
    /// kind must be majority, wnu2, wnu3 or pq.
    auto build_cnf(const Digraph & g, SchemeKind kind) -> CnfDocument;

    inline auto emit_cnf(const Digraph & g, SchemeKind kind) -> std::string { return build_cnf(g, kind).text(); }
}
