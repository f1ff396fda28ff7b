#pragma once

#include <string>
#include <vector>

#include "coalg/linf.hpp"
#include "coalg/structure_io.hpp"

namespace coalg {

struct Caps {
    int max_degree = 12;
    int max_length = 4;
};

/// The full verification chain for one structure: quadratic relations, the
/// shuffle condition, primitives, the primitive extension relations, the
/// bialgebra formula, primitive preservation, the symmetrized axioms, the
/// bracket compatibility, and the rank invariant table.
struct PipelineResult {
    std::vector<Report> reports;
    std::vector<std::pair<int, int>> lie_dimensions;  // (degree, dim)
    std::vector<std::pair<int, int>> ell3_ranks;      // (degree, rank)
    bool pass() const {
        for (const auto& r : reports)
            if (!r.pass()) return false;
        return true;
    }
};

inline PipelineResult run_pipeline(const AInfCoalgebra& A, const Caps& caps) {
    PipelineResult out;
    TensorExt ext(A);

    out.reports.push_back(check_ainf(A, caps.max_degree));
    out.reports.push_back(check_cinf(A, caps.max_degree));

    {
        Stopwatch sw;
        Report rep;
        rep.check = "primitives";
        rep.params = "structure=" + A.name + " max-degree=" + std::to_string(caps.max_degree);
        auto prim = primitives(A, caps.max_degree);
        rep.notes.push_back("dimension " + std::to_string(prim.size()) + " through degree " +
                            std::to_string(caps.max_degree));
        rep.millis = sw.ms();
        out.reports.push_back(std::move(rep));
    }

    out.reports.push_back(check_primitive_ainf(ext, caps.max_degree, caps.max_length));
    out.reports.push_back(check_bialgebra(ext, {2, 3, 4}, caps.max_degree, caps.max_length));

    auto basis = lie_basis(A.space, caps.max_degree, caps.max_length);
    {
        std::map<int, int> dims;
        for (const auto& b : basis) dims[b.degree] += 1;
        for (const auto& [d, n] : dims) out.lie_dimensions.emplace_back(d, n);
    }
    out.reports.push_back(
        check_rho_preserves_primitives(ext, basis, caps.max_degree, A.max_arity));

    LInfStructure L = free_lie_linf_structure(A, ext, caps.max_degree, caps.max_length);
    out.reports.push_back(check_linf(L, caps.max_degree, 4));
    out.reports.push_back(check_linf_bialgebra(L, std::min(caps.max_degree, 9), 4));

    for (int d = 1; d <= caps.max_degree; ++d)
        out.ell3_ranks.emplace_back(d, ell3_rank_invariant(L, d));
    return out;
}

struct CompareResult {
    bool same_lie_dimensions = true;
    bool distinguished_by_ell3 = false;
    std::vector<std::string> lines;
};

/// Per-degree free-Lie dimensions and the ell^3 rank table side by side.
inline CompareResult compare_structures(const AInfCoalgebra& A, const AInfCoalgebra& B,
                                        const Caps& caps) {
    CompareResult out;
    TensorExt extA(A), extB(B);
    auto basisA = lie_basis(A.space, caps.max_degree, caps.max_length);
    auto basisB = lie_basis(B.space, caps.max_degree, caps.max_length);
    LInfStructure LA = free_lie_linf_structure(A, extA, caps.max_degree, caps.max_length);
    LInfStructure LB = free_lie_linf_structure(B, extB, caps.max_degree, caps.max_length);
    std::map<int, int> dimA, dimB;
    for (const auto& b : basisA) dimA[b.degree] += 1;
    for (const auto& b : basisB) dimB[b.degree] += 1;
    for (int d = 1; d <= caps.max_degree; ++d) {
        const int da = dimA.count(d) ? dimA[d] : 0;
        const int db = dimB.count(d) ? dimB[d] : 0;
        const int ra = ell3_rank_invariant(LA, d);
        const int rb = ell3_rank_invariant(LB, d);
        if (da != db) out.same_lie_dimensions = false;
        if (ra != rb) out.distinguished_by_ell3 = true;
        if (da || db || ra || rb)
            out.lines.push_back("degree " + std::to_string(d) + ": dim " + std::to_string(da) +
                                " vs " + std::to_string(db) + ", ell3 rank " + std::to_string(ra) +
                                " vs " + std::to_string(rb));
    }
    return out;
}

}  // namespace coalg
