#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "coalg/hopf.hpp"

namespace coalg {

// ---------------------------------------------------------------------------
// L-infinity structures
// ---------------------------------------------------------------------------

/// Symmetrized cooperations ell^r of degree r-2 over a chosen graded basis,
/// together with the alphabet they output tensors over. ell^1 is the
/// differential. In bracket mode (the free-Lie construction) the basis
/// elements are Lie brackets inside T^a and ell_2 is the commutator.
struct LInfStructure {
    std::string name;
    const GradedSpace* alphabet = nullptr;
    std::vector<LieBasisElement> basis;
    std::function<TupleElement(int, const Word&)> ell_word;
    int arity_bound = 2;
    bool has_bracket = false;

    TupleElement ell(int r, const AlgElement& x) const {
        TupleElement out;
        for (const auto& [w, c] : x) {
            TupleElement t = ell_word(r, w);
            t *= c;
            out += t;
        }
        return out;
    }
};

inline std::function<int(const Word&)> word_degree_fn(const GradedSpace& s) {
    return [&s](const Word& w) { return word_degree(s, w); };
}

/// S(r) on tuple elements (sgn * Koszul weights over slot words).
inline TupleElement symmetrize_tuples(const GradedSpace& s, int r, const TupleElement& x) {
    return full_symmetrize<Word>(r, x, word_degree_fn(s));
}

/// S(i, r-i) on tuple elements.
inline TupleElement shuffle_tuples(const GradedSpace& s, int i, int r, const TupleElement& x) {
    return shuffle_sum<Word>(i, r, x, word_degree_fn(s));
}

/// The L-infinity coalgebra associated to a base structure: ell^r = S(r) o
/// psi_r on the generators (degree-1 words), ell^1 = d.
inline LInfStructure symmetrize_base(const AInfCoalgebra& A, TensorExt& ext) {
    LInfStructure L;
    L.name = A.name + ".sym";
    L.alphabet = &A.space;
    L.arity_bound = A.max_arity;
    for (int g : A.space.reduced_indices()) {
        LieBasisElement e;
        e.name = A.space.gen(g).id;
        e.letters = {g};
        e.degree = A.space.degree(g);
        e.weight = 1;
        e.expansion = AlgElement::single(Word{g});
        L.basis.push_back(std::move(e));
    }
    L.ell_word = [&A, &ext](int r, const Word& w) -> TupleElement {
        if (r == 1) {
            TupleElement out;
            for (const auto& [dw, c] : ext.differential(w)) out.add(TensorTuple{dw}, c);
            return out;
        }
        return symmetrize_tuples(A.space, r, ext.psi(r, w));
    };
    return L;
}

/// The canonical structure on the free Lie algebra of the primitives:
/// ell^r = S(r) o rho_r on L(PC), with the commutator bracket.
inline LInfStructure free_lie_linf_structure(const AInfCoalgebra& A, TensorExt& ext,
                                          int degree_cap, int weight_cap) {
    LInfStructure L;
    L.name = A.name + ".free-lie";
    L.alphabet = &A.space;
    L.arity_bound = A.max_arity;
    L.basis = lie_basis(A.space, degree_cap, weight_cap);
    L.has_bracket = true;
    L.ell_word = [&A, &ext](int r, const Word& w) -> TupleElement {
        if (r == 1) {
            TupleElement out;
            for (const auto& [dw, c] : ext.differential(w)) out.add(TensorTuple{dw}, c);
            return out;
        }
        return symmetrize_tuples(A.space, r, ext.rho(r, w));
    };
    return L;
}

// ---------------------------------------------------------------------------
// Axioms
// ---------------------------------------------------------------------------

/// Axiom (i) in the r!-scaled form S(r) o ell^r = r! ell^r, and axiom (ii):
/// sum_i (-1)^{i(n-i)} S(i,n-i) o (ell^i (x) 1^{n-i}) o ell^{1+n-i} = 0,
/// both through arity <= arity_cap on every basis element.
inline Report check_linf(const LInfStructure& L, int degree_cap, int arity_cap) {
    Stopwatch sw;
    Report rep;
    rep.check = "check-linf";
    rep.params = "structure=" + L.name + " max-degree=" + std::to_string(degree_cap) +
                 " arities<=" + std::to_string(arity_cap);
    const GradedSpace& s = *L.alphabet;
    Rational factorial(1);
    for (int r = 2; r <= arity_cap; ++r) {
        factorial = 1;
        for (int j = 2; j <= r; ++j) factorial *= j;
        for (const auto& b : L.basis) {
            if (b.degree > degree_cap) continue;
            TupleElement lr = L.ell(r, b.expansion);
            if (lr.is_zero()) continue;
            TupleElement lhs = symmetrize_tuples(s, r, lr);
            TupleElement rhs = lr;
            rhs *= factorial;
            if (!(lhs == rhs))
                rep.witnesses.push_back({"axiom(i) r=" + std::to_string(r) + " element=" + b.name,
                                         show_tuple_element(s, lhs - rhs)});
        }
    }
    for (int n = 1; n <= arity_cap; ++n) {
        for (const auto& b : L.basis) {
            if (b.degree > degree_cap) continue;
            TupleElement total;
            for (int i = 1; i <= n; ++i) {
                const TupleElement inner = L.ell(1 + n - i, b.expansion);
                if (inner.is_zero()) continue;
                // (ell^i (x) 1^{n-i}) on the first slot, then the shuffles.
                TupleElement spread;
                for (const auto& [slots, c] : inner) {
                    TupleElement head = L.ell_word(i, slots[0]);
                    for (const auto& [ht, hc] : head) {
                        TensorTuple nt = ht;
                        nt.insert(nt.end(), slots.begin() + 1, slots.end());
                        spread.add(nt, c * hc);
                    }
                }
                if (spread.is_zero()) continue;
                TupleElement term = shuffle_tuples(s, i, n, spread);
                term *= sign_pow(static_cast<long long>(i) * (n - i));
                total += term;
            }
            if (!total.is_zero())
                rep.witnesses.push_back({"axiom(ii) n=" + std::to_string(n) + " element=" + b.name,
                                         show_tuple_element(s, total)});
        }
    }
    rep.millis = sw.ms();
    return rep;
}

// ---------------------------------------------------------------------------
// The bialgebra compatibility
// ---------------------------------------------------------------------------

/// ell^r[x,y] = sum_i y_1 (x) ... (x) [x, y_i] (x) ... (x) y_r
///            + sum_i x_1 (x) ... (x) [x_i, y] (x) ... (x) x_r
/// with the insertion Koszul signs, on all ordered pairs of basis elements
/// within the degree cap.
inline Report check_linf_bialgebra(const LInfStructure& L, int degree_cap, int arity_cap) {
    Stopwatch sw;
    Report rep;
    rep.check = "check-lbialgebra";
    rep.params = "structure=" + L.name + " max-degree=" + std::to_string(degree_cap) +
                 " arities<=" + std::to_string(arity_cap);
    if (!L.has_bracket) {
        rep.witnesses.push_back({"structure", "no bracket available (not a free-Lie construction)"});
        rep.millis = sw.ms();
        return rep;
    }
    const GradedSpace& s = *L.alphabet;
    for (const auto& bx : L.basis) {
        for (const auto& by : L.basis) {
            if (bx.degree + by.degree > degree_cap) continue;
            const AlgElement xy = bracket(s, bx.expansion, by.expansion);
            for (int r = 2; r <= arity_cap; ++r) {
                TupleElement lhs = L.ell(r, xy);
                TupleElement rhs;
                // x into the slots of ell^r(y), moving left past earlier slots.
                for (const auto& [slots, c] : L.ell(r, by.expansion)) {
                    int prefix = 0;
                    for (int i = 0; i < r; ++i) {
                        const Rational sgn =
                            (bx.degree % 2 != 0 && prefix % 2 != 0) ? Rational(-1) : Rational(1);
                        const AlgElement brack = bracket(
                            s, bx.expansion, AlgElement::single(slots[static_cast<std::size_t>(i)]));
                        for (const auto& [bw, bc] : brack) {
                            TensorTuple nt = slots;
                            nt[static_cast<std::size_t>(i)] = bw;
                            rhs.add(nt, c * sgn * bc);
                        }
                        prefix += word_degree(s, slots[static_cast<std::size_t>(i)]);
                    }
                }
                // y into the slots of ell^r(x), moving right past later slots.
                for (const auto& [slots, c] : L.ell(r, bx.expansion)) {
                    for (int i = 0; i < r; ++i) {
                        int suffix = 0;
                        for (int k = i + 1; k < r; ++k)
                            suffix += word_degree(s, slots[static_cast<std::size_t>(k)]);
                        const Rational sgn =
                            (by.degree % 2 != 0 && suffix % 2 != 0) ? Rational(-1) : Rational(1);
                        const AlgElement brack = bracket(
                            s, AlgElement::single(slots[static_cast<std::size_t>(i)]), by.expansion);
                        for (const auto& [bw, bc] : brack) {
                            TensorTuple nt = slots;
                            nt[static_cast<std::size_t>(i)] = bw;
                            rhs.add(nt, c * sgn * bc);
                        }
                    }
                }
                if (!(lhs == rhs))
                    rep.witnesses.push_back(
                        {"r=" + std::to_string(r) + " pair=(" + bx.name + "," + by.name + ")",
                         show_tuple_element(s, lhs - rhs)});
            }
        }
    }
    rep.millis = sw.ms();
    return rep;
}

// ---------------------------------------------------------------------------
// The rank invariant
// ---------------------------------------------------------------------------

/// Exact rank of ell^3 restricted to the basis elements of one degree; a
/// basis-permutation invariant that separates structures with equal graded
/// dimensions.
inline int ell3_rank_invariant(const LInfStructure& L, int degree) {
    std::vector<TupleElement> images;
    for (const auto& b : L.basis) {
        if (b.degree != degree) continue;
        TupleElement img = L.ell(3, b.expansion);
        if (!img.is_zero()) images.push_back(std::move(img));
    }
    if (images.empty()) return 0;
    return rank_of(images);
}

}  // namespace coalg
