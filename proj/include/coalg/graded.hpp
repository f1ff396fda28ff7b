#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "coalg/lincomb.hpp"
#include "coalg/rational.hpp"

namespace coalg {

// ---------------------------------------------------------------------------
// Graded spaces
// ---------------------------------------------------------------------------

struct Generator {
    std::string id;
    int degree = 0;
};

/// A finite graded ℚ-basis. Connected spaces carry exactly one degree-0
/// generator named "1" (the counit element), stored first.
class GradedSpace {
public:
    GradedSpace() = default;

    static GradedSpace connected(std::vector<Generator> reduced_gens) {
        GradedSpace s;
        s.connected_ = true;
        s.gens_.push_back({"1", 0});
        for (auto& g : reduced_gens) s.push(std::move(g));
        return s;
    }

    static GradedSpace plain(std::vector<Generator> gens) {
        GradedSpace s;
        s.connected_ = false;
        for (auto& g : gens) s.push(std::move(g));
        return s;
    }

    bool is_connected() const { return connected_; }
    int size() const { return static_cast<int>(gens_.size()); }
    const Generator& gen(int i) const { return gens_.at(static_cast<std::size_t>(i)); }
    int degree(int i) const { return gen(i).degree; }
    const std::vector<Generator>& generators() const { return gens_; }
    int counit() const { return connected_ ? 0 : -1; }

    int index_of(const std::string& id) const {
        for (int i = 0; i < size(); ++i)
            if (gens_[static_cast<std::size_t>(i)].id == id) return i;
        return -1;
    }

    /// Indices of the positive-degree generators.
    std::vector<int> reduced_indices() const {
        std::vector<int> out;
        for (int i = 0; i < size(); ++i)
            if (degree(i) > 0) out.push_back(i);
        return out;
    }

private:
    void push(Generator g) {
        if (index_of(g.id) >= 0) throw std::invalid_argument("duplicate generator id: " + g.id);
        if (connected_ && g.degree == 0)
            throw std::invalid_argument("connected space admits no degree-0 generator besides 1");
        if (g.degree < 0) throw std::invalid_argument("negative degree generator: " + g.id);
        gens_.push_back(std::move(g));
    }

    std::vector<Generator> gens_;
    bool connected_ = false;
};

// ---------------------------------------------------------------------------
// Tensor words
// ---------------------------------------------------------------------------

/// A basis word of C^{(x)r}: ordered generator indices. The empty word is the
/// scalar unit of tensor-arity 0.
using TensorWord = std::vector<int>;
using Element = LinComb<TensorWord>;

inline int word_degree(const GradedSpace& s, const TensorWord& w) {
    int d = 0;
    for (int g : w) d += s.degree(g);
    return d;
}

inline int element_degree(const GradedSpace& s, const Element& x) {
    int d = -1;
    for (const auto& [w, c] : x) {
        const int wd = word_degree(s, w);
        if (d == -1) d = wd;
        else if (d != wd) throw std::invalid_argument("element is not degree-homogeneous");
    }
    return d;
}

inline int element_arity(const Element& x) {
    int r = -1;
    for (const auto& [w, c] : x) {
        if (r == -1) r = static_cast<int>(w.size());
        else if (r != static_cast<int>(w.size()))
            throw std::invalid_argument("element mixes tensor arities");
    }
    return r;
}

// ---------------------------------------------------------------------------
// Koszul signs and permutations
// ---------------------------------------------------------------------------

inline int koszul_sign(int p, int q) { return (p % 2 != 0 && q % 2 != 0) ? -1 : 1; }

/// A permutation acting on tensor slots: out[j] = in[perm[j]].
using Perm = std::vector<int>;

inline int perm_parity(const Perm& p) {
    int inv = 0;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) ++inv;
    return (inv % 2 == 0) ? 1 : -1;
}

/// Koszul sign of rearranging homogeneous slots of the given degrees so that
/// out[j] = in[perm[j]]; independent of the transposition decomposition.
inline int koszul_of_perm(const Perm& p, const std::vector<int>& degs) {
    long long e = 0;
    std::vector<char> consumed(p.size(), 0);
    for (std::size_t j = 0; j < p.size(); ++j) {
        const int s = p[j];
        long long passed = 0;
        for (int k = 0; k < s; ++k)
            if (!consumed[static_cast<std::size_t>(k)]) passed += degs[static_cast<std::size_t>(k)];
        if (degs[static_cast<std::size_t>(s)] % 2 != 0 && passed % 2 != 0) e += 1;
        consumed[static_cast<std::size_t>(s)] = 1;
    }
    return (e % 2 == 0) ? 1 : -1;
}

/// Applies the Koszul-signed slot permutation (epsilon only, no sgn) to a
/// linear combination whose slot degrees are supplied by `slot_deg`.
template <typename Slot>
LinComb<std::vector<Slot>> permute(const Perm& p, const LinComb<std::vector<Slot>>& x,
                                   const std::function<int(const Slot&)>& slot_deg) {
    LinComb<std::vector<Slot>> out;
    for (const auto& [w, c] : x) {
        if (w.size() != p.size()) throw std::invalid_argument("permute: arity mismatch");
        std::vector<int> degs(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) degs[i] = slot_deg(w[i]);
        std::vector<Slot> per(w.size());
        for (std::size_t j = 0; j < w.size(); ++j) per[j] = w[p[j]];
        out.add(per, c * koszul_of_perm(p, degs));
    }
    return out;
}

namespace detail {

template <typename F>
void for_each_perm(int r, F&& f) {
    Perm p(static_cast<std::size_t>(r));
    std::iota(p.begin(), p.end(), 0);
    do {
        f(p);
    } while (std::next_permutation(p.begin(), p.end()));
}

/// (i, r-i)-shuffles in the orientation that distributes the first block
/// across the output: the first i input slots land on an increasing choice
/// of output positions, keeping both block orders. This is the orientation
/// under which the cobracket of a Lie coalgebra satisfies the arity-3 axiom
/// (the cyclic co-Jacobi sum).
template <typename F>
void for_each_shuffle(int i, int r, F&& f) {
    std::vector<int> pick(static_cast<std::size_t>(i));
    std::function<void(int, int)> rec = [&](int pos, int from) {
        if (pos == i) {
            Perm placement;
            placement.reserve(static_cast<std::size_t>(r));
            placement.insert(placement.end(), pick.begin(), pick.end());
            std::vector<char> used(static_cast<std::size_t>(r), 0);
            for (int v : pick) used[static_cast<std::size_t>(v)] = 1;
            for (int v = 0; v < r; ++v)
                if (!used[static_cast<std::size_t>(v)]) placement.push_back(v);
            // placement[j] = output position of input slot j; the slot
            // action needs the inverse.
            Perm p(static_cast<std::size_t>(r));
            for (int j = 0; j < r; ++j)
                p[static_cast<std::size_t>(placement[static_cast<std::size_t>(j)])] = j;
            f(p);
            return;
        }
        for (int v = from; v < r; ++v) {
            pick[static_cast<std::size_t>(pos)] = v;
            rec(pos + 1, v + 1);
        }
    };
    if (i == 0) {
        Perm p(static_cast<std::size_t>(r));
        std::iota(p.begin(), p.end(), 0);
        f(p);
        return;
    }
    rec(0, 0);
}

}  // namespace detail

template <typename Slot>
int element_vector_arity(const LinComb<std::vector<Slot>>& x) {
    int r = -1;
    for (const auto& [w, c] : x) {
        if (r == -1) r = static_cast<int>(w.size());
        else if (r != static_cast<int>(w.size()))
            throw std::invalid_argument("element mixes tensor arities");
    }
    return r;
}

/// S(r): the signed sum over all permutations with sgn * Koszul weights.
template <typename Slot>
LinComb<std::vector<Slot>> full_symmetrize(int r, const LinComb<std::vector<Slot>>& x,
                                           const std::function<int(const Slot&)>& slot_deg) {
    if (!x.is_zero() && element_vector_arity(x) != r)
        throw std::invalid_argument("full_symmetrize: arity mismatch");
    LinComb<std::vector<Slot>> out;
    detail::for_each_perm(r, [&](const Perm& p) {
        auto term = permute(p, x, slot_deg);
        term *= Rational(perm_parity(p));
        out += term;
    });
    return out;
}

/// S(i, r-i): the signed sum over the C(r, i) shuffles.
template <typename Slot>
LinComb<std::vector<Slot>> shuffle_sum(int i, int r, const LinComb<std::vector<Slot>>& x,
                                       const std::function<int(const Slot&)>& slot_deg) {
    if (i < 0 || i > r) throw std::invalid_argument("shuffle_sum: split out of range");
    if (!x.is_zero() && element_vector_arity(x) != r)
        throw std::invalid_argument("shuffle_sum: arity mismatch");
    LinComb<std::vector<Slot>> out;
    detail::for_each_shuffle(i, r, [&](const Perm& p) {
        auto term = permute(p, x, slot_deg);
        term *= Rational(perm_parity(p));
        out += term;
    });
    return out;
}

}  // namespace coalg
