#pragma once

#include <algorithm>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "coalg/lincomb.hpp"
#include "coalg/planar_tree.hpp"
#include "coalg/rational.hpp"

namespace coalg {

using Chain = LinComb<PlanarTree>;
using TreePair = std::pair<PlanarTree, PlanarTree>;
using BiChain = LinComb<TreePair>;

// ---------------------------------------------------------------------------
// Face structure
// ---------------------------------------------------------------------------

/// Codimension-1 faces of t: trees that contract back to t by collapsing one
/// internal edge. Obtained by grouping a proper contiguous run (length >= 2)
/// of some node's children under a new node.
inline std::vector<PlanarTree> faces(const PlanarTree& t) {
    if (t.is_leaf() || t.dimension() < 1)
        throw std::invalid_argument("faces: cell must have dimension >= 1");

    std::vector<PlanarTree> out;
    // Rebuild the tree with node `target` (preorder index) split at (i, k):
    // children i..i+k grouped under a new node.
    std::function<PlanarTree(const PlanarTree&, int&, int, int, int)> rebuild =
        [&](const PlanarTree& node, int& counter, int target, int i, int k) -> PlanarTree {
        if (node.is_leaf()) return node;
        const int my_index = counter++;
        std::vector<PlanarTree> ch;
        ch.reserve(node.children().size());
        for (const auto& c : node.children()) ch.push_back(rebuild(c, counter, target, i, k));
        if (my_index == target) {
            std::vector<PlanarTree> grouped(ch.begin() + i, ch.begin() + i + k + 1);
            std::vector<PlanarTree> rest;
            rest.reserve(ch.size() - k);
            rest.insert(rest.end(), ch.begin(), ch.begin() + i);
            rest.push_back(PlanarTree::make(std::move(grouped)));
            rest.insert(rest.end(), ch.begin() + i + k + 1, ch.end());
            return PlanarTree::make(std::move(rest));
        }
        return PlanarTree::make(std::move(ch));
    };

    // Enumerate nodes in preorder and all proper windows.
    std::function<void(const PlanarTree&, int&)> walk = [&](const PlanarTree& node, int& counter) {
        if (node.is_leaf()) return;
        const int my_index = counter++;
        const int m = static_cast<int>(node.children().size());
        for (int k = 1; k <= m - 2; ++k) {          // window length k+1 in 2..m-1
            for (int i = 0; i + k < m; ++i) {
                int c2 = 0;
                out.push_back(rebuild(t, c2, my_index, i, k));
            }
        }
        for (const auto& c : node.children()) walk(c, counter);
    };
    int counter = 0;
    walk(t, counter);
    return out;
}

// ---------------------------------------------------------------------------
// Boundary
// ---------------------------------------------------------------------------

namespace detail {

/// Splits at a single node are signed (-1)^{k(m+i+1)+1} where m is the node
/// arity and the grouped window is children i..i+k. Two Koszul corrections
/// apply: the node sits behind everything earlier in left-to-right postorder
/// (a child subtree is a tensor factor outside its parent in the composite),
/// and the inserted degree-(k-1) operation passes the child subtrees to the
/// right of the window when the face is rebracketed into its canonical
/// nested form. Fixed once; validated by d^2 = 0 and the chain-map solve.
inline void boundary_walk(const PlanarTree& whole, const PlanarTree& node, int& counter,
                          int& postorder_dim, Chain& out) {
    if (node.is_leaf()) return;
    const int my_index = counter++;
    const int m = static_cast<int>(node.children().size());
    for (const auto& c : node.children()) boundary_walk(whole, c, counter, postorder_dim, out);
    const int my_prefix = postorder_dim;
    std::vector<int> child_dims;
    child_dims.reserve(node.children().size());
    for (const auto& c : node.children())
        child_dims.push_back(c.is_leaf() ? 0 : c.dimension());
    for (int k = 1; k <= m - 2; ++k) {
        for (int i = 0; i + k < m; ++i) {
            int right_dim = 0;
            for (int j = i + k + 1; j < m; ++j) right_dim += child_dims[static_cast<std::size_t>(j)];
            // Rebuild the whole tree with this node split.
            std::function<PlanarTree(const PlanarTree&, int&)> rebuild =
                [&](const PlanarTree& cur, int& c2) -> PlanarTree {
                if (cur.is_leaf()) return cur;
                const int idx = c2++;
                std::vector<PlanarTree> ch;
                ch.reserve(cur.children().size());
                for (const auto& c : cur.children()) ch.push_back(rebuild(c, c2));
                if (idx == my_index) {
                    std::vector<PlanarTree> grouped(ch.begin() + i, ch.begin() + i + k + 1);
                    std::vector<PlanarTree> rest;
                    rest.insert(rest.end(), ch.begin(), ch.begin() + i);
                    rest.push_back(PlanarTree::make(std::move(grouped)));
                    rest.insert(rest.end(), ch.begin() + i + k + 1, ch.end());
                    return PlanarTree::make(std::move(rest));
                }
                return PlanarTree::make(std::move(ch));
            };
            int c2 = 0;
            const long long e = static_cast<long long>(k) * (m + i + 1) + 1 + my_prefix +
                                static_cast<long long>(k - 1) * right_dim;
            out.add(rebuild(whole, c2), sign_pow(e));
        }
    }
    postorder_dim += m - 2;
}

}  // namespace detail

/// Cellular boundary of a single cell.
inline Chain boundary(const PlanarTree& t) {
    Chain out;
    if (t.is_leaf() || t.dimension() == 0) return out;
    int counter = 0, prefix = 0;
    detail::boundary_walk(t, t, counter, prefix, out);
    return out;
}

/// Boundary of a homogeneous chain; rejects mixed-dimension input.
inline Chain boundary(const Chain& c) {
    Chain out;
    int dim = -1;
    for (const auto& [t, coef] : c) {
        if (dim == -1) dim = t.dimension();
        if (t.dimension() != dim)
            throw std::invalid_argument("boundary: chain is not dimension-homogeneous");
        if (dim == 0) continue;
        Chain b = boundary(t);
        b *= coef;
        out += b;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tamari order
// ---------------------------------------------------------------------------

namespace detail {

struct TamariTable {
    std::vector<PlanarTree> verts;
    std::map<PlanarTree, int> index;
    std::vector<std::vector<char>> reach;  // reach[u][v] == 1 iff u <= v
};

/// All trees reachable from t by one right rotation ((ab)c -> a(bc)) at the
/// root of some binary subtree.
inline std::vector<PlanarTree> right_rotations(const PlanarTree& t) {
    std::vector<PlanarTree> out;
    if (t.is_leaf()) return out;
    const auto& ch = t.children();
    // Rotation at this node: ((A B) C) -> (A (B C)).
    if (!ch[0].is_leaf()) {
        const auto& sub = ch[0].children();
        out.push_back(PlanarTree::make({sub[0], PlanarTree::make({sub[1], ch[1]})}));
    }
    // Recurse into children.
    for (std::size_t j = 0; j < ch.size(); ++j) {
        for (const auto& rot : right_rotations(ch[j])) {
            std::vector<PlanarTree> copy = ch;
            copy[j] = rot;
            out.push_back(PlanarTree::make(std::move(copy)));
        }
    }
    return out;
}

inline const TamariTable& tamari_table(int n) {
    static std::mutex mu;
    static std::map<int, TamariTable> memo;
    std::lock_guard<std::mutex> lock(mu);
    auto it = memo.find(n);
    if (it != memo.end()) return it->second;

    TamariTable tab;
    tab.verts = all_binary(n);
    for (int i = 0; i < static_cast<int>(tab.verts.size()); ++i) tab.index[tab.verts[i]] = i;
    const int N = static_cast<int>(tab.verts.size());
    tab.reach.assign(N, std::vector<char>(N, 0));
    for (int s = 0; s < N; ++s) {
        // BFS along right rotations.
        std::vector<int> stack{s};
        tab.reach[s][s] = 1;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (const auto& r : right_rotations(tab.verts[u])) {
                int v = tab.index.at(r);
                if (!tab.reach[s][v]) {
                    tab.reach[s][v] = 1;
                    stack.push_back(v);
                }
            }
        }
    }
    return memo.emplace(n, std::move(tab)).first->second;
}

}  // namespace detail

/// u <= v in the Tamari order iff v is reachable from u by right rotations.
inline bool tamari_leq(const PlanarTree& u, const PlanarTree& v) {
    if (u.arity() != v.arity()) throw std::invalid_argument("tamari_leq: arity mismatch");
    if (!u.is_binary() || !v.is_binary())
        throw std::invalid_argument("tamari_leq: arguments must be binary trees");
    const auto& tab = detail::tamari_table(u.arity());
    return tab.reach[tab.index.at(u)][tab.index.at(v)] != 0;
}

/// Tamari-least binary refinement: replace every node's fan by a left comb.
inline PlanarTree min_vertex(const PlanarTree& t) {
    if (t.is_leaf()) return t;
    std::vector<PlanarTree> parts;
    parts.reserve(t.children().size());
    for (const auto& c : t.children()) parts.push_back(min_vertex(c));
    if (parts.size() == 2) return PlanarTree::make(std::move(parts));
    return left_comb_over(std::move(parts));
}

/// Tamari-greatest binary refinement: right combs throughout.
inline PlanarTree max_vertex(const PlanarTree& t) {
    if (t.is_leaf()) return t;
    std::vector<PlanarTree> parts;
    parts.reserve(t.children().size());
    for (const auto& c : t.children()) parts.push_back(max_vertex(c));
    if (parts.size() == 2) return PlanarTree::make(std::move(parts));
    return right_comb_over(std::move(parts));
}

/// All binary refinements of a cell (used as the min/max oracle in tests).
inline std::vector<PlanarTree> binary_refinements(const PlanarTree& t) {
    if (t.is_leaf()) return {t};
    // Options per child, then all binary trees grafted over the child fan.
    std::vector<std::vector<PlanarTree>> child_opts;
    for (const auto& c : t.children()) child_opts.push_back(binary_refinements(c));
    std::vector<PlanarTree> out;
    std::vector<std::size_t> idx(child_opts.size(), 0);
    const int m = static_cast<int>(t.children().size());
    while (true) {
        std::vector<PlanarTree> parts;
        parts.reserve(idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j) parts.push_back(child_opts[j][idx[j]]);
        // Graft every binary shape with m leaves over these parts.
        for (const auto& shape : all_binary(m)) {
            std::size_t next = 0;
            std::function<PlanarTree(const PlanarTree&)> graft = [&](const PlanarTree& s) -> PlanarTree {
                if (s.is_leaf()) return parts[next++];
                std::vector<PlanarTree> ch;
                for (const auto& c : s.children()) ch.push_back(graft(c));
                return PlanarTree::make(std::move(ch));
            };
            out.push_back(graft(shape));
        }
        std::size_t j = 0;
        for (; j < idx.size(); ++j) {
            if (++idx[j] < child_opts[j].size()) break;
            idx[j] = 0;
        }
        if (j == idx.size()) break;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Cell order: a <= b iff max(a) <= min(b) in the Tamari order.
inline bool cell_leq(const PlanarTree& a, const PlanarTree& b) {
    if (a.arity() != b.arity()) throw std::invalid_argument("cell_leq: arity mismatch");
    return tamari_leq(max_vertex(a), min_vertex(b));
}

/// Faces of all codimensions, including t itself.
inline std::vector<PlanarTree> all_subcells(const PlanarTree& t) {
    std::set<PlanarTree> seen{t};
    std::vector<PlanarTree> frontier{t};
    while (!frontier.empty()) {
        std::vector<PlanarTree> next;
        for (const auto& c : frontier) {
            if (c.dimension() == 0) continue;
            for (const auto& f : faces(c))
                if (seen.insert(f).second) next.push_back(f);
        }
        frontier = std::move(next);
    }
    return std::vector<PlanarTree>(seen.begin(), seen.end());
}

// ---------------------------------------------------------------------------
// Cellular diagonal
// ---------------------------------------------------------------------------

/// (d (x) id + id (x) d) with the Koszul sign on the second factor.
inline BiChain boundary_biext(const BiChain& x) {
    BiChain out;
    for (const auto& [pair, coef] : x) {
        const auto& [a, b] = pair;
        if (a.dimension() > 0)
            for (const auto& [fa, ca] : boundary(a)) out.add({fa, b}, coef * ca);
        if (b.dimension() > 0) {
            const Rational s = sign_pow(a.dimension());
            for (const auto& [fb, cb] : boundary(b)) out.add({a, fb}, coef * s * cb);
        }
    }
    return out;
}

namespace detail {

/// Support of the diagonal on a cell: comparable pairs of complementary
/// dimension among its faces of all codimensions.
inline std::vector<TreePair> diagonal_support(const PlanarTree& t) {
    const int dim = t.dimension();
    auto cells = all_subcells(t);
    std::vector<std::vector<PlanarTree>> by_dim(static_cast<std::size_t>(dim) + 1);
    for (const auto& c : cells) by_dim[static_cast<std::size_t>(c.dimension())].push_back(c);
    std::vector<TreePair> out;
    for (int da = 0; da <= dim; ++da) {
        const int db = dim - da;
        for (const auto& a : by_dim[static_cast<std::size_t>(da)])
            for (const auto& b : by_dim[static_cast<std::size_t>(db)])
                if (cell_leq(a, b)) out.emplace_back(a, b);
    }
    return out;
}

struct DiagonalTable {
    std::map<TreePair, Rational> sign;
};

/// Solves the diagonal signs of K_n dimension by dimension from the
/// chain-map property, with min(t)(x)t and t(x)max(t) normalized to +1.
inline const DiagonalTable& diagonal_table(int n) {
    static std::mutex mu;
    static std::map<int, DiagonalTable> memo;
    std::lock_guard<std::mutex> lock(mu);
    auto found = memo.find(n);
    if (found != memo.end()) return found->second;

    DiagonalTable tab;
    std::vector<std::vector<PlanarTree>> by_dim(static_cast<std::size_t>(std::max(n - 1, 1)));
    for (const auto& c : all_cells(n)) by_dim[static_cast<std::size_t>(c.dimension())].push_back(c);

    for (const auto& v : by_dim[0]) tab.sign[{v, v}] = 1;

    for (int d = 1; d <= n - 2; ++d) {
        // Seed the extreme pairs of every cell of this dimension.
        for (const auto& t : by_dim[static_cast<std::size_t>(d)]) {
            tab.sign[{min_vertex(t), t}] = 1;
            tab.sign[{t, max_vertex(t)}] = 1;
        }
        // Assemble chain-map constraints over the remaining unknowns.
        std::map<TreePair, int> unknown_index;
        std::vector<TreePair> unknowns;
        std::vector<std::map<int, Rational>> rows;
        std::vector<Rational> rhs;

        for (const auto& t : by_dim[static_cast<std::size_t>(d)]) {
            auto supp = diagonal_support(t);
            for (const auto& p : supp)
                if (!tab.sign.count(p) && !unknown_index.count(p)) {
                    unknown_index[p] = static_cast<int>(unknowns.size());
                    unknowns.push_back(p);
                }

            // Row accumulators keyed by basis bi-cells of total dimension d-1.
            std::map<TreePair, std::map<int, Rational>> lhs_unknown;
            BiChain lhs_known;
            for (const auto& p : supp) {
                BiChain contrib = boundary_biext(BiChain::single(p));
                auto it = tab.sign.find(p);
                if (it != tab.sign.end()) {
                    contrib *= it->second;
                    lhs_known += contrib;
                } else {
                    const int col = unknown_index.at(p);
                    for (const auto& [key, c] : contrib) lhs_unknown[key][col] += c;
                }
            }
            // Right side: diagonal of the boundary, using already-solved cells.
            BiChain rhs_chain;
            for (const auto& [f, cf] : boundary(t)) {
                for (const auto& p : diagonal_support(f)) {
                    auto it = tab.sign.find(p);
                    if (it == tab.sign.end())
                        throw std::logic_error("diagonal_table: face diagonal not yet solved");
                    rhs_chain.add(p, cf * it->second);
                }
            }
            BiChain resid = rhs_chain - lhs_known;
            std::set<TreePair> keys;
            for (const auto& [k, c] : resid) keys.insert(k);
            for (const auto& [k, cols] : lhs_unknown) keys.insert(k);
            for (const auto& k : keys) {
                auto itc = lhs_unknown.find(k);
                std::map<int, Rational> row = (itc == lhs_unknown.end()) ? std::map<int, Rational>{} : itc->second;
                for (auto it2 = row.begin(); it2 != row.end();) {
                    if (it2->second == 0) it2 = row.erase(it2);
                    else ++it2;
                }
                const Rational b = resid.coeff(k);
                if (row.empty()) {
                    if (b != 0) throw std::logic_error("diagonal_table: inconsistent constant row");
                    continue;
                }
                rows.push_back(std::move(row));
                rhs.push_back(b);
            }
        }

        // Exact Gaussian elimination.
        std::vector<Rational> value(unknowns.size());
        std::vector<char> solved(unknowns.size(), 0);
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t r = 0; r < rows.size(); ++r) {
                auto& row = rows[r];
                // Substitute solved unknowns.
                for (auto it = row.begin(); it != row.end();) {
                    if (solved[static_cast<std::size_t>(it->first)]) {
                        rhs[r] -= it->second * value[static_cast<std::size_t>(it->first)];
                        it = row.erase(it);
                        progress = true;
                    } else {
                        ++it;
                    }
                }
                if (row.size() == 1) {
                    const int col = row.begin()->first;
                    value[static_cast<std::size_t>(col)] = rhs[r] / row.begin()->second;
                    solved[static_cast<std::size_t>(col)] = 1;
                    row.clear();
                    rhs[r] = 0;
                    progress = true;
                } else if (row.empty() && rhs[r] != 0) {
                    throw std::logic_error("diagonal_table: inconsistent system");
                }
            }
        }
        // Full elimination for anything the substitution pass left.
        std::vector<std::size_t> open;
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (!rows[r].empty()) open.push_back(r);
        if (!open.empty()) {
            for (std::size_t pass = 0; pass < open.size(); ++pass) {
                // Pick a pivot row with the fewest entries.
                std::size_t best = open.size();
                for (std::size_t oi = 0; oi < open.size(); ++oi)
                    if (!rows[open[oi]].empty() &&
                        (best == open.size() || rows[open[oi]].size() < rows[open[best]].size()))
                        best = oi;
                if (best == open.size()) break;
                const std::size_t pr = open[best];
                const int pc = rows[pr].begin()->first;
                const Rational pv = rows[pr].begin()->second;
                for (std::size_t oi = 0; oi < open.size(); ++oi) {
                    const std::size_t r2 = open[oi];
                    if (r2 == pr) continue;
                    auto it = rows[r2].find(pc);
                    if (it == rows[r2].end()) continue;
                    const Rational factor = it->second / pv;
                    for (const auto& [c2, v2] : rows[pr]) {
                        auto& slot = rows[r2][c2];
                        slot -= factor * v2;
                        if (slot == 0) rows[r2].erase(c2);
                    }
                    rhs[r2] -= factor * rhs[pr];
                }
            }
            // Back-substitute rows that became singletons.
            bool more = true;
            while (more) {
                more = false;
                for (std::size_t r = 0; r < rows.size(); ++r) {
                    auto& row = rows[r];
                    for (auto it = row.begin(); it != row.end();) {
                        if (solved[static_cast<std::size_t>(it->first)]) {
                            rhs[r] -= it->second * value[static_cast<std::size_t>(it->first)];
                            it = row.erase(it);
                        } else {
                            ++it;
                        }
                    }
                    if (row.size() == 1) {
                        const int col = row.begin()->first;
                        value[static_cast<std::size_t>(col)] = rhs[r] / row.begin()->second;
                        solved[static_cast<std::size_t>(col)] = 1;
                        row.clear();
                        rhs[r] = 0;
                        more = true;
                    } else if (row.empty() && rhs[r] != 0) {
                        throw std::logic_error("diagonal_table: inconsistent system after elimination");
                    }
                }
            }
        }
        for (std::size_t u = 0; u < unknowns.size(); ++u) {
            if (!solved[u])
                throw std::logic_error("diagonal_table: underdetermined sign for pair " +
                                       unknowns[u].first.render() + " | " + unknowns[u].second.render());
            if (value[u] != 1 && value[u] != -1)
                throw std::logic_error("diagonal_table: non-unit sign " + to_string(value[u]) +
                                       " for pair " + unknowns[u].first.render() + " | " +
                                       unknowns[u].second.render());
            tab.sign[unknowns[u]] = value[u];
        }
    }
    return memo.emplace(n, std::move(tab)).first->second;
}

}  // namespace detail

/// The cellular diagonal of a cell: the signed sum over comparable pairs of
/// complementary-dimension faces.
inline BiChain diagonal(const PlanarTree& t) {
    if (t.is_leaf()) throw std::invalid_argument("diagonal: not a cell");
    const auto& tab = detail::diagonal_table(t.arity());
    BiChain out;
    for (const auto& p : detail::diagonal_support(t)) {
        auto it = tab.sign.find(p);
        if (it == tab.sign.end()) throw std::logic_error("diagonal: missing sign entry");
        out.add(p, it->second);
    }
    return out;
}

}  // namespace coalg
