#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "coalg/lincomb.hpp"
#include "coalg/rational.hpp"

namespace coalg {

namespace detail {

/// Sparse rows over integer columns, exact Gaussian elimination in place.
/// Returns (row, pivot column) pairs recorded as pivots are chosen; after
/// reduction each pivot column survives only in its own pivot row.
inline std::vector<std::pair<std::size_t, int>> row_reduce(
    std::vector<std::map<int, Rational>>& rows) {
    std::vector<std::pair<std::size_t, int>> pivots;
    std::vector<char> used(rows.size(), 0);
    while (true) {
        // Pick the sparsest unused nonempty row.
        std::size_t best = rows.size();
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (!used[r] && !rows[r].empty() && (best == rows.size() || rows[r].size() < rows[best].size()))
                best = r;
        if (best == rows.size()) break;
        used[best] = 1;
        const int pc = rows[best].begin()->first;
        const Rational pv = rows[best].begin()->second;
        pivots.emplace_back(best, pc);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == best) continue;
            auto it = rows[r].find(pc);
            if (it == rows[r].end()) continue;
            const Rational factor = it->second / pv;
            for (const auto& [c, v] : rows[best]) {
                auto slot = rows[r].find(c);
                if (slot == rows[r].end()) {
                    Rational nv = -factor * v;
                    if (nv != 0) rows[r].emplace(c, std::move(nv));
                } else {
                    slot->second -= factor * v;
                    if (slot->second == 0) rows[r].erase(slot);
                }
            }
        }
    }
    return pivots;
}

}  // namespace detail

/// Interns arbitrary ordered keys as dense column indices.
template <typename Key>
class Indexer {
public:
    int intern(const Key& k) {
        auto [it, inserted] = index_.emplace(k, static_cast<int>(keys_.size()));
        if (inserted) keys_.push_back(k);
        return it->second;
    }
    std::optional<int> lookup(const Key& k) const {
        auto it = index_.find(k);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    const Key& key(int i) const { return keys_.at(static_cast<std::size_t>(i)); }
    int size() const { return static_cast<int>(keys_.size()); }

private:
    std::map<Key, int> index_;
    std::vector<Key> keys_;
};

/// Exact basis of { v in span(domain) : f(v) = 0 } where f is linear and the
/// domain keys are independent. Returns coefficient vectors over the domain.
template <typename DomKey, typename OutKey>
std::vector<LinComb<DomKey>> kernel_basis(const std::vector<DomKey>& domain,
                                          const std::function<LinComb<OutKey>(const DomKey&)>& f) {
    const int n = static_cast<int>(domain.size());
    Indexer<OutKey> cols;
    // images[i] = sparse row of f(domain[i])
    std::vector<std::map<int, Rational>> images(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        for (const auto& [k, c] : f(domain[static_cast<std::size_t>(i)]))
            images[static_cast<std::size_t>(i)][cols.intern(k)] = c;

    // Solve x^T M = 0 by reducing the transpose: rows indexed by out-keys.
    std::vector<std::map<int, Rational>> rows(static_cast<std::size_t>(cols.size()));
    for (int i = 0; i < n; ++i)
        for (const auto& [c, v] : images[static_cast<std::size_t>(i)])
            rows[static_cast<std::size_t>(c)][i] = v;

    const auto pivots = detail::row_reduce(rows);

    // Domain indices that never become pivots are free; each free index j
    // yields the kernel vector e_j - sum over pivot rows containing j.
    std::vector<char> is_pivot(static_cast<std::size_t>(n), 0);
    for (const auto& [r, pc] : pivots) is_pivot[static_cast<std::size_t>(pc)] = 1;
    std::vector<LinComb<DomKey>> out;
    for (int j = 0; j < n; ++j) {
        if (is_pivot[static_cast<std::size_t>(j)]) continue;
        LinComb<DomKey> v = LinComb<DomKey>::single(domain[static_cast<std::size_t>(j)]);
        for (const auto& [r, pc] : pivots) {
            auto it = rows[r].find(j);
            if (it == rows[r].end()) continue;
            const Rational pv = rows[r].at(pc);
            v.add(domain[static_cast<std::size_t>(pc)], -it->second / pv);
        }
        out.push_back(std::move(v));
    }
    return out;
}

/// Exact rank of a family of vectors.
template <typename Key>
int rank_of(const std::vector<LinComb<Key>>& vecs) {
    Indexer<Key> cols;
    std::vector<std::map<int, Rational>> rows;
    rows.reserve(vecs.size());
    for (const auto& v : vecs) {
        std::map<int, Rational> row;
        for (const auto& [k, c] : v) row[cols.intern(k)] = c;
        rows.push_back(std::move(row));
    }
    return static_cast<int>(detail::row_reduce(rows).size());
}

/// Solves target = sum c_i span[i] exactly; nullopt if target is outside.
template <typename Key>
std::optional<std::vector<Rational>> solve_in_span(const std::vector<LinComb<Key>>& span,
                                                   const LinComb<Key>& target) {
    Indexer<Key> keys;
    const int n = static_cast<int>(span.size());
    // Rows indexed by key, columns 0..n-1 plus rhs column n.
    std::map<int, std::map<int, Rational>> rowmap;
    for (int j = 0; j < n; ++j)
        for (const auto& [k, c] : span[static_cast<std::size_t>(j)]) rowmap[keys.intern(k)][j] = c;
    for (const auto& [k, c] : target) rowmap[keys.intern(k)][n] = c;

    std::vector<std::map<int, Rational>> rows;
    rows.reserve(rowmap.size());
    for (auto& [k, row] : rowmap) rows.push_back(std::move(row));
    // Eliminate only on the coefficient columns.
    std::vector<char> used(rows.size(), 0);
    std::vector<std::pair<std::size_t, int>> pivots;
    for (int col = 0; col < n; ++col) {
        std::size_t pr = rows.size();
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (!used[r] && rows[r].count(col) && (pr == rows.size() || rows[r].size() < rows[pr].size()))
                pr = r;
        if (pr == rows.size()) continue;
        used[pr] = 1;
        pivots.emplace_back(pr, col);
        const Rational pv = rows[pr].at(col);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == pr) continue;
            auto it = rows[r].find(col);
            if (it == rows[r].end()) continue;
            const Rational factor = it->second / pv;
            for (const auto& [c2, v2] : rows[pr]) {
                auto slot = rows[r].find(c2);
                if (slot == rows[r].end()) {
                    Rational nv = -factor * v2;
                    if (nv != 0) rows[r].emplace(c2, std::move(nv));
                } else {
                    slot->second -= factor * v2;
                    if (slot->second == 0) rows[r].erase(slot);
                }
            }
        }
    }
    // Inconsistent iff some reduced row is rhs-only.
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (!used[r] && !rows[r].empty()) {
            if (rows[r].size() == 1 && rows[r].begin()->first == n) return std::nullopt;
        }
    std::vector<Rational> sol(static_cast<std::size_t>(n), Rational(0));
    for (const auto& [pr, col] : pivots) {
        const Rational pv = rows[pr].at(col);
        auto it = rows[pr].find(n);
        // Any remaining free columns in this row would make the solution
        // non-unique; membership only needs one witness, so set frees to 0.
        Rational rhs = (it == rows[pr].end()) ? Rational(0) : it->second;
        for (const auto& [c2, v2] : rows[pr]) {
            if (c2 == col || c2 == n) continue;
            rhs -= v2 * sol[static_cast<std::size_t>(c2)];  // frees are zero
        }
        sol[static_cast<std::size_t>(col)] = rhs / pv;
    }
    // Verify the candidate exactly (guards the free-column shortcut).
    LinComb<Key> acc;
    for (int j = 0; j < n; ++j) {
        auto t = span[static_cast<std::size_t>(j)];
        t *= sol[static_cast<std::size_t>(j)];
        acc += t;
    }
    if (!(acc == target)) return std::nullopt;
    return sol;
}

}  // namespace coalg
