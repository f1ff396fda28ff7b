#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace coalg {

/// A cell of the associahedron K_n: a rooted planar tree with n leaves in
/// which every internal node has at least two children. Binary trees are the
/// vertices, the corolla is the top cell. Values are immutable and share
/// structure; ordering and hashing go through the canonical text form
/// (balanced parentheses, `*` per leaf), so parse(render(t)) == t.
class PlanarTree {
    struct Node {
        std::vector<PlanarTree> children;  // empty <=> leaf
        int arity = 1;                     // number of leaves
        int internals = 0;                 // number of internal nodes
        std::string text = "*";
    };

public:
    PlanarTree() : node_(leaf_node()) {}

    static PlanarTree leaf() { return PlanarTree(); }

    static PlanarTree make(std::vector<PlanarTree> children) {
        if (children.size() < 2)
            throw std::invalid_argument("internal node needs at least 2 children");
        auto n = std::make_shared<Node>();
        n->arity = 0;
        n->internals = 1;
        n->text.clear();
        n->text.push_back('(');
        for (const auto& c : children) {
            n->arity += c.arity();
            n->internals += c.internals();
            n->text += c.render();
        }
        n->text.push_back(')');
        n->children = std::move(children);
        return PlanarTree(std::move(n));
    }

    bool is_leaf() const { return node_->children.empty(); }
    int arity() const { return node_->arity; }
    int internals() const { return node_->internals; }
    /// Cell dimension: n - 1 - (number of internal nodes).
    int dimension() const { return node_->arity - 1 - node_->internals; }
    bool is_binary() const { return dimension() == 0 && !is_leaf(); }
    bool is_corolla() const { return !is_leaf() && node_->children.size() == static_cast<std::size_t>(node_->arity); }

    const std::vector<PlanarTree>& children() const { return node_->children; }
    const std::string& render() const { return node_->text; }

    static PlanarTree parse(std::string_view s) {
        std::size_t pos = 0;
        PlanarTree t = parse_at(s, pos);
        if (pos != s.size()) throw std::invalid_argument("trailing input in tree text");
        return t;
    }

    friend bool operator==(const PlanarTree& a, const PlanarTree& b) {
        return a.node_ == b.node_ || a.render() == b.render();
    }
    friend bool operator!=(const PlanarTree& a, const PlanarTree& b) { return !(a == b); }
    friend bool operator<(const PlanarTree& a, const PlanarTree& b) {
        if (a.node_ == b.node_) return false;
        return a.render() < b.render();
    }

private:
    explicit PlanarTree(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static const std::shared_ptr<const Node>& leaf_node() {
        static const std::shared_ptr<const Node> n = std::make_shared<Node>();
        return n;
    }

    static PlanarTree parse_at(std::string_view s, std::size_t& pos) {
        if (pos >= s.size()) throw std::invalid_argument("unexpected end of tree text");
        if (s[pos] == '*') {
            ++pos;
            return leaf();
        }
        if (s[pos] != '(') throw std::invalid_argument("expected '*' or '(' in tree text");
        ++pos;
        std::vector<PlanarTree> children;
        while (pos < s.size() && s[pos] != ')') children.push_back(parse_at(s, pos));
        if (pos >= s.size()) throw std::invalid_argument("unbalanced '(' in tree text");
        ++pos;  // consume ')'
        return make(std::move(children));
    }

    std::shared_ptr<const Node> node_;
};

/// The corolla: one internal node with n leaves, the top cell e^{n-2} of K_n.
inline PlanarTree corolla(int n) {
    std::vector<PlanarTree> ch(static_cast<std::size_t>(n), PlanarTree::leaf());
    return PlanarTree::make(std::move(ch));
}

/// Left comb over the given subtrees: ((t1 t2) t3) ... folded to the left.
inline PlanarTree left_comb_over(std::vector<PlanarTree> parts) {
    if (parts.size() < 2) throw std::invalid_argument("need at least 2 parts");
    PlanarTree acc = PlanarTree::make({parts[0], parts[1]});
    for (std::size_t i = 2; i < parts.size(); ++i) acc = PlanarTree::make({acc, parts[i]});
    return acc;
}

/// Right comb over the given subtrees: (t1 (t2 (t3 ...))).
inline PlanarTree right_comb_over(std::vector<PlanarTree> parts) {
    if (parts.size() < 2) throw std::invalid_argument("need at least 2 parts");
    PlanarTree acc = PlanarTree::make({parts[parts.size() - 2], parts[parts.size() - 1]});
    for (std::size_t i = parts.size() - 2; i-- > 0;) acc = PlanarTree::make({parts[i], acc});
    return acc;
}

inline PlanarTree left_comb(int n) {
    return left_comb_over(std::vector<PlanarTree>(static_cast<std::size_t>(n), PlanarTree::leaf()));
}
inline PlanarTree right_comb(int n) {
    return right_comb_over(std::vector<PlanarTree>(static_cast<std::size_t>(n), PlanarTree::leaf()));
}

namespace detail {

template <typename F>
void for_each_compositions(int n, int parts, std::vector<int>& acc, F&& f) {
    if (parts == 1) {
        acc.push_back(n);
        f(acc);
        acc.pop_back();
        return;
    }
    for (int first = 1; first <= n - (parts - 1); ++first) {
        acc.push_back(first);
        for_each_compositions(n - first, parts - 1, acc, f);
        acc.pop_back();
    }
}

}  // namespace detail

/// All cells of K_n: planar trees with n leaves, every internal node with
/// >= 2 children (little Schroeder enumeration). Memoized per arity; the
/// n == 1 entry is the bare leaf, used only as a subtree option.
inline const std::vector<PlanarTree>& all_cells(int n) {
    static std::mutex mu;
    static std::map<int, std::vector<PlanarTree>> memo;
    std::lock_guard<std::mutex> lock(mu);

    // A tree with `leaves` leaves is a root of arity m (2..leaves) whose
    // children carry leaf counts composing `leaves`.
    std::function<const std::vector<PlanarTree>&(int)> build =
        [&](int leaves) -> const std::vector<PlanarTree>& {
        auto it = memo.find(leaves);
        if (it != memo.end()) return it->second;
        std::vector<PlanarTree> out;
        if (leaves == 1) {
            out.push_back(PlanarTree::leaf());
        } else {
            for (int m = 2; m <= leaves; ++m) {
                std::vector<int> comp;
                detail::for_each_compositions(leaves, m, comp, [&](const std::vector<int>& parts) {
                    std::vector<std::vector<PlanarTree>> options;
                    options.reserve(parts.size());
                    for (int p : parts) options.push_back(build(p));
                    std::vector<std::size_t> idx(parts.size(), 0);
                    while (true) {
                        std::vector<PlanarTree> ch;
                        ch.reserve(parts.size());
                        for (std::size_t j = 0; j < parts.size(); ++j) ch.push_back(options[j][idx[j]]);
                        out.push_back(PlanarTree::make(std::move(ch)));
                        std::size_t j = 0;
                        for (; j < idx.size(); ++j) {
                            if (++idx[j] < options[j].size()) break;
                            idx[j] = 0;
                        }
                        if (j == idx.size()) break;
                    }
                });
            }
        }
        return memo.emplace(leaves, std::move(out)).first->second;
    };
    return build(n);
}

/// All binary trees with n leaves (the Catalan(n-1) vertices of K_n).
inline std::vector<PlanarTree> all_binary(int n) {
    std::vector<PlanarTree> out;
    for (const auto& t : all_cells(n))
        if (t.dimension() == 0) out.push_back(t);
    return out;
}

}  // namespace coalg
