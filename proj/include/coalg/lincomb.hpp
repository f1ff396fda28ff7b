#pragma once

#include <map>
#include <utility>

#include "coalg/rational.hpp"

namespace coalg {

/// A finite ℚ-linear combination of basis keys. Zero coefficients are never
/// stored, so equality of combinations is equality of the underlying maps.
template <typename Key>
class LinComb {
public:
    using map_type = std::map<Key, Rational>;

    LinComb() = default;

    static LinComb single(Key k, Rational c = Rational(1)) {
        LinComb out;
        out.add(std::move(k), std::move(c));
        return out;
    }

    void add(const Key& k, const Rational& c) {
        if (c == 0) return;
        auto [it, inserted] = terms_.emplace(k, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    LinComb& operator+=(const LinComb& o) {
        for (const auto& [k, c] : o.terms_) add(k, c);
        return *this;
    }
    LinComb& operator-=(const LinComb& o) {
        for (const auto& [k, c] : o.terms_) add(k, -c);
        return *this;
    }
    LinComb& operator*=(const Rational& c) {
        if (c == 0) {
            terms_.clear();
            return *this;
        }
        for (auto& [k, v] : terms_) v *= c;
        return *this;
    }

    friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }
    friend LinComb operator-(LinComb a, const LinComb& b) { return a -= b; }
    friend LinComb operator*(LinComb a, const Rational& c) { return a *= c; }
    friend LinComb operator*(const Rational& c, LinComb a) { return a *= c; }

    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Rational coeff(const Key& k) const {
        auto it = terms_.find(k);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    auto begin() const { return terms_.begin(); }
    auto end() const { return terms_.end(); }
    const map_type& terms() const { return terms_; }

    friend bool operator==(const LinComb& a, const LinComb& b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const LinComb& a, const LinComb& b) { return !(a == b); }

private:
    map_type terms_;
};

}  // namespace coalg
