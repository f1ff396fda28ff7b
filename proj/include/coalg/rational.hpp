#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace coalg {

// All arithmetic in this library is exact. Sign-sensitive identities are
// checked with equality, never with tolerances.
using Rational = boost::multiprecision::cpp_rational;
using Integer = boost::multiprecision::cpp_int;

inline std::string to_string(const Rational& q) { return q.str(); }

/// Parses "p" or "p/q" with optional leading sign. Returns nullopt on
/// malformed input or a zero denominator.
inline std::optional<Rational> parse_rational(std::string_view s) {
    if (s.empty()) return std::nullopt;
    auto is_int = [](std::string_view t) {
        if (t.empty()) return false;
        std::size_t i = (t[0] == '+' || t[0] == '-') ? 1 : 0;
        if (i == t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    const auto slash = s.find('/');
    try {
        if (slash == std::string_view::npos) {
            if (!is_int(s)) return std::nullopt;
            return Rational(Integer(std::string(s)));
        }
        const auto num = s.substr(0, slash);
        const auto den = s.substr(slash + 1);
        if (!is_int(num) || !is_int(den)) return std::nullopt;
        Integer d{std::string(den)};
        if (d == 0) return std::nullopt;
        return Rational(Integer(std::string(num)), d);
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

/// (-1)^e as a Rational, for exponents of either sign.
inline Rational sign_pow(long long e) { return (e % 2 == 0) ? Rational(1) : Rational(-1); }

}  // namespace coalg
