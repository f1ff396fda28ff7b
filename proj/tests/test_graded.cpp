#include <catch2/catch_amalgamated.hpp>

#include <numeric>
#include <random>

#include "coalg/graded.hpp"
#include "coalg/linalg.hpp"

using namespace coalg;

namespace {

GradedSpace mixed_space() {
    return GradedSpace::plain({{"a", 1}, {"b", 2}, {"c", 3}, {"d", 2}, {"e", 1}});
}

std::function<int(const int&)> deg_fn(const GradedSpace& s) {
    return [&s](const int& g) { return s.degree(g); };
}

}  // namespace

TEST_CASE("koszul sign basics") {
    REQUIRE(koszul_sign(2, 2) == 1);
    REQUIRE(koszul_sign(1, 1) == -1);
    REQUIRE(koszul_sign(5, 2) == 1);
    REQUIRE(koszul_sign(3, 5) == -1);
}

TEST_CASE("permute applies the Koszul rule") {
    GradedSpace s = mixed_space();
    auto deg = deg_fn(s);

    Element x = Element::single({1, 3});  // b (x) d, both even
    Element swapped = permute<int>({1, 0}, x, deg);
    REQUIRE(swapped == Element::single({3, 1}));

    Element odd = Element::single({0, 4});  // a (x) e, both odd
    Element oddswap = permute<int>({1, 0}, odd, deg);
    REQUIRE(oddswap == Element::single({4, 0}, -1));

    // Identity does nothing.
    Element id = permute<int>({0, 1}, odd, deg);
    REQUIRE(id == odd);
}

TEST_CASE("permute is compositional on random input") {
    GradedSpace s = mixed_space();
    auto deg = deg_fn(s);
    std::mt19937 rng(7);
    for (int trial = 0; trial < 60; ++trial) {
        const int r = 2 + static_cast<int>(rng() % 4);
        TensorWord w(static_cast<std::size_t>(r));
        for (auto& g : w) g = static_cast<int>(rng() % static_cast<unsigned>(s.size()));
        Element x = Element::single(w);

        Perm sigma(static_cast<std::size_t>(r)), tau(static_cast<std::size_t>(r));
        std::iota(sigma.begin(), sigma.end(), 0);
        std::iota(tau.begin(), tau.end(), 0);
        std::shuffle(sigma.begin(), sigma.end(), rng);
        std::shuffle(tau.begin(), tau.end(), rng);

        // Apply tau then sigma; out[j] = mid[sigma[j]] = in[tau[sigma[j]]].
        Perm comp(static_cast<std::size_t>(r));
        for (int j = 0; j < r; ++j) comp[static_cast<std::size_t>(j)] = tau[static_cast<std::size_t>(sigma[static_cast<std::size_t>(j)])];
        REQUIRE(permute<int>(comp, x, deg) == permute<int>(sigma, permute<int>(tau, x, deg), deg));
    }
}

TEST_CASE("full symmetrization") {
    GradedSpace s = mixed_space();
    auto deg = deg_fn(s);

    // Even degrees: a (x) b - b (x) a pattern.
    Element x = Element::single({1, 3});
    Element sym = full_symmetrize<int>(2, x, deg);
    REQUIRE(sym.coeff({1, 3}) == 1);
    REQUIRE(sym.coeff({3, 1}) == -1);

    // Odd degrees: sgn and Koszul cancel to give the symmetric sum.
    Element odd = Element::single({0, 4});
    Element osym = full_symmetrize<int>(2, odd, deg);
    REQUIRE(osym.coeff({0, 4}) == 1);
    REQUIRE(osym.coeff({4, 0}) == 1);

    // S(r) o S(r) = r! S(r).
    std::mt19937 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int r = 2 + static_cast<int>(rng() % 3);
        TensorWord w(static_cast<std::size_t>(r));
        for (auto& g : w) g = static_cast<int>(rng() % static_cast<unsigned>(s.size()));
        Element e = Element::single(w);
        Element once = full_symmetrize<int>(r, e, deg);
        Element twice = full_symmetrize<int>(r, once, deg);
        Rational factorial(1);
        for (int j = 2; j <= r; ++j) factorial *= j;
        REQUIRE(twice == once * factorial);
    }
}

TEST_CASE("six-term alternating sum on three even generators") {
    GradedSpace s = GradedSpace::plain({{"x", 2}, {"y", 2}, {"z", 2}});
    auto deg = deg_fn(s);
    Element sym = full_symmetrize<int>(3, Element::single({0, 1, 2}), deg);
    REQUIRE(sym.size() == 6);
    REQUIRE(sym.coeff({0, 1, 2}) == 1);
    REQUIRE(sym.coeff({1, 0, 2}) == -1);
    REQUIRE(sym.coeff({1, 2, 0}) == 1);
    REQUIRE(sym.coeff({0, 2, 1}) == -1);
    REQUIRE(sym.coeff({2, 0, 1}) == 1);
    REQUIRE(sym.coeff({2, 1, 0}) == -1);
}

TEST_CASE("shuffle sums") {
    GradedSpace s = mixed_space();
    auto deg = deg_fn(s);
    std::mt19937 rng(23);
    for (int r = 2; r <= 6; ++r) {
        TensorWord w(static_cast<std::size_t>(r));
        for (auto& g : w) g = static_cast<int>(rng() % static_cast<unsigned>(s.size()));
        // Term count is C(r, i) on a word with distinct-slot bookkeeping:
        // count permutations enumerated, not surviving terms.
        for (int i = 0; i <= r; ++i) {
            int count = 0;
            detail::for_each_shuffle(i, r, [&](const Perm&) { ++count; });
            long long expect = 1;
            for (int j = 0; j < i; ++j) expect = expect * (r - j) / (j + 1);
            REQUIRE(count == expect);
        }
        // i = r is the identity.
        Element x = Element::single(w);
        REQUIRE(shuffle_sum<int>(r, r, x, deg) == x);
    }
    // (1,1)-shuffles on two letters.
    Element ab = Element::single({1, 3});
    Element sh = shuffle_sum<int>(1, 2, ab, deg);
    REQUIRE(sh.coeff({1, 3}) == 1);
    REQUIRE(sh.coeff({3, 1}) == -1);
    REQUIRE_THROWS_AS(shuffle_sum<int>(7, 2, ab, deg), std::invalid_argument);
}

TEST_CASE("exact kernels") {
    // Zero map: the full basis survives.
    std::vector<int> domain{0, 1, 2};
    auto zero = kernel_basis<int, int>(domain, [](const int&) { return LinComb<int>{}; });
    REQUIRE(zero.size() == 3);

    // Identity map: empty kernel.
    auto ident = kernel_basis<int, int>(domain, [](const int& k) { return LinComb<int>::single(k); });
    REQUIRE(ident.empty());

    // Rank and membership.
    LinComb<int> v1, v2, v3;
    v1.add(0, 1);
    v1.add(1, 2);
    v2.add(1, Rational(1, 3));
    v3.add(0, 1);
    v3.add(1, Rational(7, 3));  // v1 + v2
    REQUIRE(rank_of<int>({v1, v2, v3}) == 2);
    auto sol = solve_in_span<int>({v1, v2}, v3);
    REQUIRE(sol.has_value());
    REQUIRE((*sol)[0] == 1);
    REQUIRE((*sol)[1] == 1);
    LinComb<int> outside;
    outside.add(2, 1);
    REQUIRE_FALSE(solve_in_span<int>({v1, v2}, outside).has_value());
}

TEST_CASE("kernel of the reduced coproduct on one even generator") {
    // Tensor coalgebra on a single degree-2 generator: in degree 4 the only
    // element x.x is not primitive, in degree 2 the generator is.
    GradedSpace s = GradedSpace::connected({{"x", 2}});
    const int one = 0, x = 1;
    // Degree-4 domain: the single word xx inside the tensor square; model the
    // reduced coproduct directly.
    std::vector<int> domain4{0};
    auto red4 = kernel_basis<int, TensorWord>(domain4, [&](const int&) {
        Element v;
        v.add({x, x}, 2);  // reduced coproduct of x.x
        return v;
    });
    REQUIRE(red4.empty());
    std::vector<int> domain2{x};
    auto red2 = kernel_basis<int, TensorWord>(domain2, [&](const int&) { return Element{}; });
    REQUIRE(red2.size() == 1);
    (void)one;
}
