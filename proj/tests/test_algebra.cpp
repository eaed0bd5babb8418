#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lab/algebraic.hpp"
#include "lab/errors.hpp"
#include "lab/factor.hpp"
#include "lab/rational.hpp"
#include "lab/roots.hpp"

using namespace lab;

namespace {

PolyQ ipoly(std::initializer_list<long> coeffs_low_to_high) {
    std::vector<mpq_class> v;
    for (long c : coeffs_low_to_high) v.emplace_back(c);
    return PolyQ(v);
}

}  // namespace

TEST_CASE("factor x^2-1") {
    Factorization f = factor_over_q(ipoly({-1, 0, 1}));
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0].first == ipoly({-1, 1}));
    CHECK(f.factors[1].first == ipoly({1, 1}));
    CHECK(f.content == 1);
    CHECK(f.expand() == ipoly({-1, 0, 1}));
}

TEST_CASE("factor x^2+1 irreducible") {
    Factorization f = factor_over_q(ipoly({1, 0, 1}));
    REQUIRE(f.factors.size() == 1);
    CHECK(f.factors[0].first == ipoly({1, 0, 1}));
    CHECK(is_irreducible(ipoly({1, 0, 1})));
}

TEST_CASE("factor x^4-4 against exhaustive box oracle") {
    PolyQ p = ipoly({-4, 0, 0, 0, 1});
    Factorization f = factor_over_q(p);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0].first == ipoly({-2, 0, 1}));
    CHECK(f.factors[1].first == ipoly({2, 0, 1}));

    // oracle: exhaustive search over integer quadratic factors with
    // coefficients inside a small Mignotte-style box
    std::vector<PolyQ> found;
    for (long a = -8; a <= 8; ++a)
        for (long b = -8; b <= 8; ++b) {
            PolyQ cand = ipoly({a, b, 1});
            auto [q, r] = divrem(p, cand);
            if (r.is_zero()) found.push_back(cand);
        }
    REQUIRE(found.size() == 2);
    CHECK(found[0] * found[1] == p);
}

TEST_CASE("factorization reproduces random products") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<long> d(-6, 6);
    std::vector<PolyQ> atoms = {
        ipoly({-1, 1}), ipoly({1, 1}),    ipoly({-2, 1}), ipoly({1, 0, 1}),
        ipoly({-2, 0, 1}), ipoly({1, 1, 1}), ipoly({-1, -1, 0, 0, 1}),
    };
    for (int iter = 0; iter < 40; ++iter) {
        PolyQ p = PolyQ::constant(mpq_class(d(rng) == 0 ? 1 : d(rng), 3));
        int k = 1 + iter % 3;
        for (int i = 0; i < k; ++i) p = p * atoms[rng() % atoms.size()];
        if (p.is_zero()) continue;
        Factorization f = factor_over_q(p);
        CHECK(f.expand() == p);
        for (const auto& [g, m] : f.factors) {
            CHECK(m >= 1);
            CHECK(g.leading() > 0);
        }
    }
}

TEST_CASE("factor with multiplicities") {
    PolyQ p = pow(ipoly({-1, 1}), 3) * pow(ipoly({1, 0, 1}), 2);
    Factorization f = factor_over_q(p);
    REQUIRE(f.factors.size() == 2);
    CHECK(f.factors[0].second == 3);
    CHECK(f.factors[1].second == 2);
    CHECK(f.expand() == p);
}

TEST_CASE("factor a cyclotomic-like degree 12") {
    // x^12 - 1 splits into the cyclotomics of the divisors of 12
    Factorization f = factor_over_q(ipoly({-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}));
    REQUIRE(f.factors.size() == 6);
    int degsum = 0;
    for (const auto& [g, m] : f.factors) degsum += g.degree() * m;
    CHECK(degsum == 12);
    CHECK(f.expand() == ipoly({-1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 1}));
}

TEST_CASE("root isolation: x^2-2") {
    auto roots = isolate_roots(ipoly({-2, 0, 1}), 128);
    REQUIRE(roots.size() == 2);
    // each disc contains a true root: p on the disc contains zero
    for (const auto& r : roots) {
        Complex v = ipoly({-2, 0, 1}).evaluate(r, 192);
        CHECK(v.contains_zero());
    }
    CHECK(roots[0].re_mid() < roots[1].re_mid());
    CHECK(roots[1].abs().contains_zero() == false);
}

TEST_CASE("root isolation: product of linear factors") {
    PolyQ p = PolyQ::constant(1);
    for (long k = 1; k <= 10; ++k) p = p * ipoly({-k, 1});
    auto roots = isolate_roots(p, 128);
    REQUIRE(roots.size() == 10);
    for (long k = 1; k <= 10; ++k) CHECK(roots[k - 1].contains(mpq_class(k), mpq_class(0)));
}

TEST_CASE("root isolation rejects non-squarefree") {
    CHECK_THROWS_AS((void)isolate_roots(ipoly({1, 2, 1}), 128), domain_error);
}

TEST_CASE("weil height of algebraic numbers") {
    // rational 3/2 via min poly 2x-3
    AlgebraicNumber r32 = algebraic_from_rational(mpq_class(3, 2));
    Real h = weil_height_algebraic(r32, 128);
    CHECK(h.contains(mpq_class(3)));

    // sqrt(2): Mahler measure 2, degree 2 -> height sqrt(2)
    auto sqrt2 = algebraic_roots(ipoly({-2, 0, 1}), 128);
    REQUIRE(sqrt2.size() == 2);
    Real h2 = weil_height_algebraic(sqrt2[1], 192);
    // oracle: brute-force product of root moduli times |lc|
    Real m = mahler_measure(ipoly({-2, 0, 1}), 192);
    CHECK(m.contains(mpq_class(2)));
    Real s = mul(h2, h2, 192);
    CHECK(s.contains(mpq_class(2)));

    // cos(2pi/5) has min poly 4x^2+2x-1, both roots inside the unit disc,
    // Mahler measure 4, height 2
    auto c5 = algebraic_roots(ipoly({-1, 2, 4}), 192);
    REQUIRE(c5.size() == 2);
    Real h5 = weil_height_algebraic(c5[0], 192);
    CHECK(h5.contains(mpq_class(2)));
}

TEST_CASE("size height") {
    AlgebraicNumber half = algebraic_from_rational(mpq_class(1, 2));
    CHECK(size_height(half, 128).contains(mpq_class(2)));
    AlgebraicNumber fivehalf = algebraic_from_rational(mpq_class(5, 2));
    CHECK(size_height(fivehalf, 128).contains(mpq_class(5, 2)));
    auto sqrt2 = algebraic_roots(ipoly({-2, 0, 1}), 128);
    Real s = size_height(sqrt2[0], 192);
    Real ref = sqrt(Real::from_int(2, 192), 192);
    CHECK(Real::overlaps(s, ref));
    CHECK(s.rad_d() < 1e-20);
}

TEST_CASE("denominator of algebraic numbers") {
    CHECK(denominator_of(algebraic_from_rational(mpq_class(3, 2))) == 2);
    auto sqrt2 = algebraic_roots(ipoly({-2, 0, 1}), 128);
    CHECK(denominator_of(sqrt2[0]) == 1);
    // (1/2) sqrt 2 with min poly 2x^2-1
    auto h = algebraic_roots(ipoly({-1, 0, 2}), 128);
    CHECK(denominator_of(h[0]) == 2);

    // oracle: brute force gamma = 1..lc, gamma*alpha integral iff the monic
    // minimal polynomial of gamma*alpha has integer coefficients
    auto brute = [](const PolyQ& mp) {
        int d = mp.degree();
        for (long g = 1;; ++g) {
            // min poly of g*alpha: x^d + sum a_i g^(d-i)/a_d x^i
            bool ok = true;
            for (int i = 0; i < d; ++i) {
                mpq_class c = mp.coeff(i);
                mpz_class gp;
                mpz_ui_pow_ui(gp.get_mpz_t(), g, d - i);
                mpq_class v = c * mpq_class(gp) / mp.leading();
                v.canonicalize();
                if (v.get_den() != 1) ok = false;
            }
            if (ok) return mpz_class(g);
        }
    };
    CHECK(brute(ipoly({-1, 0, 2})) == 2);
    CHECK(brute(ipoly({-2, 0, 1})) == 1);
    for (const PolyQ& mp : {ipoly({-1, 0, 2}), ipoly({-2, 0, 1}), ipoly({1, 3, 9}),
                            ipoly({5, 1, 0, 12})}) {
        if (!is_irreducible(mp)) continue;
        auto roots = algebraic_roots(mp, 128);
        CHECK(denominator_of(roots[0]) == brute(mp));
    }
}

TEST_CASE("irreducibility spot checks on factor output") {
    // claimed-irreducible factors of degree >= 2 have no rational roots
    // (exact rational-root test) and pass a modular certificate when one of
    // the probed primes keeps them irreducible
    std::vector<PolyQ> inputs = {ipoly({-4, 0, 0, 0, 1}), ipoly({2, 1, 3, 1, 1}),
                                 ipoly({-1, 0, 0, 0, 0, 0, 1}), ipoly({7, -2, 0, 5})};
    for (const PolyQ& p : inputs) {
        for (const auto& [f, m] : factor_over_q(p).factors) {
            if (f.degree() < 2) continue;
            // rational root test: p/q with p | constant, q | leading
            mpz_class c0 = f.coeff(0).get_num(), lc = f.leading().get_num();
            bool has_rational_root = false;
            if (c0 == 0) has_rational_root = true;
            for (mpz_class num = -8; num <= 8 && !has_rational_root; ++num)
                for (long den = 1; den <= 8; ++den) {
                    mpq_class r(num, den);
                    r.canonicalize();
                    if (f.evaluate(r) == 0) has_rational_root = true;
                }
            CHECK(!has_rational_root);
            bool certified = false;
            for (unsigned long q : {1009ul, 2003ul, 3001ul, 4001ul, 5003ul, 6007ul, 7001ul, 8009ul, 9001ul, 10007ul, 10009ul, 10037ul})
                if (irreducible_mod_p(f, q)) {
                    certified = true;
                    break;
                }
            // degree-compatible modular pattern exists for these inputs
            CHECK(certified);
        }
    }
}
