#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lab/bounds.hpp"
#include "lab/errors.hpp"

using namespace lab;

TEST_CASE("curve constant at (2,2,2,1)") {
    PowerProduct c = curve_constant({2, 2, 2, 1});
    // 2^2 * 6^(67/2) * 4^9 * 3^9  ==  2^(87/2) * 3^(85/2)
    PowerProduct ref = PowerProduct::prime_power(2, 2);
    ref *= PowerProduct::prime_power(2, mpq_class(67, 2));
    ref *= PowerProduct::prime_power(3, mpq_class(67, 2));
    ref *= PowerProduct::from_integer(4).pow(9);
    ref *= PowerProduct::from_integer(3).pow(9);
    CHECK(PowerProduct::compare(c, ref) == 0);

    // the headline comparison: c(2,2,2,1) <= 6^50, decided exactly
    PowerProduct six50 = PowerProduct::prime_power(2, 50) * PowerProduct::prime_power(3, 50);
    CHECK(PowerProduct::compare(c, six50) < 0);
}

TEST_CASE("curve constant at (1,1,1,1) has integer exponents") {
    PowerProduct c = curve_constant({1, 1, 1, 1});
    // 6^(5/2+1+53/2) * 3^5 * 2^5 = 6^30 * 3^5 * 2^5
    PowerProduct ref = PowerProduct::prime_power(2, 30);
    ref *= PowerProduct::prime_power(3, 30);
    ref *= PowerProduct::prime_power(3, 5);
    ref *= PowerProduct::prime_power(2, 5);
    CHECK(PowerProduct::compare(c, ref) == 0);
    for (const auto& [p, e] : c.prime_exponents()) CHECK(e.get_den() == 1);
}

TEST_CASE("r=1 kills the 2^(r(r-1)) factor") {
    PowerProduct a = curve_constant({3, 1, 2, 2});
    // exponent of 2 comes only from 6^... and (alpha+beta)=4 and (n+2)=5
    mpq_class e6 = mpq_class(15, 2) + 1 + mpq_class(53, 2);
    mpq_class expected_two = e6 + 2 * (2 * 3 + 2 * 1 + 1);
    CHECK(a.prime_exponents().at(2) == expected_two);
}

TEST_CASE("power product comparison matches ball evaluation") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> ed(-8, 8);
    const long primes[] = {2, 3, 5, 7};
    for (int iter = 0; iter < 1000; ++iter) {
        PowerProduct a, b;
        for (long p : primes) {
            a *= PowerProduct::prime_power(p, mpq_class(ed(rng), 2));
            b *= PowerProduct::prime_power(p, mpq_class(ed(rng), 2));
        }
        int cmp_exact = PowerProduct::compare(a, b);
        Real va = a.value(512), vb = b.value(512);
        if (cmp_exact < 0) CHECK(Real::certainly_lt(va, vb));
        if (cmp_exact > 0) CHECK(Real::certainly_lt(vb, va));
        if (cmp_exact == 0) CHECK(Real::overlaps(va, vb));
    }
}

TEST_CASE("power product values nest with precision") {
    PowerProduct c = curve_constant({2, 2, 2, 1});
    Real v256 = c.value(256), v512 = c.value(512);
    CHECK(mpfr_cmp(v256.lower().get(), v512.lower().get()) <= 0);
    CHECK(mpfr_cmp(v512.upper().get(), v256.upper().get()) <= 0);
    CHECK(Real::overlaps(v256, v512));
}

TEST_CASE("curve theorem bound") {
    Real e1 = Real::euler_e(256);
    PfaffianComplexity c{2, 2, 2, 1};
    Real at_e = curve_theorem_bound(c, 1, e1, 256);
    Real cval = curve_constant(c).value(256);
    CHECK(Real::overlaps(at_e, cval));

    // doubling d multiplies the bound by 2^(6n+6r+15) = 2^39
    Real at_d2 = curve_theorem_bound(c, 2, e1, 256);
    Real ratio = div(at_d2, at_e, 256);
    mpz_class two39;
    mpz_ui_pow_ui(two39.get_mpz_t(), 2, 39);
    CHECK(ratio.contains(mpq_class(two39)));

    CHECK_THROWS_AS((void)curve_theorem_bound(c, 1, Real::from_int(2, 128), 128), domain_error);
}

TEST_CASE("size theorem bound") {
    Real e1 = Real::euler_e(256);
    PfaffianComplexity c{2, 2, 2, 1};
    Real at_e = size_theorem_bound(c, 1, e1, 256);
    CHECK(Real::overlaps(at_e, curve_constant(c).value(256)));

    // (2,2,2,1), d=3, T=e -> c * 3^20
    Real d3 = size_theorem_bound(c, 3, e1, 256);
    Real ratio = div(d3, at_e, 256);
    mpz_class three20;
    mpz_ui_pow_ui(three20.get_mpz_t(), 3, 20);
    CHECK(ratio.contains(mpq_class(three20)));

    // log identity: bound(T^d) carries d^(3n+3r+8) relative to bound(T)
    Real t = Real::from_int(20, 256);
    Real td = pow_si(t, 4, 256);
    Real b1 = size_theorem_bound(c, 1, t, 256);
    Real b2 = size_theorem_bound(c, 1, td, 256);
    Real want = mul(b1, pow_si(Real::from_int(4, 256), 20, 256), 256);
    CHECK(Real::overlaps(b2, want));
}

TEST_CASE("mild hypersurface count") {
    Real e1 = Real::euler_e(256);
    Real one = Real::from_int(1, 256);
    MildParams m{1, 1.0, 0.0, 2, 1};
    MildCount r = mild_hypersurface_count(m, 1, e1, one, one, one, 256);
    CHECK(r.degree == 1);
    CHECK(r.inner_degree == 1);

    // k=2, n=3, d=2, T=e^2: inner floor((2*2)^2)=16, reported floor((4*2)^2)=64
    Real e2 = exp(Real::from_int(2, 256), 256);
    MildParams m2{1, 1.0, 0.0, 3, 2};
    MildCount r2 = mild_hypersurface_count(m2, 2, e2, one, one, one, 256);
    CHECK(r2.inner_degree == 16);
    CHECK(r2.degree == 64);

    // count scales by 2^C2 when d doubles
    Real c2 = Real::from_int(3, 256);
    MildCount a = mild_hypersurface_count(m, 2, e2, one, c2, one, 256);
    MildCount b = mild_hypersurface_count(m, 4, e2, one, c2, one, 256);
    CHECK(div(b.count, a.count, 256).contains(mpq_class(8)));

    MildParams bad{1, 1.0, 0.0, 2, 2};
    CHECK_THROWS_AS((void)mild_hypersurface_count(bad, 1, e2, one, one, one, 128), domain_error);
}

TEST_CASE("surface bound shape") {
    Real e1 = Real::euler_e(256);
    Real c1 = Real::from_int(1, 256), c2 = Real::from_int(2, 256), c3 = Real::from_int(3, 256);
    // d=1, T=e -> C1
    Real v = surface_bound_shape(c3, c2, c1, 1, e1, 256);
    CHECK(v.contains(mpq_class(3)));
    // C2=0: no d dependence
    Real z = Real::from_int(0, 256);
    Real v1 = surface_bound_shape(c3, z, c1, 17, e1, 256);
    CHECK(v1.contains(mpq_class(3)));
    // C1=1, C2=2, C3=3, d=2, T=e^2 -> 4*8 = 32
    Real e2 = exp(Real::from_int(2, 256), 256);
    Real v2 = surface_bound_shape(c1, c2, c3, 2, e2, 256);
    CHECK(v2.contains(mpq_class(32)));
}

TEST_CASE("bound evaluators are monotone in d and T") {
    Real e1 = Real::euler_e(256);
    PfaffianComplexity c{2, 1, 2, 1};
    Real prev = Real::from_int(0, 256);
    for (long d = 1; d <= 8; ++d) {
        Real v = curve_theorem_bound(c, d, exp(Real::from_int(2, 256), 256), 256);
        CHECK(Real::certainly_lt(prev, v));
        prev = v;
    }
    prev = Real::from_int(0, 256);
    for (long t = 1; t <= 6; ++t) {
        Real v = size_theorem_bound(c, 2, exp(Real::from_int(t, 256), 256), 256);
        CHECK(Real::certainly_lt(prev, v));
        prev = v;
    }
}

TEST_CASE("unity corollary chain") {
    UnityChain u4 = unity_corollary_chain(4, 2, 256);
    CHECK(u4.proof_inequality_ok);
    CHECK(u4.corollary_ok);
    CHECK(u4.implication_ok);

    UnityChain u12 = unity_corollary_chain(12, 4, 256);
    CHECK(u12.corollary_ok);
    CHECK(Real::certainly_lt(u12.bound_value, Real::from_int(1, 256)));

    UnityChain big = unity_corollary_chain(100, mpz_class(1000000000), 256);
    CHECK(big.proof_inequality_ok);
    CHECK(big.corollary_ok);

    CHECK_THROWS_AS((void)unity_corollary_chain(3, 2, 128), domain_error);
}
