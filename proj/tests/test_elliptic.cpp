#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>

#include "lab/elliptic.hpp"
#include "lab/errors.hpp"
#include "oracles.hpp"

using namespace lab;

namespace {

Complex cq(const mpq_class& re, const mpq_class& im, mpfr_prec_t p = 256) {
    return Complex::from_mpq(re, im, p);
}

double dist_mid(const Complex& a, const Complex& b) {
    double dx = mpfr_get_d(a.re_mid(), MPFR_RNDN) - mpfr_get_d(b.re_mid(), MPFR_RNDN);
    double dy = mpfr_get_d(a.im_mid(), MPFR_RNDN) - mpfr_get_d(b.im_mid(), MPFR_RNDN);
    return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

TEST_CASE("tau of lambda=1/2 is i") {
    Lattice L = periods(cq(mpq_class(1, 2), 0), 256);
    CHECK(L.tau.contains(mpq_class(0), mpq_class(1)));
}

TEST_CASE("modular lambda of computed tau returns lambda") {
    for (mpq_class lam : {mpq_class(1, 3), mpq_class(1, 2), mpq_class(1, 5)}) {
        Lattice L = periods(cq(lam, 0), 256);
        Complex back = oracles::modular_lambda(L.tau, 256);
        CHECK(back.contains(lam, 0));
    }
}

TEST_CASE("periods match quadrature of the defining differential") {
    std::vector<std::pair<mpq_class, mpq_class>> lams = {
        {mpq_class(1, 3), 0}, {mpq_class(1, 2), 0}, {mpq_class(1, 4), mpq_class(1, 4)}};
    for (const auto& [re, im] : lams) {
        Complex lam = cq(re, im);
        Lattice L = periods(lam, 256);
        Complex o1 = oracles::period_integral_omega1(lam, 256);
        Complex o2 = oracles::period_integral_omega2(lam, 256);
        CHECK(dist_mid(L.omega1, o1) < 1e-20);
        CHECK(dist_mid(L.omega2, o2) < 1e-20);
        CHECK(mpfr_get_d(L.omega1.rad(), MPFR_RNDU) < 1e-30);
    }
}

TEST_CASE("period conjugation symmetry") {
    Complex lam = cq(mpq_class(1, 4), mpq_class(1, 4));
    Complex lamc = cq(mpq_class(1, 4), mpq_class(-1, 4));
    Lattice L = periods(lam, 256), Lc = periods(lamc, 256);
    CHECK(Complex::overlaps(conj(L.omega1), Lc.omega1));
}

TEST_CASE("hyp2f1 series and landen agree across case boundaries") {
    // same value computed through the direct series and through one Landen step
    Complex z = cq(mpq_class(3, 5), mpq_class(1, 10));  // |z| = .608 near the cutover
    Complex direct = hyp2f1_half(z, 320);
    // force the Landen route: F(z) = (1+k1) F(k1^2)
    mpfr_prec_t wp = 336;
    Complex one(Real::from_int(1, wp));
    Complex kp = sqrt(sub(one, z, wp), wp);
    Complex k1 = div(sub(one, kp, wp), add(one, kp, wp), wp);
    Complex landen = mul(add(one, k1, wp), hyp2f1_half(mul(k1, k1, wp), 320), 320);
    CHECK(Complex::overlaps(direct, landen));
    CHECK(dist_mid(direct, landen) < 1e-60);
}

TEST_CASE("wp homogeneity") {
    Lattice L = periods(cq(mpq_class(1, 3), 0), 256);
    for (auto cc : {std::pair<long, long>{2, 0}, {0, 1}, {1, 1}}) {
        Complex c = cq(cc.first, cc.second);
        Lattice Lc{mul(c, L.omega1, 256), mul(c, L.omega2, 256), L.tau};
        for (auto zz : {std::pair<mpq_class, mpq_class>{mpq_class(3, 10), mpq_class(1, 10)},
                        {mpq_class(1, 5), mpq_class(2, 5)}}) {
            Complex z = add(mul(cq(zz.first, 0), L.omega1, 256),
                            mul(cq(zz.second, 0), L.omega2, 256), 256);
            Complex lhs = wp(mul(c, z, 256), Lc, 256);
            Complex rhs = div(wp(z, L, 256), mul(c, c, 256), 256);
            CHECK(Complex::overlaps(lhs, rhs));
        }
    }
}

TEST_CASE("wp evenness") {
    Lattice L = periods(cq(mpq_class(2, 5), mpq_class(1, 5)), 256);
    Complex z = add(mul(cq(mpq_class(27, 100), 0), L.omega1, 256),
                    mul(cq(mpq_class(13, 100), 0), L.omega2, 256), 256);
    CHECK(Complex::overlaps(wp(z, L, 256), wp(neg(z), L, 256)));
}

TEST_CASE("wp against direct Eisenstein summation") {
    Lattice L = periods(cq(mpq_class(1, 2), 0), 256);
    auto cd = [](const Complex& x) {
        return std::complex<double>(mpfr_get_d(x.re_mid(), MPFR_RNDN),
                                    mpfr_get_d(x.im_mid(), MPFR_RNDN));
    };
    std::complex<double> w1 = cd(L.omega1), w2 = cd(L.omega2);
    Complex z = add(mul(cq(mpq_class(3, 10), 0), L.omega1, 256),
                    mul(cq(mpq_class(17, 100), 0), L.omega2, 256), 256);
    std::complex<double> direct = oracles::wp_eisenstein(cd(z), w1, w2, 220);
    Complex viaq = wp(z, L, 256);
    CHECK(std::abs(cd(viaq) - direct) < 2e-3);

    // wp(w1/2) is real on the square lattice
    Complex half1 = mul(cq(mpq_class(1, 2), 0), L.omega1, 256);
    Complex v = wp(half1, L, 256);
    CHECK(v.im().contains_zero());
    std::complex<double> dv = oracles::wp_eisenstein(cd(half1), w1, w2, 220);
    CHECK(std::abs(cd(v) - dv) < 2e-3);
}

TEST_CASE("wp pole reported on the lattice") {
    Lattice L = periods(cq(mpq_class(1, 2), 0), 128);
    CHECK_THROWS_AS((void)wp(Complex(Real::from_int(0, 128)), L, 128), pole_error);
}

TEST_CASE("x_lambda and its two defining forms") {
    mpq_class lam_q(1, 2);
    Complex lam = cq(lam_q, 0);
    Lattice L = periods(lam, 256);
    // z = w2/2 -> 0
    Complex z2 = mul(cq(mpq_class(1, 2), 0), L.omega2, 256);
    Complex at_half2 = x_lambda(z2, lam, L, 256);
    CHECK(at_half2.contains(0, 0));
    // z = w1/2 -> the 2-torsion abscissa 1 (exactly, for lambda = 1/2)
    Complex z1 = mul(cq(mpq_class(1, 2), 0), L.omega1, 256);
    Complex at_half1 = x_lambda(z1, lam, L, 256);
    CHECK(at_half1.contains(1, 0));
    // (w1+w2)/2 -> the remaining 2-torsion abscissa lambda
    Complex z3 = mul(cq(mpq_class(1, 2), 0), add(L.omega1, L.omega2, 256), 256);
    CHECK(x_lambda(z3, lam, L, 256).contains(lam_q, 0));
}

TEST_CASE("x_lambda form consistency across the region grid") {
    auto grid = region_grid_20();
    REQUIRE(grid.size() == 20);
    int count = 0;
    for (size_t i = 0; i < grid.size(); i += 4) {
        Complex lam = cq(grid[i].first, grid[i].second);
        Lattice L = periods(lam, 256);
        for (const auto& [s, t] : sample_unit_square(25)) {
            mpq_class b2 = mpq_class(1, 20) + t * mpq_class(9, 10);
            Complex z = add(mul(cq(s, 0), L.omega1, 256), mul(cq(b2, 0), L.omega2, 256), 256);
            (void)x_lambda(z, lam, L, 256);  // throws if the forms disagree
            ++count;
        }
    }
    CHECK(count == 125);
}

TEST_CASE("lattice distance on the square lattice") {
    Real one = Real::from_int(1, 256);
    Complex w1(one), w2 = Complex::i_unit(256);
    Lattice L{w1, w2, w2};
    CHECK(lattice_distance(Complex(Real(256)), L, 256).contains(mpq_class(0)));
    Complex half = cq(mpq_class(1, 2), 0);
    CHECK(lattice_distance(half, L, 256).contains(mpq_class(1, 2)));
    // center of the cell: distance sqrt(2)/2
    Complex ctr = cq(mpq_class(1, 2), mpq_class(1, 2));
    Real d = lattice_distance(ctr, L, 256);
    Real ref = sqrt(Real::from_mpq(mpq_class(1, 2), 256), 256);
    CHECK(Real::overlaps(d, ref));
}

TEST_CASE("lattice distance against wider brute search") {
    Lattice L = periods(cq(mpq_class(1, 10), mpq_class(1, 5)), 256);
    for (const auto& [s, t] : sample_unit_square(40)) {
        Complex z = add(mul(cq(s, 0), L.omega1, 256), mul(cq(t, 0), L.omega2, 256), 256);
        Real d = lattice_distance(z, L, 256);
        Real brute(256);
        bool first = true;
        for (int m = -3; m <= 3; ++m)
            for (int n = -3; n <= 3; ++n) {
                Complex w = add(mul(cq(m, 0), L.omega1, 256), mul(cq(n, 0), L.omega2, 256),
                                256);
                Real cand = sub(z, w, 256).abs(256);
                brute = first ? cand : min(brute, cand, 256);
                first = false;
            }
        CHECK(Real::overlaps(d, brute));
    }
}

TEST_CASE("reduce_lambda exact on rational inputs") {
    auto r13 = reduce_lambda_exact(mpq_class(1, 3), 0, 256);
    CHECK(r13.orbit_index == 0);
    CHECK(r13.scaling_class == ScalingClass::IDENTITY);
    CHECK(!r13.epsilon_is_i);

    auto r3 = reduce_lambda_exact(mpq_class(3), 0, 256);
    CHECK(r3.lambda_rep_exact->first == mpq_class(1, 3));
    CHECK(r3.scaling_class == ScalingClass::SQRT_LAMBDA);
    CHECK(!r3.epsilon_is_i);

    auto r23 = reduce_lambda_exact(mpq_class(2, 3), 0, 256);
    CHECK(r23.lambda_rep_exact->first == mpq_class(1, 3));
    CHECK(r23.scaling_class == ScalingClass::IDENTITY);
    CHECK(r23.epsilon_is_i);

    CHECK_THROWS_AS((void)reduce_lambda_exact(0, 0, 128), domain_error);
    CHECK_THROWS_AS((void)reduce_lambda_exact(1, 0, 128), domain_error);
}

TEST_CASE("reduce_lambda roundtrip: lattice invariants match the curve") {
    // For Lambda_{l'} = scale * Lambda_rep the invariants satisfy
    // g2(Lambda') = scale^-4 g2(Lambda_rep), g3' = scale^-6 g3(rep), and they
    // must equal the algebraic invariants of y^2 = x(x-1)(x-l').
    std::vector<std::pair<mpq_class, mpq_class>> inputs = {
        {mpq_class(3), 0},       {mpq_class(2, 3), 0},  {mpq_class(-1), 0},
        {mpq_class(5), 0},       {mpq_class(1, 5), 0},  {mpq_class(7, 2), mpq_class(1, 2)},
        {mpq_class(-2), mpq_class(1, 3)}, {mpq_class(-1, 2), 0}, {mpq_class(3, 2), 0},
    };
    for (const auto& [re, im] : inputs) {
        CAPTURE(re.get_d());
        CAPTURE(im.get_d());
        FundamentalOrbit orbit = reduce_lambda_exact(re, im, 256);
        Lattice Lr = periods(orbit.lambda_rep, 256);
        Complex s = orbit_scale(orbit, 256);
        Lattice Lp{mul(s, Lr.omega1, 256), mul(s, Lr.omega2, 256), Lr.tau};
        auto [g2, g3] = oracles::g2g3_from_lattice(Lp, 256);
        auto [ag, bg] = oracles::g2g3_legendre_gaussian(re, im);
        CHECK(g2.contains(ag.first, ag.second));
        CHECK(g3.contains(bg.first, bg.second));
    }
}

TEST_CASE("reduce_lambda ball path") {
    Complex lp = cq(mpq_class(7, 2), mpq_class(1, 2));
    FundamentalOrbit orbit = reduce_lambda(lp, 256);
    FundamentalOrbit exact = reduce_lambda_exact(mpq_class(7, 2), mpq_class(1, 2), 256);
    CHECK(orbit.orbit_index == exact.orbit_index);
    CHECK(orbit.scaling_class == exact.scaling_class);
    CHECK(orbit.epsilon_is_i == exact.epsilon_is_i);
}

TEST_CASE("f_lambda_prime branch values and relations") {
    // identity class: f = X_lambda; at (0, 1/2) it vanishes
    auto id_orbit = reduce_lambda_exact(mpq_class(1, 3), 0, 256);
    OrbitContext ctx = make_context(id_orbit, 256);
    Complex v = f_lambda_prime(Real::from_int(0, 256), Real::from_mpq(mpq_class(1, 2), 256),
                               ctx, 256);
    CHECK(v.contains(0, 0));

    // region errors
    CHECK_THROWS_AS((void)f_lambda_prime(Real::from_mpq(mpq_class(1, 2), 256),
                                         Real::from_mpq(mpq_class(1, 100), 256), ctx, 256),
                    domain_error);
    CHECK_THROWS_AS((void)f_lambda_prime(Real::from_int(0, 256), Real::from_int(0, 256), ctx,
                                         256),
                    domain_error);

    // sqrt(lambda) class: X_{l'}(b1 w1' + b2 w2') * f = +-1
    auto sq_orbit = reduce_lambda_exact(mpq_class(3), 0, 256);
    OrbitContext sctx = make_context(sq_orbit, 256);
    Complex s = orbit_scale(sq_orbit, 256);
    Lattice Lp{mul(s, sctx.L.omega1, 256), mul(s, sctx.L.omega2, 256), sctx.L.tau};
    Complex e2p = wp_half_omega2(Lp, 256);
    int checked = 0;
    for (const auto& [u, t] : sample_unit_square(50)) {
        mpq_class b1 = (2 * u - 1) * mpq_class(29, 60);
        mpq_class b2 = (2 * t - 1) * mpq_class(29, 60);
        if (b1 == 0 && b2 == 0) continue;
        Complex f;
        try {
            f = f_lambda_prime(Real::from_mpq(b1, 256), Real::from_mpq(b2, 256), sctx, 256);
        } catch (const pole_error&) {
            continue;
        }
        Complex zp = add(mul(cq(b1, 0), Lp.omega1, 256), mul(cq(b2, 0), Lp.omega2, 256), 256);
        Complex xp = sub(wp(zp, Lp, 256), e2p, 256);
        Complex prod = mul(xp, f, 256);
        bool plus = sub(prod, Complex(Real::from_int(1, 256)), 256).contains_zero();
        bool minus = add(prod, Complex(Real::from_int(1, 256)), 256).contains_zero();
        CHECK((plus || minus));
        ++checked;
    }
    CHECK(checked >= 40);

    // sqrt(1-lambda) class: X_{l'} (1-lambda) / f = +-1
    auto sm_orbit = reduce_lambda_exact(mpq_class(-1, 2), 0, 256);
    REQUIRE(sm_orbit.scaling_class == ScalingClass::SQRT_ONE_MINUS_LAMBDA);
    OrbitContext mctx = make_context(sm_orbit, 256);
    Complex sm = orbit_scale(sm_orbit, 256);
    Lattice Lm{mul(sm, mctx.L.omega1, 256), mul(sm, mctx.L.omega2, 256), mctx.L.tau};
    Complex e2m = wp_half_omega2(Lm, 256);
    Complex one_minus = sub(Complex(Real::from_int(1, 256)), mctx.lambda, 256);
    checked = 0;
    for (const auto& [u, t] : sample_unit_square(25)) {
        mpq_class b1 = u;
        mpq_class b2 = mpq_class(1, 30) + t * mpq_class(28, 30);
        Complex f = f_lambda_prime(Real::from_mpq(b1, 256), Real::from_mpq(b2, 256), mctx,
                                   256);
        if (f.contains_zero()) continue;
        Complex zp = add(mul(cq(b1, 0), Lm.omega1, 256), mul(cq(b2, 0), Lm.omega2, 256), 256);
        Complex xp = sub(wp(zp, Lm, 256), e2m, 256);
        Complex ratio = div(mul(xp, one_minus, 256), f, 256);
        bool plus = sub(ratio, Complex(Real::from_int(1, 256)), 256).contains_zero();
        bool minus = add(ratio, Complex(Real::from_int(1, 256)), 256).contains_zero();
        CHECK((plus || minus));
        ++checked;
    }
    CHECK(checked >= 20);
}

TEST_CASE("distance lemma on the grid") {
    for (const auto& [re, im] : region_grid_20()) {
        DistanceLemmaReport rep = verify_distance_lemma(cq(re, im), 100, 192);
        CAPTURE(re.get_d());
        CAPTURE(im.get_d());
        CHECK(rep.holds);
        CHECK(rep.worst_margin >= 0.0);
    }
}

TEST_CASE("upper lemma statistics") {
    Lattice L = periods(cq(mpq_class(1, 2), 0), 192);
    UpperLemmaReport a = verify_upper_lemma(L, 300, 192);
    CHECK(a.max_ratio > 0);
    CHECK(a.max_ratio < 1e6);
    UpperLemmaReport b = verify_upper_lemma(L, 3000, 192);
    // stability under refinement: within a factor 4 either way
    CHECK(b.max_ratio < 4 * a.max_ratio + 1);
    CHECK(a.max_ratio < 4 * b.max_ratio + 1);
}

TEST_CASE("lower lemma statistics and the lambda-exp ratio") {
    double products[3];
    int idx = 0;
    for (mpq_class lam : {mpq_class(1, 100), mpq_class(1, 1000), mpq_class(1, 10000)}) {
        LowerLemmaReport rep = verify_lower_lemma(cq(lam, 0), mpq_class(1, 120), 200, 192);
        CHECK(rep.max_product > 0);
        CHECK(rep.lambda_exp_ratio < 100.0);  // |lambda| << exp(-pi Im tau)
        products[idx++] = rep.max_product;
    }
    // comparable across the lambda sweep (the exp factor compensates)
    for (int i = 1; i < 3; ++i) {
        CHECK(products[i] < 100 * products[0] + 1);
        CHECK(products[0] < 100 * products[i] + 1);
    }
}

TEST_CASE("derivative growth bounds") {
    auto orbit = reduce_lambda_exact(mpq_class(1, 2), 0, 192);
    OrbitContext ctx = make_context(orbit, 192);
    DerivativeBoundsReport rep = derivative_bounds(ctx, 10, 192);
    REQUIRE(rep.per_n.size() == 10);
    CHECK(rep.growth_ok);
    for (int n = 1; n <= 10; ++n)
        CHECK(rep.per_n[n - 1] <= rep.a1_fit * std::pow(rep.a2_fit, n) * 1.0000001);

    // sqrt(lambda) class with a tiny representative: lambda/X stays bounded
    auto sq = reduce_lambda_exact(mpq_class(1000), 0, 192);
    REQUIRE(sq.scaling_class == ScalingClass::SQRT_LAMBDA);
    OrbitContext sctx = make_context(sq, 192);
    DerivativeBoundsReport srep = derivative_bounds(sctx, 5, 192);
    CHECK(srep.growth_ok);
    for (const auto& [u, t] : sample_unit_square(30)) {
        mpq_class b1 = (2 * u - 1) * mpq_class(29, 60);
        mpq_class b2 = (2 * t - 1) * mpq_class(29, 60);
        if (b1 == 0 && b2 == 0) continue;
        Complex f = f_lambda_prime(Real::from_mpq(b1, 192), Real::from_mpq(b2, 192), sctx,
                                   192);
        CHECK(f.abs().upper_d() < 40.0);
    }
}

TEST_CASE("mild map") {
    auto orbit = reduce_lambda_exact(mpq_class(1, 3), 0, 192);
    OrbitContext ctx = make_context(orbit, 192);
    MildPoint p0 = mild_map(ctx, mpq_class(1, 2), 0, 1000, 192);
    CHECK(p0.coords[1].contains(mpq_class(1, 30)));
    MildPoint p1 = mild_map(ctx, mpq_class(1, 2), 1, 1000, 192);
    CHECK(p1.coords[1].contains(mpq_class(29, 30)));
    CHECK(abs(p1.coords[2]).upper_d() <= 1.0000001);
    CHECK(abs(p1.coords[3]).upper_d() <= 1.0000001);
    // T smaller than |f| near the band edge is rejected
    CHECK_THROWS_AS((void)mild_map(ctx, 0, 0, 1, 192), domain_error);
}
