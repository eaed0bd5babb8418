#pragma once

// Independent numerical oracles used only by the test suites.  Each one
// reaches the quantity under test by a different route than the library:
// theta series for the modular lambda, Gauss-Chebyshev quadrature of the
// defining differential for the periods, truncated Eisenstein sums for wp,
// and Eisenstein q-series for the lattice invariants g2, g3.

#include <complex>
#include <map>
#include <utility>

#include "lab/ball.hpp"
#include "lab/elliptic.hpp"
#include "lab/poly.hpp"

namespace oracles {

using lab::Complex;
using lab::Lattice;
using lab::Real;

// modular lambda theta quotient (theta2/theta3)^4 at q = exp(i pi tau)
inline Complex modular_lambda(const Complex& tau, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 32;
    Complex ipi = lab::mul_i(Complex(Real::pi(wp)));
    Complex q = lab::exp(lab::mul(ipi, tau, wp), wp);
    Complex t2(wp), t3(wp);
    Complex one(Real::from_int(1, wp));
    // theta2 = 2 q^{1/4} sum q^{n(n+1)}, theta3 = 1 + 2 sum q^{n^2}
    for (int n = 0; n < 48; ++n) {
        t2 = lab::add(t2, lab::pow_si(q, n * (n + 1), wp), wp);
        if (n >= 1) t3 = lab::add(t3, lab::pow_si(q, n * n, wp), wp);
    }
    Complex q14 = lab::sqrt(lab::sqrt(q, wp), wp);
    t2 = lab::mul(lab::add(t2, t2, wp), q14, wp);
    t3 = lab::add(one, lab::add(t3, t3, wp), wp);
    Complex r = lab::div(t2, t3, wp);
    return lab::pow_si(r, 4, prec);
}

// omega1 = integral of the defining differential around the [0, lambda]
// branch cut; with X = lambda sin^2(theta) this becomes
//   2 int_0^{pi/2} dtheta / sqrt(1 - lambda sin^2 theta),
// evaluated by Gauss-Chebyshev quadrature (exponentially convergent since
// the integrand is analytic on the segment).
inline Complex period_quadrature(const Complex& coeff, mpfr_prec_t prec, int nodes = 256) {
    mpfr_prec_t wp = prec + 32;
    Real pi = Real::pi(wp);
    Complex sum(wp);
    Complex one(Real::from_int(1, wp));
    for (int k = 1; k <= nodes; ++k) {
        // s_k = cos((2k-1) pi / (2K)), integrand (1 - coeff s^2)^{-1/2}
        Real ang = lab::div(lab::mul(Real::from_int(2 * k - 1, wp), pi, wp),
                            Real::from_int(2 * nodes, wp), wp);
        Real s = lab::cos(ang, wp);
        Complex s2(lab::mul(s, s, wp));
        Complex den = lab::sqrt(lab::sub(one, lab::mul(coeff, s2, wp), wp), wp);
        sum = lab::add(sum, lab::recip(den, wp), wp);
    }
    // (pi / K) * sum
    Complex w = lab::mul(Complex(lab::div(pi, Real::from_int(nodes, wp), wp)), sum, prec);
    return w;
}

inline Complex period_integral_omega1(const Complex& lambda, mpfr_prec_t prec) {
    return period_quadrature(lambda, prec);
}

inline Complex period_integral_omega2(const Complex& lambda, mpfr_prec_t prec) {
    Complex one(Real::from_int(1, prec + 32));
    return lab::mul_i(period_quadrature(lab::sub(one, lambda, prec + 32), prec));
}

// direct truncated Eisenstein sum for wp, double precision (low-accuracy oracle)
inline std::complex<double> wp_eisenstein(std::complex<double> z, std::complex<double> w1,
                                          std::complex<double> w2, int M) {
    std::complex<double> s = 1.0 / (z * z);
    for (int m = -M; m <= M; ++m) {
        for (int n = -M; n <= M; ++n) {
            if (m == 0 && n == 0) continue;
            std::complex<double> w = double(m) * w1 + double(n) * w2;
            s += 1.0 / ((z - w) * (z - w)) - 1.0 / (w * w);
        }
    }
    return s;
}

// g2, g3 of the lattice via Eisenstein q-series in qq = exp(2 pi i tau):
//   E4 = 1 + 240 sum n^3 qq^n/(1-qq^n),  g2 = (2pi/w1)^4 E4 / 12
//   E6 = 1 - 504 sum n^5 qq^n/(1-qq^n),  g3 = (2pi/w1)^6 E6 / 216
inline std::pair<Complex, Complex> g2g3_from_lattice(const Lattice& L, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 32;
    Complex twopii = lab::mul_i(Complex(lab::mul_2si(Real::pi(wp), 1)));
    Complex qq = lab::exp(lab::mul(twopii, L.tau, wp), wp);
    Complex one(Real::from_int(1, wp));
    Complex e4 = one, e6 = one;
    Complex qn = one;
    for (int n = 1; n <= 48; ++n) {
        qn = lab::mul(qn, qq, wp);
        Complex frac = lab::div(qn, lab::sub(one, qn, wp), wp);
        long n3 = static_cast<long>(n) * n * n;
        e4 = lab::add(e4, lab::mul(Complex(Real::from_int(240 * n3, wp)), frac, wp), wp);
        e6 = lab::sub(e6, lab::mul(Complex(Real::from_int(504 * n3 * n * n, wp)), frac, wp),
                      wp);
    }
    Complex fac = lab::div(twopii, L.omega1, wp);  // 2 pi i / w1; fac^4 = (2pi/w1)^4
    Complex f2 = lab::mul(fac, fac, wp);
    Complex f4 = lab::mul(f2, f2, wp);
    Complex g2 = lab::div(lab::mul(f4, e4, wp), Complex(Real::from_int(12, wp)), prec);
    Complex g3 = lab::div(lab::mul(lab::mul(f4, f2, wp), e6, wp),
                          Complex(Real::from_int(-216, wp)), prec);
    return {g2, g3};
}

// algebraic invariants of the Legendre curve y^2 = x(x-1)(x-lambda)
inline std::pair<mpq_class, mpq_class> g2g3_legendre(const mpq_class& lam) {
    mpq_class s = (lam + 1) / 3;
    mpq_class p = lam - (lam + 1) * (lam + 1) / 3;
    mpq_class q = -2 * s * s * s + lam * s;
    return {-4 * p, -4 * q};
}

inline std::pair<std::pair<mpq_class, mpq_class>, std::pair<mpq_class, mpq_class>>
g2g3_legendre_gaussian(const mpq_class& re, const mpq_class& im) {
    // same formulas over Q(i)
    auto mulc = [](const std::pair<mpq_class, mpq_class>& a,
                   const std::pair<mpq_class, mpq_class>& b) -> std::pair<mpq_class, mpq_class> {
        return {mpq_class(a.first * b.first - a.second * b.second),
                mpq_class(a.first * b.second + a.second * b.first)};
    };
    std::pair<mpq_class, mpq_class> lam{re, im};
    std::pair<mpq_class, mpq_class> s{mpq_class((re + 1) / 3), mpq_class(im / 3)};
    std::pair<mpq_class, mpq_class> lp1{mpq_class(re + 1), im};
    std::pair<mpq_class, mpq_class> lp1sq = mulc(lp1, lp1);
    std::pair<mpq_class, mpq_class> p{mpq_class(lam.first - lp1sq.first / 3),
                                      mpq_class(lam.second - lp1sq.second / 3)};
    std::pair<mpq_class, mpq_class> s3 = mulc(mulc(s, s), s);
    std::pair<mpq_class, mpq_class> ls = mulc(lam, s);
    std::pair<mpq_class, mpq_class> q{mpq_class(-2 * s3.first + ls.first),
                                      mpq_class(-2 * s3.second + ls.second)};
    return {{mpq_class(-4 * p.first), mpq_class(-4 * p.second)},
            {mpq_class(-4 * q.first), mpq_class(-4 * q.second)}};
}

// x-coordinate of [n]P on y^2 = x^3 + ax + b as a reduced rational function,
// built from the duplication formula and the xADD relation
//   x([m+1]) x([m-1]) = ((x x_m - a)^2 - 4b (x + x_m)) / (x - x_m)^2.
// This is an addition-law route to the division polynomials, independent of
// the psi recursion.
struct RatFun {
    lab::PolyQ num, den;

    void reduce() {
        lab::PolyQ g = lab::gcd(num, den);
        if (g.degree() > 0) {
            num = lab::divexact(num, g);
            den = lab::divexact(den, g);
        }
        mpq_class lc = den.leading();
        num = mpq_class(1 / lc) * num;
        den = mpq_class(1 / lc) * den;
    }
};

inline RatFun mult_by_n_ladder(const mpq_class& a, const mpq_class& b, long n) {
    using lab::PolyQ;
    PolyQ x = PolyQ::x();
    PolyQ A = PolyQ::constant(a), B = PolyQ::constant(b);
    std::map<long, RatFun> x_of;
    x_of[1] = {x, PolyQ::constant(1)};
    auto dbl = [&](const RatFun& f) {
        PolyQ N = f.num, D = f.den;
        PolyQ n2 = N * N - A * D * D;
        RatFun r{n2 * n2 - mpq_class(8) * B * N * D * D * D,
                 mpq_class(4) * D * (N * N * N + A * N * D * D + B * D * D * D)};
        r.reduce();
        return r;
    };
    x_of[2] = dbl(x_of[1]);
    for (long m = 2; m < n; ++m) {
        const RatFun& fm = x_of[m];
        PolyQ N = fm.num, D = fm.den;
        PolyQ t1 = x * N - A * D;
        PolyQ numer = t1 * t1 - mpq_class(4) * B * D * (x * D + N);
        PolyQ t2 = x * D - N;
        RatFun prod{numer * x_of[m - 1].den, t2 * t2 * x_of[m - 1].num};
        prod.reduce();
        x_of[m + 1] = prod;
    }
    return x_of[n];
}

}  // namespace oracles
