#include "lab/torsion.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "lab/elliptic.hpp"
#include "lab/errors.hpp"
#include "lab/rational.hpp"
#include "lab/report.hpp"
#include "lab/roots.hpp"

namespace lab {

CurveQ CurveQ::short_model(const mpq_class& g2, const mpq_class& g3) {
    CurveQ c;
    c.g2 = g2;
    c.g3 = g3;
    c.validate();
    return c;
}

CurveQ CurveQ::legendre(const mpq_class& lambda) {
    CurveQ c;
    c.is_legendre = true;
    c.lambda = lambda;
    c.lambda.canonicalize();
    c.validate();
    return c;
}

std::pair<mpq_class, mpq_class> CurveQ::short_ab() const {
    if (!is_legendre) return {mpq_class(-g2 / 4), mpq_class(-g3 / 4)};
    // x(x-1)(x-lambda) with x -> X + (lambda+1)/3 gives X^3 + pX + q
    mpq_class s = shift();
    mpq_class p = lambda - (lambda + 1) * (lambda + 1) / 3;
    mpq_class q = -2 * s * s * s + lambda * s;
    return {p, q};
}

mpq_class CurveQ::shift() const {
    return is_legendre ? mpq_class((lambda + 1) / 3) : mpq_class(0);
}

void CurveQ::validate() const {
    if (is_legendre) {
        if (lambda == 0 || lambda == 1) throw domain_error("CurveQ: lambda in {0,1}");
        return;
    }
    // disc of y^2 = x^3 + ax + b: -16(4a^3 + 27 b^2)
    auto [a, b] = short_ab();
    if (4 * a * a * a + 27 * b * b == 0) throw domain_error("CurveQ: singular curve");
}

// ------------------------------------------------------- psi recursion

namespace {

// reduced division polynomials P_n with psi_n = P_n for n odd and
// psi_n = 2y P_n for n even, after substituting y^2 = x^3 + ax + b
struct PsiTable {
    std::map<long, PolyQ> p;
    PolyQ f4;  // (2y)^2 = 4(x^3 + ax + b)
    mpq_class a, b;

    const PolyQ& at(long n) { return p.at(n); }

    void build(long n_max) {
        PolyQ x = PolyQ::x();
        PolyQ fcubic = x * x * x + PolyQ::constant(a) * x + PolyQ::constant(b);
        f4 = mpq_class(4) * fcubic;
        p[0] = PolyQ();
        p[1] = PolyQ::constant(1);
        p[2] = PolyQ::constant(1);
        p[3] = PolyQ(std::vector<mpq_class>{-(a * a), 12 * b, 6 * a, 0, 3});
        p[4] = PolyQ(std::vector<mpq_class>{
            -2 * (8 * b * b + a * a * a), -8 * a * b, -10 * a * a, 40 * b, 10 * a, 0, 2});
        for (long n = 5; n <= n_max; ++n) {
            long m = n / 2;
            if (n % 2 == 1) {
                // P_{2m+1}
                PolyQ t1 = p[m + 2] * p[m] * p[m] * p[m];
                PolyQ t2 = p[m - 1] * p[m + 1] * p[m + 1] * p[m + 1];
                p[n] = (m % 2 == 0) ? f4 * f4 * t1 - t2 : t1 - f4 * f4 * t2;
            } else {
                // P_{2m}
                PolyQ t = p[m + 2] * p[m - 1] * p[m - 1] - p[m - 2] * p[m + 1] * p[m + 1];
                p[n] = p[m] * t;
            }
        }
    }
};

PsiTable psi_table(const CurveQ& curve, long n_max) {
    PsiTable t;
    auto [a, b] = curve.short_ab();
    t.a = a;
    t.b = b;
    t.build(std::max(n_max + 2, 4L));
    return t;
}

// division pair in the short coordinate
DivisionPair division_pair_short(PsiTable& t, long n) {
    PolyQ x = PolyQ::x();
    PolyQ A, B;
    if (n % 2 == 1) {
        B = t.at(n) * t.at(n);
        A = x * B - t.f4 * t.at(n + 1) * t.at(n - 1);
    } else {
        B = t.f4 * t.at(n) * t.at(n);
        A = x * B - t.at(n + 1) * t.at(n - 1);
    }
    return {A, B};
}

// coprimality certificate: gcd is constant modulo a good prime
bool coprime_mod_prime(const PolyQ& A, const PolyQ& B) {
    auto [ca, za] = A.content_primitive();
    auto [cb, zb] = B.content_primitive();
    (void)ca;
    (void)cb;
    for (unsigned long p : {1000003ul, 1000033ul, 1000037ul, 1000039ul, 1000081ul}) {
        mpz_class pz(p);
        if (mpz_divisible_p(za.back().get_mpz_t(), pz.get_mpz_t())) continue;
        if (mpz_divisible_p(zb.back().get_mpz_t(), pz.get_mpz_t())) continue;
        // Euclid over Z/p with uint64 arithmetic
        auto reduce = [&](const PolyZ& z) {
            std::vector<unsigned long> r(z.size());
            for (size_t i = 0; i < z.size(); ++i) {
                mpz_class m = z[i] % static_cast<long>(p);
                if (m < 0) m += static_cast<long>(p);
                r[i] = m.get_ui();
            }
            while (!r.empty() && r.back() == 0) r.pop_back();
            return r;
        };
        auto powmod = [&](unsigned long base, unsigned long e) {
            unsigned long r = 1;
            base %= p;
            while (e) {
                if (e & 1) r = static_cast<unsigned long>(__uint128_t(r) * base % p);
                base = static_cast<unsigned long>(__uint128_t(base) * base % p);
                e >>= 1;
            }
            return r;
        };
        std::vector<unsigned long> f = reduce(za), g = reduce(zb);
        while (!g.empty()) {
            unsigned long li = powmod(g.back(), p - 2);
            while (f.size() >= g.size() && !f.empty()) {
                unsigned long c = static_cast<unsigned long>(__uint128_t(f.back()) * li % p);
                size_t off = f.size() - g.size();
                for (size_t i = 0; i < g.size(); ++i) {
                    unsigned long sub = static_cast<unsigned long>(__uint128_t(c) * g[i] % p);
                    f[off + i] = (f[off + i] + p - sub) % p;
                }
                while (!f.empty() && f.back() == 0) f.pop_back();
            }
            std::swap(f, g);
        }
        if (f.size() == 1) return true;  // constant gcd mod p certifies coprimality
    }
    return false;
}

}  // namespace

DivisionPair division_pair(const CurveQ& curve, long n) {
    if (n < 2) throw domain_error("division_pair: n >= 2 required");
    curve.validate();
    PsiTable t = psi_table(curve, n);
    auto [A, B] = division_pair_short(t, n);
    mpq_class s = curve.shift();
    if (s != 0) {
        // native = short + s: A~(x) = A(x-s) + s B(x-s), B~(x) = B(x-s)
        A = A.shift(-s) + PolyQ::constant(s) * B.shift(-s);
        B = B.shift(-s);
    }
    if (A.degree() != n * n || A.leading() != 1)
        throw error("division_pair: A_n structure violated");
    if (B.degree() != n * n - 1 || B.leading() != n * n)
        throw error("division_pair: B_n structure violated");
    if (!coprime_mod_prime(A, B)) {
        if (gcd(A, B).degree() != 0) throw error("division_pair: A_n, B_n share a factor");
    }
    return {A, B};
}

namespace {

// roots = abscissas of nonzero points of order dividing n, each exactly once
PolyQ order_dividing_poly(PsiTable& t, const CurveQ& curve, long n) {
    PolyQ q;
    if (n % 2 == 1) {
        q = t.at(n);
    } else {
        PolyQ x = PolyQ::x();
        PolyQ cubic = x * x * x + PolyQ::constant(t.a) * x + PolyQ::constant(t.b);
        q = t.at(n) * cubic;
    }
    mpq_class s = curve.shift();
    if (s != 0) q = q.shift(-s);
    return q;
}

}  // namespace

PolyQ primitive_division(const CurveQ& curve, long n) {
    if (n < 2) throw domain_error("primitive_division: n >= 2 required");
    curve.validate();
    PsiTable t = psi_table(curve, n);
    std::map<long, PolyQ> prim;
    for (long d = 2; d <= n; ++d) {
        if (n % d != 0) continue;
        PolyQ q = order_dividing_poly(t, curve, d);
        for (long e = 2; e < d; ++e) {
            if (d % e != 0) continue;
            q = divexact(q, prim.at(e));
        }
        prim[d] = q;
    }
    auto [c, z] = prim.at(n).content_primitive();
    (void)c;
    return PolyQ::from_integer_coeffs(z);
}

long representatives_in_region(const TorsionPoint& P, TorsionRegion region) {
    long n = P.n;
    if (n < 2) throw domain_error("representatives_in_region: n >= 2");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), mpz_class(P.k).get_mpz_t(), mpz_class(P.l).get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), mpz_class(n).get_mpz_t());
    if (g != 1) throw domain_error("representatives_in_region: gcd(k,l,n) != 1");
    long count = 0;
    for (long m = 1; m < n; ++m) {
        long b1 = (m * P.k) % n;
        long b2 = (m * P.l) % n;
        if (b1 < 0) b1 += n;
        if (b2 < 0) b2 += n;
        if (region == TorsionRegion::U1_EDGE) {
            // b2/n in [1/30, 29/30], or on the edge b2 = 0 with b1 != 0
            bool band = 30 * b2 >= n && 30 * b2 <= 29 * n;
            bool edge = b2 == 0 && b1 != 0;
            if (band || edge) ++count;
        } else {
            // symmetric fractional parts within 29/60
            long s1 = std::min(b1, n - b1);
            long s2 = std::min(b2, n - b2);
            if (60 * s1 <= 29 * n && 60 * s2 <= 29 * n) ++count;
        }
    }
    return count;
}

std::vector<std::pair<long, long>> primitive_orbit_reps(long n) {
    std::vector<std::pair<long, long>> out;
    std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
    for (long k = 0; k < n; ++k) {
        for (long l = 0; l < n; ++l) {
            if (seen[k][l]) continue;
            long nk = (n - k) % n, nl = (n - l) % n;
            seen[k][l] = seen[nk][nl] = true;
            if (k == 0 && l == 0) continue;
            mpz_class g;
            mpz_gcd(g.get_mpz_t(), mpz_class(k).get_mpz_t(), mpz_class(l).get_mpz_t());
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), mpz_class(n).get_mpz_t());
            if (g != 1) continue;
            out.emplace_back(k, l);
        }
    }
    return out;
}

// ------------------------------------------------------- degree matching

namespace {

struct DegreeContext {
    OrbitContext ctx;
    Complex scale;       // Lambda_{lambda'} = scale * Lambda_rep
    Complex half_w2p;    // wp_{Lambda'}(w2'/2)
    Factorization fac;   // of the primitive division polynomial
    mpq_class lambda;
    long n;
};

DegreeContext make_degree_context(const mpq_class& lambda, long n, mpfr_prec_t prec) {
    DegreeContext d;
    d.lambda = lambda;
    d.n = n;
    FundamentalOrbit orbit = reduce_lambda_exact(lambda, 0, prec);
    d.ctx = make_context(orbit, prec);
    d.scale = orbit_scale(orbit, prec);
    // wp_{Lambda'}(w2'/2) = scale^-2 wp_rep(w2/2)
    d.half_w2p = div(d.ctx.e2, mul(d.scale, d.scale, prec), prec);
    d.fac = factor_over_q(primitive_division(CurveQ::legendre(lambda), n));
    return d;
}

// abscissa of the point z = (k/n) w1' + (l/n) w2' on the Legendre curve
Complex abscissa_ball(const DegreeContext& d, long k, long l, mpfr_prec_t prec) {
    mpfr_prec_t wp_ = prec + 16;
    Complex z0 = add(mul(Complex::from_mpq(mpq_class(k, d.n), 0, wp_), d.ctx.L.omega1, wp_),
                     mul(Complex::from_mpq(mpq_class(l, d.n), 0, wp_), d.ctx.L.omega2, wp_),
                     wp_);
    Complex p_rep = wp(z0, d.ctx.L, wp_);
    Complex p_primed = div(p_rep, mul(d.scale, d.scale, wp_), wp_);
    Complex third = Complex::from_mpq(mpq_class((d.lambda + 1) / 3), 0, wp_);
    return add(p_primed, third, prec);
}

TorsionDegree match_degree(const DegreeContext& d, long k, long l, mpfr_prec_t prec) {
    for (mpfr_prec_t attempt = prec; attempt <= 16 * prec; attempt *= 2) {
        DegreeContext dd = d;
        if (attempt != prec) dd = make_degree_context(d.lambda, d.n, attempt);
        Complex x = abscissa_ball(dd, k, l, attempt);
        int hit = -1;
        bool multiple = false;
        for (size_t i = 0; i < dd.fac.factors.size(); ++i) {
            Complex v = dd.fac.factors[i].first.evaluate(x, attempt);
            if (v.contains_zero()) {
                if (hit >= 0) multiple = true;
                hit = static_cast<int>(i);
            }
        }
        if (hit < 0 || multiple) continue;  // escalate
        TorsionDegree out;
        out.matched_factor = hit;
        out.degree_x = dd.fac.factors[hit].first.degree();
        out.degree_low = out.degree_x;
        out.degree_high = 2 * out.degree_x;
        // which T in {0, 1, lambda} satisfies x = X_{lambda'}(z) - T
        Complex p_primed = sub(x, Complex::from_mpq(mpq_class((dd.lambda + 1) / 3), 0,
                                                    attempt), attempt);
        Complex X = sub(p_primed, dd.half_w2p, attempt);
        Complex Tball = sub(X, x, attempt);
        int tcount = 0;
        if (Tball.contains(0, 0)) {
            out.matched_T = 0;
            ++tcount;
        }
        if (Tball.contains(1, 0)) {
            out.matched_T = 1;
            ++tcount;
        }
        if (Tball.contains(dd.lambda, 0)) {
            out.matched_T = 2;
            ++tcount;
        }
        out.multiple_T = tcount > 1;
        return out;
    }
    throw ambiguity_error("torsion_field_degree: factor matching undecided at the ceiling");
}

}  // namespace

TorsionDegree torsion_field_degree(const mpq_class& lambda, const TorsionPoint& P,
                                   mpfr_prec_t prec) {
    if (P.n < 2) throw domain_error("torsion_field_degree: n >= 2");
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), mpz_class(P.k).get_mpz_t(), mpz_class(P.l).get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), mpz_class(P.n).get_mpz_t());
    if (g != 1) throw domain_error("torsion_field_degree: gcd(k,l,n) != 1");
    DegreeContext d = make_degree_context(lambda, P.n, prec);
    return match_degree(d, P.k, P.l, prec);
}

AbscissaHeightReport abscissa_height_check(const mpq_class& lambda, long n, mpfr_prec_t prec) {
    Factorization fac = factor_over_q(primitive_division(CurveQ::legendre(lambda), n));
    AbscissaHeightReport rep;
    rep.factors = static_cast<int>(fac.factors.size());
    // h(lambda) = log max(|num|, den)
    double hl = std::log(weil_height(lambda).get_d());
    for (const auto& [f, mult] : fac.factors) {
        (void)mult;
        double h;
        if (f.degree() == 1) {
            mpq_class root = mpq_class(-f.coeff(0) / f.coeff(1));
            h = std::log(weil_height(root).get_d());
        } else {
            Real m = mahler_measure(f, prec);
            h = log(m, prec).upper_d() / f.degree();
        }
        rep.max_log_height = std::max(rep.max_log_height, h);
        rep.max_ratio = std::max(rep.max_ratio, h / (1.0 + hl));
    }
    return rep;
}

// ------------------------------------------------------- cyclotomic side

PolyQ cyclotomic(long n) {
    if (n < 1) throw domain_error("cyclotomic: n >= 1");
    // (x^n - 1) / prod_{d | n, d < n} Phi_d
    std::map<long, PolyQ> cache;
    for (long d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        std::vector<mpq_class> c(d + 1, mpq_class(0));
        c[0] = -1;
        c[d] = 1;
        PolyQ q(c);
        for (long e = 1; e < d; ++e) {
            if (d % e != 0) continue;
            q = divexact(q, cache.at(e));
        }
        cache[d] = q;
    }
    return cache.at(n);
}

PolyQ cos_minimal_polynomial(long n) {
    if (n < 3) throw domain_error("cos_minimal_polynomial: n >= 3");
    PolyQ phi = cyclotomic(n);
    long m = phi.degree() / 2;
    // Phi_n / x^m = b_m + sum_{j>=1} b_{m+j} (x^j + x^-j); substitute
    // x^j + x^-j = p_j(t) with p_0 = 2, p_1 = t, p_j = t p_{j-1} - p_{j-2},
    // then t = 2 cos and finally x = t/2.
    std::vector<PolyQ> p(m + 1);
    p[0] = PolyQ::constant(2);
    if (m >= 1) p[1] = PolyQ::x();
    for (long j = 2; j <= m; ++j) p[j] = PolyQ::x() * p[j - 1] - p[j - 2];
    PolyQ psi = PolyQ::constant(phi.coeff(m));
    for (long j = 1; j <= m; ++j) psi = psi + PolyQ::constant(phi.coeff(m + j)) * p[j];
    // minimal polynomial of cos: substitute t -> 2x, take the primitive part
    PolyQ c = psi.scale_arg(2);
    auto [cont, z] = c.content_primitive();
    (void)cont;
    return PolyQ::from_integer_coeffs(z);
}

namespace {

// order of p in (Z/n)^* / {+-1}
long half_order_mod(long p, long n) {
    long r = p % n;
    if (r < 0) r += n;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), mpz_class(r).get_mpz_t(), mpz_class(n).get_mpz_t());
    if (g != 1) return 0;
    long acc = r % n, ord = 1;
    while (acc != 1 && acc != n - 1) {
        acc = static_cast<long>((__int128)acc * r % n);
        ++ord;
        if (ord > 2 * n) return 0;
    }
    return ord;
}

// Irreducibility of the cosine minimal polynomial.  The Frobenius at an
// unramified prime p acts on the conjugates cos(2 pi k/n) with orbits of
// length ord(p in (Z/n)*/{+-1}); if some p has full order m = deg C and C
// is squarefree mod p, then C mod p is irreducible and so is C.  Otherwise
// fall back to the general factorizer (only small-degree cases land here).
bool cos_minpoly_irreducible(const PolyQ& c, long n) {
    long m = c.degree();
    if (m <= 1) return true;
    // prime selection: full Frobenius order makes C mod p irreducible; the
    // Rabin test then certifies it outright
    int tried = 0;
    for (long p = 3; tried < 64; p += 2) {
        mpz_class pz(p);
        if (!mpz_probab_prime_p(pz.get_mpz_t(), 25)) continue;
        if (n % p == 0) continue;
        ++tried;
        if (half_order_mod(p, n) == m && irreducible_mod_p(c, p)) return true;
    }
    // non-cyclic Galois quotients land here; these have small degree
    return is_irreducible(c);
}

// Certified containment of all roots of the cosine minimal polynomial in the
// open unit disc: candidate midpoints cos(2 pi k/n) plus the classical
// validation radius deg * |C(z)/C'(z)|, disjointness, and |z| + r < 1.
bool cos_roots_inside_unit(const PolyQ& c, long n, mpfr_prec_t prec) {
    long m = c.degree();
    if (m < 1) return true;
    mpfr_prec_t wp = prec + static_cast<mpfr_prec_t>(4 * m) + 64;
    PolyQ dc = c.derivative();
    std::vector<Real> centers;
    std::vector<Mpfr> radii;
    Real pi = Real::pi(wp);
    for (long k = 1; 2 * k <= n && static_cast<long>(centers.size()) < m; ++k) {
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), mpz_class(k).get_mpz_t(), mpz_class(n).get_mpz_t());
        if (g != 1) continue;
        // midpoint-only candidate cos(2 pi k / n)
        Real ang = div(mul(Real::from_int(2 * k, wp), pi, wp), Real::from_int(n, wp), wp);
        Real z(wp);
        mpfr_set(z.mid_ref().get(), cos(ang, wp).mid(), MPFR_RNDN);
        Real cv = c.evaluate(z, wp);
        Real dv = dc.evaluate(z, wp);
        Mpfr dv_lo = abs(dv).lower();
        if (mpfr_sgn(dv_lo.get()) <= 0) return false;
        Mpfr rk(kRadPrec);
        mpfr_div(rk.get(), abs(cv).upper().get(), dv_lo.get(), MPFR_RNDU);
        mpfr_mul_si(rk.get(), rk.get(), m, MPFR_RNDU);
        centers.push_back(z);
        radii.push_back(std::move(rk));
    }
    if (static_cast<long>(centers.size()) != m) return false;
    // pairwise disjoint along the real axis (centers are sorted decreasing)
    for (long i = 0; i + 1 < m; ++i) {
        Mpfr gap(kRadPrec);
        mpfr_sub(gap.get(), centers[i].mid(), centers[i + 1].mid(), MPFR_RNDD);
        mpfr_abs(gap.get(), gap.get(), MPFR_RNDD);
        Mpfr rr(kRadPrec);
        mpfr_add(rr.get(), radii[i].get(), radii[i + 1].get(), MPFR_RNDU);
        if (mpfr_cmp(gap.get(), rr.get()) <= 0) return false;
    }
    // each |z| + r < 1
    for (long i = 0; i < m; ++i) {
        Mpfr t(kRadPrec);
        mpfr_abs(t.get(), centers[i].mid(), MPFR_RNDU);
        mpfr_add(t.get(), t.get(), radii[i].get(), MPFR_RNDU);
        if (mpfr_cmp_ui(t.get(), 1) >= 0) return false;
    }
    return true;
}

}  // namespace

std::vector<UnityRow> unity_experiment(long n_max, long height_cap, mpfr_prec_t prec) {
    if (n_max < 4) throw domain_error("unity_experiment: n_max >= 4");
    // smallest-prime-factor sieve for the totients
    std::vector<long> spf(n_max + 1, 0);
    for (long i = 2; i <= n_max; ++i) {
        if (spf[i] == 0)
            for (long j = i; j <= n_max; j += i)
                if (spf[j] == 0) spf[j] = i;
    }
    auto phi_of = [&](long n) {
        long phi = 1, m = n;
        while (m > 1) {
            long p = spf[m], pk = 1;
            while (m % p == 0) {
                m /= p;
                pk *= p;
            }
            phi *= pk / p * (p - 1);
        }
        return phi;
    };

    mpfr_prec_t wp = std::max<mpfr_prec_t>(prec, 128);
    std::vector<UnityRow> rows;
    rows.reserve(n_max - 3);
    for (long n = 4; n <= n_max; ++n) {
        UnityRow row;
        row.n = n;
        row.phi = phi_of(n);
        // phi(n) >= n^{1/40} (log n)^{-1/2} / 6, decided rigorously
        Real nn = Real::from_int(n, wp);
        Real ln = log(nn, wp);
        Real bound = div(pow(nn, Real::from_mpq(mpq_class(1, 40), wp), wp),
                         mul(Real::from_int(6, wp), sqrt(ln, wp), wp), wp);
        Real phir = Real::from_mpz(row.phi, wp);
        if (Real::certainly_le(bound, phir)) {
            row.corollary_ok = true;
        } else if (Real::certainly_lt(phir, bound)) {
            row.corollary_ok = false;
        } else {
            throw precision_error("unity_experiment: corollary inequality undecided");
        }
        row.bound_value = bound.upper_d();

        if (n <= height_cap) {
            row.height_checked = true;
            PolyQ c = cos_minimal_polynomial(n);
            row.minpoly_irreducible = cos_minpoly_irreducible(c, n);
            // all conjugates are cosines in (-1, 1): certify the root moduli,
            // then the Mahler measure equals |lc| and the height is
            // |lc|^(1/deg) <= 4  <=>  |lc| <= 4^deg, an exact integer check
            bool roots_inside;
            if (c.degree() == 1) {
                mpq_class root = mpq_class(-c.coeff(0) / c.coeff(1));
                roots_inside = ::abs(root) < 1;
            } else {
                roots_inside = cos_roots_inside_unit(c, n, wp);
            }
            mpz_class lc = c.leading().get_num();
            mpz_class four_deg;
            mpz_ui_pow_ui(four_deg.get_mpz_t(), 4, static_cast<unsigned long>(c.degree()));
            row.height_ok = row.minpoly_irreducible && roots_inside && lc <= four_deg;
        }
        rows.push_back(row);
    }
    return rows;
}

EllipticExperiment elliptic_experiment(const std::vector<mpq_class>& lambdas, long n_max,
                                       double delta1, double delta2, double delta3,
                                       mpfr_prec_t prec, int workers) {
    if (lambdas.empty()) throw domain_error("elliptic_experiment: empty lambda list");
    if (n_max < 2) throw domain_error("elliptic_experiment: n_max >= 2");
    // one job per (lambda, n); cells assembled in job order for determinism
    struct Job {
        mpq_class lam;
        long n;
        double hl;
        std::vector<EllipticCell> cells;
        long min_deg = 0;
    };
    std::vector<Job> jobs;
    for (const mpq_class& lam : lambdas) {
        double hl = std::log(weil_height(lam).get_d());
        for (long n = 2; n <= n_max; ++n) jobs.push_back({lam, n, hl, {}, 0});
    }
    parallel_for(workers, jobs.size(), [&](size_t ji) {
        Job& job = jobs[ji];
        std::optional<DegreeContext> dctx;
        for (const auto& [k, l] : primitive_orbit_reps(job.n)) {
            EllipticCell cell;
            cell.lambda = job.lam;
            cell.n = job.n;
            cell.k = k;
            cell.l = l;
            cell.bound_value =
                delta1 * std::pow(1.0 + job.hl, -delta2) * std::pow(double(job.n), delta3);
            try {
                if (!dctx) dctx = make_degree_context(job.lam, job.n, prec);
                TorsionDegree deg = match_degree(*dctx, k, l, prec);
                cell.degree_low = deg.degree_low;
                cell.degree_high = deg.degree_high;
                const PolyQ& mf = dctx->fac.factors[deg.matched_factor].first;
                if (deg.degree_low == 1) {
                    mpq_class root = mpq_class(-mf.coeff(0) / mf.coeff(1));
                    cell.h_abscissa = std::log(weil_height(root).get_d());
                } else {
                    cell.h_abscissa =
                        log(mahler_measure(mf, prec), prec).upper_d() / mf.degree();
                }
                cell.reps_u1 =
                    representatives_in_region({job.n, k, l}, TorsionRegion::U1_EDGE);
                cell.reps_u2 = representatives_in_region({job.n, k, l}, TorsionRegion::U2);
                cell.status = "ok";
                if (job.min_deg == 0 || cell.degree_low < job.min_deg)
                    job.min_deg = cell.degree_low;
            } catch (const precision_error&) {
                cell.status = "precision";
            } catch (const ambiguity_error&) {
                cell.status = "ambiguous";
            }
            job.cells.push_back(cell);
        }
    });
    EllipticExperiment out;
    std::vector<std::pair<double, double>> regression;
    for (const Job& job : jobs) {
        for (const EllipticCell& c : job.cells) out.cells.push_back(c);
        if (job.min_deg > 0 && job.n >= 3)
            regression.emplace_back(std::log(double(job.n)), std::log(double(job.min_deg)));
    }
    if (regression.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : regression) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        double k = static_cast<double>(regression.size());
        out.regression_exponent = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    }
    return out;
}

}  // namespace lab
