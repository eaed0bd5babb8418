#include "lab/elliptic.hpp"

#include <algorithm>
#include <cmath>

#include "lab/errors.hpp"

namespace lab {

namespace {

Real real_of(const mpq_class& q, mpfr_prec_t prec) { return Real::from_mpq(q, prec); }

Complex complex_of(long re, mpfr_prec_t prec) { return Complex(Real::from_int(re, prec)); }

// ------------------------------------------------------------ 2F1(1/2,1/2;1;z)

Complex hyp_direct(const Complex& z, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 16;
    double zhi = z.abs(64).upper_d();
    if (zhi >= 0.95) throw domain_error("hyp2f1: direct series requires |z| < 0.95");
    long N = static_cast<long>((wp + 16) * 0.6931 / -std::log(std::max(zhi, 1e-30))) + 2;
    if (N < 2) N = 2;
    Complex sum = complex_of(1, wp);
    Complex zn = complex_of(1, wp);
    mpq_class c(1);
    for (long n = 0; n < N; ++n) {
        c *= mpq_class(2 * n + 1) * mpq_class(2 * n + 1);
        c /= mpq_class(2 * n + 2) * mpq_class(2 * n + 2);
        zn = mul(zn, z, wp);
        sum = add(sum, mul(Complex(real_of(c, wp)), zn, wp), wp);
    }
    // tail: coefficients are <= 1, so |sum_{n>N} c_n z^n| <= |z|^{N+1}/(1-|z|)
    Real zh = z.abs(wp);
    Real tail = div(pow_si(zh, N + 1, wp), sub(Real::from_int(1, wp), zh, wp), wp);
    Real widen = abs(add(tail, Real(wp), wp));
    return add(sum, Complex(Real::with_rad(Real(wp), widen)), prec);
}

// F(1/2,1/2;1;1-w) for small |w|, logarithmic connection series:
//   (1/pi) sum c_n w^n (h_n - log w),  h_n = 4 log 2 + 2 H_n - 4 sum 1/(2k-1)
Complex hyp_log_near_one(const Complex& w, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 24;
    double whi = w.abs(64).upper_d();
    if (whi >= 0.95) throw domain_error("hyp2f1: log series requires |1-z| < 0.95");
    long N = static_cast<long>((wp + 16) * 0.6931 / -std::log(std::max(whi, 1e-30))) + 2;
    if (N < 2) N = 2;
    Complex lw = log(w, wp);
    Real log2 = log(Real::from_int(2, wp), wp);
    Complex four_log2(mul_2si(log2, 2));
    Complex sum(wp);
    Complex wn = complex_of(1, wp);
    mpq_class c(1), r(0);
    for (long n = 0; n < N; ++n) {
        if (n > 0) {
            c *= mpq_class(2 * n - 1) * mpq_class(2 * n - 1);
            c /= mpq_class(2 * n) * mpq_class(2 * n);
            r += mpq_class(2, n) - mpq_class(4, 2 * n - 1);
            wn = mul(wn, w, wp);
        }
        // h_n - log w = 4 log 2 + r_n - log w
        Complex hn = sub(add(four_log2, Complex(real_of(r, wp)), wp), lw, wp);
        sum = add(sum, mul(mul(Complex(real_of(c, wp)), wn, wp), hn, wp), wp);
    }
    // tail: 0 < h_n <= h_0 = 4 log 2, c_n <= 1
    Real wh = w.abs(wp);
    Real hbound = add(mul_2si(log2, 2), lw.abs(wp), wp);
    Real tail = mul(hbound,
                    div(pow_si(wh, N + 1, wp), sub(Real::from_int(1, wp), wh, wp), wp), wp);
    sum = add(sum, Complex(Real::with_rad(Real(wp), abs(tail))), wp);
    return div(sum, Complex(Real::pi(wp)), prec);
}

Complex hyp_half_rec(const Complex& z, mpfr_prec_t prec, int depth) {
    if (depth > 4) throw domain_error("hyp2f1: Landen recursion did not contract");
    if (z.abs(64).upper_d() <= 0.62) return hyp_direct(z, prec);
    Complex one = complex_of(1, prec + 16);
    Complex w = sub(one, z, prec + 16);
    if (w.abs(64).upper_d() <= 0.62) return hyp_log_near_one(w, prec);
    // descending Landen step: F(z) = (1+k1) F(k1^2), k1 = (1-k')/(1+k')
    Complex kp = sqrt(w, prec + 16);
    Complex k1 = div(sub(one, kp, prec + 16), add(one, kp, prec + 16), prec + 16);
    Complex k12 = mul(k1, k1, prec + 16);
    return mul(add(one, k1, prec + 16), hyp_half_rec(k12, prec + 16, depth + 1), prec);
}

}  // namespace

Complex hyp2f1_half(const Complex& z, mpfr_prec_t prec) { return hyp_half_rec(z, prec, 0); }

Lattice periods(const Complex& lambda, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 32;
    if (lambda.contains_zero()) throw domain_error("periods: lambda contains 0");
    Complex one = complex_of(1, wp);
    Complex oml = sub(one, lambda, wp);
    if (oml.contains_zero()) throw domain_error("periods: lambda contains 1");
    Real pi = Real::pi(wp);
    Complex w1 = mul(Complex(pi), hyp2f1_half(lambda, wp), wp);
    Complex w2 = mul_i(mul(Complex(pi), hyp2f1_half(oml, wp), wp));
    Complex tau = div(w2, w1, wp);
    // fundamental domain check, with ball slack
    Real re_abs = abs(tau.re());
    Real half = Real::from_mpq(mpq_class(1, 2), wp);
    if (Real::certainly_lt(half, re_abs))
        throw domain_error("periods: tau not fundamental (|Re tau| > 1/2)");
    Real mod = tau.abs(wp);
    if (Real::certainly_lt(mod, Real::from_int(1, wp)))
        throw domain_error("periods: tau not fundamental (|tau| < 1)");
    if (!tau.im().certainly_positive()) throw domain_error("periods: Im tau not positive");
    return {w1, w2, tau};
}

bool in_region_exact(const mpq_class& re, const mpq_class& im) {
    mpq_class n = re * re + im * im;
    mpq_class m = (1 - re) * (1 - re) + im * im;
    return n <= 1 && m <= 1 && re <= mpq_class(1, 2);
}

bool in_region_within_radius(const Complex& lam) {
    Real one = Real::from_int(1, lam.prec());
    Real half = Real::from_mpq(mpq_class(1, 2), lam.prec());
    if (Real::certainly_lt(one, lam.abs())) return false;
    Complex oml = sub(Complex(one), lam, lam.prec());
    if (Real::certainly_lt(one, oml.abs())) return false;
    if (Real::certainly_lt(half, lam.re())) return false;
    return true;
}

namespace {

struct OrbitClassInfo {
    ScalingClass cls;
    bool eps_i;
};

// member index -> (class, epsilon) for the reduction table:
//   0: rep = l'          identity, eps=1
//   1: rep = 1-l'        identity, eps=i
//   2: rep = 1/l'        sqrt(lambda), eps=1
//   3: rep = 1/(1-l')    sqrt(lambda), eps=i
//   4: rep = l'/(l'-1)   sqrt(1-lambda), eps=1
//   5: rep = (l'-1)/l'   sqrt(1-lambda), eps=i
constexpr OrbitClassInfo kOrbitClass[6] = {
    {ScalingClass::IDENTITY, false},       {ScalingClass::IDENTITY, true},
    {ScalingClass::SQRT_LAMBDA, false},    {ScalingClass::SQRT_LAMBDA, true},
    {ScalingClass::SQRT_ONE_MINUS_LAMBDA, false},
    {ScalingClass::SQRT_ONE_MINUS_LAMBDA, true},
};

struct QC {
    mpq_class re, im;
};

QC qc_sub(const QC& a, const QC& b) { return {a.re - b.re, a.im - b.im}; }
QC qc_div(const QC& a, const QC& b) {
    mpq_class n = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}

}  // namespace

FundamentalOrbit reduce_lambda_exact(const mpq_class& re, const mpq_class& im,
                                     mpfr_prec_t prec) {
    QC l{re, im};
    l.re.canonicalize();
    l.im.canonicalize();
    if ((l.re == 0 && l.im == 0) || (l.re == 1 && l.im == 0))
        throw domain_error("reduce_lambda: lambda' in {0,1}");
    QC one{1, 0};
    QC members[6] = {
        l,
        qc_sub(one, l),
        qc_div(one, l),
        qc_div(one, qc_sub(one, l)),
        qc_div(l, qc_sub(l, one)),
        qc_div(qc_sub(l, one), l),
    };
    int best = -1;
    mpq_class best_norm;
    bool tie = false;
    for (int i = 0; i < 6; ++i) {
        const QC& m = members[i];
        if (!in_region_exact(m.re, m.im)) continue;
        mpq_class norm = m.re * m.re + m.im * m.im;
        if (best < 0) {
            best = i;
            best_norm = norm;
            continue;
        }
        if (norm < best_norm) {
            best = i;
            best_norm = norm;
            tie = false;
        } else if (norm == best_norm &&
                   !(members[best].re == m.re && members[best].im == m.im)) {
            // distinct representatives of equal modulus: lexicographic pick
            tie = true;
            if (m.re < members[best].re ||
                (m.re == members[best].re && m.im < members[best].im)) {
                best = i;
                best_norm = norm;
            }
        }
    }
    if (best < 0) throw error("reduce_lambda: no orbit member in the fundamental region");
    FundamentalOrbit out;
    out.lambda_input = Complex::from_mpq(re, im, prec);
    out.lambda_rep = Complex::from_mpq(members[best].re, members[best].im, prec);
    out.lambda_rep_exact = std::make_pair(members[best].re, members[best].im);
    out.scaling_class = kOrbitClass[best].cls;
    out.epsilon_is_i = kOrbitClass[best].eps_i;
    out.orbit_index = best;
    out.tie_flagged = tie;
    return out;
}

FundamentalOrbit reduce_lambda(const Complex& lambda_prime, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 16;
    if (lambda_prime.contains_zero())
        throw domain_error("reduce_lambda: lambda' ball contains 0");
    Complex one = complex_of(1, wp);
    Complex lm1 = sub(lambda_prime, one, wp);
    if (lm1.contains_zero()) throw domain_error("reduce_lambda: lambda' ball contains 1");

    Complex members[6] = {
        lambda_prime,
        sub(one, lambda_prime, wp),
        div(one, lambda_prime, wp),
        div(one, sub(one, lambda_prime, wp), wp),
        div(lambda_prime, lm1, wp),
        div(lm1, lambda_prime, wp),
    };
    int best = -1;
    bool tie = false;
    Mpfr best_norm(kRadPrec);
    for (int i = 0; i < 6; ++i) {
        if (!in_region_within_radius(members[i])) continue;
        Mpfr norm(kRadPrec);
        mpfr_hypot(norm.get(), members[i].re_mid(), members[i].im_mid(), MPFR_RNDN);
        if (best < 0 || mpfr_cmp(norm.get(), best_norm.get()) < 0) {
            best = i;
            mpfr_set(best_norm.get(), norm.get(), MPFR_RNDN);
        } else if (best >= 0 && mpfr_equal_p(norm.get(), best_norm.get()) &&
                   !(mpfr_equal_p(members[i].re_mid(), members[best].re_mid()) &&
                     mpfr_equal_p(members[i].im_mid(), members[best].im_mid()))) {
            tie = true;
        }
    }
    if (best < 0)
        throw precision_error("reduce_lambda: no member certifiably in the region");
    FundamentalOrbit out;
    out.lambda_input = lambda_prime;
    out.lambda_rep = members[best];
    out.scaling_class = kOrbitClass[best].cls;
    out.epsilon_is_i = kOrbitClass[best].eps_i;
    out.orbit_index = best;
    out.tie_flagged = tie;
    return out;
}

Complex orbit_scale(const FundamentalOrbit& orbit, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 16;
    Complex s = complex_of(1, wp);
    if (orbit.scaling_class == ScalingClass::SQRT_LAMBDA) {
        s = sqrt(orbit.lambda_rep, wp);
    } else if (orbit.scaling_class == ScalingClass::SQRT_ONE_MINUS_LAMBDA) {
        s = sqrt(sub(complex_of(1, wp), orbit.lambda_rep, wp), wp);
    }
    if (orbit.epsilon_is_i) s = mul_i(s);
    return s;
}

// ------------------------------------------------------------------ wp

namespace {

struct CellPoint {
    Complex z_red;
    Real b1, b2;  // z_red = b1 w1 + b2 w2, b2 midpoint in [0, 1/2]
};

long round_to_long(const Real& x) {
    double d = x.mid_d();
    if (!(std::fabs(d) < 1e12)) throw domain_error("lattice reduction: coordinate too large");
    return std::lround(d);
}

CellPoint reduce_to_cell(const Complex& z, const Lattice& L, mpfr_prec_t prec, bool fold) {
    mpfr_prec_t wp = prec + 16;
    Real x1 = L.omega1.re(), y1 = L.omega1.im();
    Real x2 = L.omega2.re(), y2 = L.omega2.im();
    Real det = sub(mul(x1, y2, wp), mul(y1, x2, wp), wp);
    Real b1 = div(sub(mul(z.re(), y2, wp), mul(z.im(), x2, wp), wp), det, wp);
    Real b2 = div(sub(mul(x1, z.im(), wp), mul(y1, z.re(), wp), wp), det, wp);
    long k1 = round_to_long(b1), k2 = round_to_long(b2);
    Complex shift = add(mul(Complex(Real::from_int(k1, wp)), L.omega1, wp),
                        mul(Complex(Real::from_int(k2, wp)), L.omega2, wp), wp);
    Complex zr = sub(z, shift, wp);
    b1 = sub(b1, Real::from_int(k1, wp), wp);
    b2 = sub(b2, Real::from_int(k2, wp), wp);
    if (fold && mpfr_sgn(b2.mid()) < 0) {
        zr = neg(zr);
        b1 = neg(b1);
        b2 = neg(b2);
    }
    return {zr, b1, b2};
}

}  // namespace

Complex wp(const Complex& z, const Lattice& L, mpfr_prec_t prec) {
    mpfr_prec_t wp_ = prec + 32;
    CellPoint cp = reduce_to_cell(z, L, wp_, true);

    Complex two_pi_i = mul_i(Complex(mul_2si(Real::pi(wp_), 1)));
    Complex q = exp(mul(two_pi_i, L.tau, wp_), wp_);
    Complex t = div(cp.z_red, L.omega1, wp_);
    Complex u = exp(mul(two_pi_i, t, wp_), wp_);

    double q0 = q.abs(64).upper_d();
    if (!(q0 < 0.2)) throw domain_error("wp: |q| too large; tau not fundamental?");
    double b2hi = std::min(abs(cp.b2).upper_d(), 0.75);
    long N = static_cast<long>((wp_ + 16) * 0.6931 / (-std::log(q0) * (1.0 - b2hi)) ) + 3;
    if (N < 3) N = 3;
    if (N > 20000) throw precision_error("wp: series too long");

    Complex one = complex_of(1, wp_);
    auto frac_term = [&](const Complex& x) {  // x/(1-x)^2
        Complex d = sub(one, x, wp_);
        try {
            return div(x, mul(d, d, wp_), wp_);
        } catch (const pole_error&) {
            throw pole_error("wp: z lies on the lattice");
        }
    };

    Complex S = add(Complex(Real::from_mpq(mpq_class(1, 12), wp_)), frac_term(u), wp_);
    Complex qn = one;
    Complex uinv = recip(u, wp_);
    for (long n = 1; n <= N; ++n) {
        qn = mul(qn, q, wp_);
        Complex t1 = frac_term(mul(qn, u, wp_));
        Complex t2 = frac_term(mul(qn, uinv, wp_));
        Complex d = sub(one, qn, wp_);
        Complex t3 = div(qn, mul(d, d, wp_), wp_);
        S = add(S, sub(add(t1, t2, wp_), add(t3, t3, wp_), wp_), wp_);
    }
    // geometric tail: 4 q0^(N+1-b2hi) / (1-q0^(2/5))^2 / (1-q0)
    Real q0r = q.abs(wp_);
    Real tail = mul(Real::from_int(4, wp_),
                    pow(q0r, sub(Real::from_int(N + 1, wp_), abs(cp.b2), wp_), wp_), wp_);
    Real den1 = sub(Real::from_int(1, wp_),
                    pow(q0r, Real::from_mpq(mpq_class(2, 5), wp_), wp_), wp_);
    tail = div(tail, mul(mul(den1, den1, wp_), sub(Real::from_int(1, wp_), q0r, wp_), wp_), wp_);
    S = add(S, Complex(Real::with_rad(Real(wp_), abs(tail))), wp_);

    // wp = (2 pi i / w1)^2 S = -4 pi^2 S / w1^2
    Complex w1sq = mul(L.omega1, L.omega1, wp_);
    Complex factor = div(Complex(mul_2si(mul(Real::pi(wp_), Real::pi(wp_), wp_), 2)), w1sq, wp_);
    return neg(mul(factor, S, prec));
}

Complex wp_half_omega2(const Lattice& L, mpfr_prec_t prec) {
    Complex half_w2 = Complex(Real::from_mpq(mpq_class(1, 2), prec + 16)) * L.omega2;
    return wp(half_w2, L, prec);
}

Complex x_lambda(const Complex& z, const Complex& lambda, const Lattice& L, mpfr_prec_t prec) {
    mpfr_prec_t wp_ = prec + 16;
    Complex p = wp(z, L, wp_);
    Complex third = div(add(lambda, complex_of(1, wp_), wp_),
                        complex_of(3, wp_), wp_);
    Complex form1 = add(p, third, wp_);
    Complex form2 = sub(p, wp_half_omega2(L, wp_), wp_);
    if (!Complex::overlaps(form1, form2))
        throw error("x_lambda: the two defining forms disagree");
    // both enclose the value; return the tighter one
    return mpfr_cmp(form1.rad(), form2.rad()) <= 0 ? add(form1, Complex(prec), prec)
                                                   : add(form2, Complex(prec), prec);
}

Real lattice_distance(const Complex& z, const Lattice& L, mpfr_prec_t prec) {
    mpfr_prec_t wp_ = prec + 16;
    CellPoint cp = reduce_to_cell(z, L, wp_, false);
    Real best(wp_);
    bool first = true;
    for (int m = -2; m <= 2; ++m) {
        for (int n = -2; n <= 2; ++n) {
            Complex w = add(mul(Complex(Real::from_int(m, wp_)), L.omega1, wp_),
                            mul(Complex(Real::from_int(n, wp_)), L.omega2, wp_), wp_);
            Real d = sub(cp.z_red, w, wp_).abs(wp_);
            best = first ? d : min(best, d, wp_);
            first = false;
        }
    }
    return add(best, Real(prec), prec);
}

OrbitContext make_context(const FundamentalOrbit& orbit, mpfr_prec_t prec) {
    Lattice L = periods(orbit.lambda_rep, prec);
    Complex e2 = wp_half_omega2(L, prec);
    return {orbit, orbit.lambda_rep, L, e2, prec};
}

Complex x_lambda_ctx(const Complex& z, const OrbitContext& ctx, mpfr_prec_t prec) {
    mpfr_prec_t wp_ = prec + 16;
    Complex p = wp(z, ctx.L, wp_);
    Complex third = div(add(ctx.lambda, complex_of(1, wp_), wp_), complex_of(3, wp_), wp_);
    Complex form1 = add(p, third, wp_);
    Complex form2 = sub(p, ctx.e2, wp_);
    if (!Complex::overlaps(form1, form2))
        throw error("x_lambda: the two defining forms disagree");
    return mpfr_cmp(form1.rad(), form2.rad()) <= 0 ? add(form1, Complex(prec), prec)
                                                   : add(form2, Complex(prec), prec);
}

Complex f_lambda_prime(const Real& b1, const Real& b2, const OrbitContext& ctx,
                       mpfr_prec_t prec) {
    mpfr_prec_t wp_ = prec + 16;
    if (b1.contains_zero() && b2.contains_zero())
        throw domain_error("f_lambda_prime: (b1,b2) = (0,0) excluded");
    const bool u2_branch = ctx.orbit.scaling_class == ScalingClass::SQRT_LAMBDA;
    if (u2_branch) {
        Real lim = Real::from_mpq(mpq_class(29, 60), wp_);
        if (Real::certainly_lt(lim, abs(b1)) || Real::certainly_lt(lim, abs(b2)))
            throw domain_error("f_lambda_prime: (b1,b2) outside U2");
    } else {
        Real lo = Real::from_mpq(mpq_class(1, 30), wp_);
        Real hi = Real::from_mpq(mpq_class(29, 30), wp_);
        bool in_band = !(Real::certainly_lt(b2, lo) || Real::certainly_lt(hi, b2));
        bool on_edge = b2.contains_zero() && b1.certainly_positive() &&
                       Real::certainly_lt(b1, Real::from_int(1, wp_));
        if (!in_band && !on_edge)
            throw domain_error("f_lambda_prime: (b1,b2) outside U1 and its edge");
    }
    Complex z = add(mul(Complex(b1), ctx.L.omega1, wp_), mul(Complex(b2), ctx.L.omega2, wp_),
                    wp_);
    Complex x = x_lambda_ctx(z, ctx, wp_);
    if (!u2_branch) return add(x, Complex(prec), prec);
    if (x.contains_zero()) throw pole_error("f_lambda_prime: X_lambda vanishes on the ball");
    return div(ctx.lambda, x, prec);
}

// --------------------------------------------------------------- sampling

std::vector<std::pair<mpq_class, mpq_class>> sample_unit_square(int count) {
    // R2 low-discrepancy sequence with dyadic generators (exact rationals)
    const long denom = 1L << 30;
    std::vector<std::pair<mpq_class, mpq_class>> out;
    mpq_class a1(static_cast<long>(0.7548776662466927 * denom), denom);
    mpq_class a2(static_cast<long>(0.5698402909980532 * denom), denom);
    a1.canonicalize();
    a2.canonicalize();
    mpq_class x(0), y(0);
    for (int i = 0; i < count; ++i) {
        x += a1;
        if (x >= 1) x -= 1;
        y += a2;
        if (y >= 1) y -= 1;
        out.emplace_back(x, y);
    }
    return out;
}

std::vector<std::pair<mpq_class, mpq_class>> region_grid_20() {
    std::vector<std::pair<mpq_class, mpq_class>> out;
    mpq_class margin(92, 100);
    for (long k = 1; k <= 10 && out.size() < 20; ++k) {
        for (long j = 0; j <= 8 && out.size() < 20; ++j) {
            for (int s = 0; s < (j == 0 ? 1 : 2) && out.size() < 20; ++s) {
                mpq_class re(k, 20), im(j, 10);
                if (s == 1) im = -im;
                mpq_class n = re * re + im * im;
                mpq_class m = (1 - re) * (1 - re) + im * im;
                if (n <= margin && m <= margin && re <= mpq_class(1, 2) &&
                    n >= mpq_class(1, 400))
                    out.emplace_back(re, im);
            }
        }
    }
    return out;
}

// --------------------------------------------------------------- verifiers

UpperLemmaReport verify_upper_lemma(const Lattice& L, int samples, mpfr_prec_t prec) {
    if (samples < 1) throw domain_error("verify_upper_lemma: samples >= 1");
    mpfr_prec_t wp_ = prec + 16;
    Complex e2 = wp_half_omega2(L, wp_);
    Real cutoff = mul(Real::from_mpq(mpq_class(1, 1000000), wp_), L.omega1.abs(wp_), wp_);
    UpperLemmaReport rep;
    auto probe = [&](const mpq_class& s, const mpq_class& t) {
        Complex z = add(mul(Complex(real_of(s, wp_)), L.omega1, wp_),
                        mul(Complex(real_of(t, wp_)), L.omega2, wp_), wp_);
        Real d = lattice_distance(z, L, wp_);
        if (!Real::certainly_lt(cutoff, d)) {
            ++rep.excluded_near_pole;
            return;
        }
        Real ratio = mul(sub(wp(z, L, wp_), e2, wp_).abs(wp_), mul(d, d, wp_), wp_);
        rep.max_ratio = std::max(rep.max_ratio, ratio.upper_d());
        ++rep.samples_used;
    };
    for (const auto& [s, t] : sample_unit_square(samples)) probe(s, t);
    // adversarial near-pole probes at distance about 1e-3 |w1|
    probe(mpq_class(1, 1000), mpq_class(0));
    probe(mpq_class(0), mpq_class(1, 1000));
    probe(mpq_class(1, 1000), mpq_class(1, 1000));
    return rep;
}

LowerLemmaReport verify_lower_lemma(const Complex& lambda, const mpq_class& eps, int samples,
                                    mpfr_prec_t prec) {
    if (!(eps > 0 && eps < mpq_class(1, 2)))
        throw domain_error("verify_lower_lemma: eps in (0, 1/2)");
    mpfr_prec_t wp_ = prec + 16;
    Lattice L = periods(lambda, wp_);
    Real pi = Real::pi(wp_);
    Real imtau = L.tau.im();
    Real decay = exp(neg(mul(pi, imtau, wp_)), wp_);
    LowerLemmaReport rep;
    rep.lambda_exp_ratio =
        mul(lambda.abs(wp_), exp(mul(pi, imtau, wp_), wp_), wp_).upper_d();
    mpq_class halfw = mpq_class(1, 2) - eps;
    for (const auto& [s, t] : sample_unit_square(samples)) {
        mpq_class t1 = s - mpq_class(1, 2);
        mpq_class t2 = (2 * t - 1) * halfw;
        if (t1 == 0 && t2 == 0) continue;
        Complex z = add(mul(Complex(real_of(t1, wp_)), L.omega1, wp_),
                        mul(Complex(real_of(t2, wp_)), L.omega2, wp_), wp_);
        Real d = lattice_distance(z, L, wp_);
        if (!d.certainly_positive()) continue;
        try {
            Complex x = x_lambda(z, lambda, L, wp_);
            if (x.contains_zero()) continue;
            Real prod = mul(recip(x, wp_).abs(wp_), decay, wp_);
            rep.max_product = std::max(rep.max_product, prod.upper_d());
            ++rep.samples_used;
        } catch (const pole_error&) {
            continue;
        }
    }
    return rep;
}

DistanceLemmaReport verify_distance_lemma(const Complex& lambda, int samples,
                                          mpfr_prec_t prec) {
    mpfr_prec_t wp_ = prec + 16;
    Lattice L = periods(lambda, wp_);
    Real w2abs = L.omega2.abs(wp_);
    Real rhs = div(w2abs, Real::from_int(60, wp_), wp_);
    DistanceLemmaReport rep;
    rep.holds = true;
    rep.worst_margin = 1e300;
    std::vector<std::pair<mpq_class, mpq_class>> pts = sample_unit_square(samples);
    for (const auto& c : {std::pair<mpq_class, mpq_class>{0, 0},
                          {1, 0},
                          {mpq_class(1, 2), 0},
                          {0, 1},
                          {1, 1},
                          {mpq_class(1, 2), 1}})
        pts.push_back(c);
    for (const auto& [s, t] : pts) {
        mpq_class b1 = s;
        mpq_class b2 = mpq_class(1, 30) + t * mpq_class(28, 30);
        Complex z = add(mul(Complex(real_of(b1, wp_)), L.omega1, wp_),
                        mul(Complex(real_of(b2, wp_)), L.omega2, wp_), wp_);
        Real margin = div(sub(lattice_distance(z, L, wp_), rhs, wp_), w2abs, wp_);
        if (margin.certainly_negative()) {
            rep.holds = false;
            rep.worst_margin = margin.upper_d();
            rep.witness_b1 = b1;
            rep.witness_b2 = b2;
            return rep;
        }
        if (!margin.certainly_nonnegative()) {
            // one escalation, then give up
            Real m2 = div(sub(lattice_distance(z, periods(lambda, 2 * wp_), 2 * wp_), rhs,
                              2 * wp_),
                          w2abs, 2 * wp_);
            if (!m2.certainly_nonnegative())
                throw precision_error("verify_distance_lemma: margin undecidable");
            margin = m2;
        }
        rep.worst_margin = std::min(rep.worst_margin, margin.lower_d());
    }
    return rep;
}

DerivativeBoundsReport derivative_bounds(const OrbitContext& ctx, int n_max, mpfr_prec_t prec) {
    if (n_max < 1 || n_max > 20) throw domain_error("derivative_bounds: 1 <= n_max <= 20");
    mpfr_prec_t wp_ = prec + 16;
    const bool u2_branch = ctx.orbit.scaling_class == ScalingClass::SQRT_LAMBDA;
    const Lattice& L = ctx.L;
    Real w2abs = L.omega2.abs(wp_);
    Complex half_w2 = mul(Complex(Real::from_mpq(mpq_class(1, 2), wp_)), L.omega2, wp_);

    // grid: low-discrepancy interior points plus corners
    std::vector<std::pair<mpq_class, mpq_class>> grid = sample_unit_square(24);
    grid.insert(grid.end(), {{mpq_class(1, 97), mpq_class(1, 89)},
                             {mpq_class(96, 97), mpq_class(88, 89)},
                             {mpq_class(1, 2), mpq_class(1, 2)}});

    struct Probe {
        Real scaled_rho;  // |w2|/rho for the U1 branch, 1/rho on U2
        Real m_sup;       // sup|f| on the Cauchy circle
    };
    std::vector<Probe> probes;
    const int K = 32;  // sectors per circle

    for (const auto& [s, t] : grid) {
        mpq_class b1, b2;
        if (u2_branch) {
            b1 = (2 * s - 1) * mpq_class(29, 60);
            b2 = (2 * t - 1) * mpq_class(29, 60);
        } else {
            b1 = s;
            b2 = mpq_class(1, 30) + t * mpq_class(28, 30);
        }
        Complex z = add(mul(Complex(real_of(b1, wp_)), L.omega1, wp_),
                        mul(Complex(real_of(b2, wp_)), L.omega2, wp_), wp_);
        // distance to the singularities of the branch
        Real dist = u2_branch ? lattice_distance(sub(z, half_w2, wp_), L, wp_)
                              : lattice_distance(z, L, wp_);
        if (!dist.certainly_positive()) continue;
        // exact dyadic rho <= dist/2
        Mpfr rho_lo = mul_2si(dist, -1).lower();
        Real rho(wp_);
        mpfr_set(rho.mid_ref().get(), rho_lo.get(), MPFR_RNDD);
        if (!rho.certainly_positive()) continue;

        Real pi = Real::pi(wp_);
        Real msup(wp_);
        bool ok = true;
        for (int k = 0; k < K && ok; ++k) {
            Real theta_mid = div(mul(Real::from_int(2 * k + 1, wp_), pi, wp_),
                                 Real::from_int(K, wp_), wp_);
            Real theta = Real::with_rad(theta_mid, div(pi, Real::from_int(K, wp_), wp_));
            Complex dir(cos(theta, wp_), sin(theta, wp_));
            Complex w = add(z, mul(Complex(rho), dir, wp_), wp_);
            try {
                Complex x = x_lambda_ctx(w, ctx, wp_);
                Complex fv = u2_branch ? div(ctx.lambda, x, wp_) : x;
                msup = max(msup, fv.abs(wp_), wp_);
            } catch (const pole_error&) {
                ok = false;
            }
        }
        if (!ok) continue;
        Real scaled = u2_branch ? div(Real::from_int(1, wp_), rho, wp_)
                                : div(w2abs, rho, wp_);
        probes.push_back({scaled, msup});
    }
    if (probes.empty()) throw error("derivative_bounds: no usable grid points");

    DerivativeBoundsReport rep;
    for (int n = 1; n <= n_max; ++n) {
        double best = 0;
        for (const auto& p : probes)
            best = std::max(best, mul(pow_si(p.scaled_rho, n, wp_), p.m_sup, wp_).upper_d());
        rep.per_n.push_back(best);
    }
    // least squares fit of log per_n = log A1 + n log A2
    int n = n_max;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 1; i <= n; ++i) {
        double y = std::log(std::max(rep.per_n[i - 1], 1e-300));
        sx += i;
        sy += y;
        sxx += static_cast<double>(i) * i;
        sxy += i * y;
    }
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.a2_fit = std::exp(slope);
    double a1 = 0;
    for (int i = 1; i <= n; ++i)
        a1 = std::max(a1, rep.per_n[i - 1] / std::pow(rep.a2_fit, i));
    rep.a1_fit = a1;
    rep.growth_ok = std::isfinite(rep.a1_fit) && std::isfinite(rep.a2_fit) && rep.a2_fit > 0;
    return rep;
}

MildPoint mild_map(const OrbitContext& ctx, const mpq_class& t1, const mpq_class& t2,
                   long T_int, mpfr_prec_t prec) {
    if (t1 < 0 || t1 > 1 || t2 < 0 || t2 > 1)
        throw domain_error("mild_map: (t1,t2) must lie in the unit square");
    if (T_int < 1) throw domain_error("mild_map: T must be a positive integer");
    mpfr_prec_t wp_ = prec + 16;
    mpq_class b2 = mpq_class(1, 30) + t2 * mpq_class(28, 30);
    Complex f = f_lambda_prime(real_of(t1, wp_), real_of(b2, wp_), ctx, wp_);
    Real T = Real::from_int(T_int, wp_);
    if (Real::certainly_lt(T, f.abs(wp_)))
        throw domain_error("mild_map: T smaller than |f| at the sample");
    MildPoint out{{real_of(t1, prec), real_of(b2, prec), div(f.re(), T, prec),
                   div(f.im(), T, prec)}};
    return out;
}

}  // namespace lab
