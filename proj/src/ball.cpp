#include "lab/ball.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>

#include "lab/errors.hpp"

namespace lab {

namespace {

std::atomic<mpfr_prec_t> g_default_prec{256};

// Upper bound for the rounding error of a round-to-nearest midpoint
// operation, derived from the MPFR ternary value: one ulp of the result.
void add_rounding_slop(Mpfr& rad, mpfr_srcptr mid, int ternary) {
    if (ternary == 0) return;
    if (mpfr_zero_p(mid) || !mpfr_number_p(mid))
        throw error("ball: inexact zero/non-finite midpoint");
    mpfr_exp_t e = mpfr_get_exp(mid);
    mpfr_prec_t p = mpfr_get_prec(mid);
    Mpfr ulp(kRadPrec);
    mpfr_set_ui_2exp(ulp.get(), 1, e - p, MPFR_RNDU);
    mpfr_add(rad.get(), rad.get(), ulp.get(), MPFR_RNDU);
}

// rad += x (upward)
void rad_acc(Mpfr& rad, mpfr_srcptr x) { mpfr_add(rad.get(), rad.get(), x, MPFR_RNDU); }

// |m| rounded up into a kRadPrec number
Mpfr abs_up(mpfr_srcptr m) {
    Mpfr r(kRadPrec);
    mpfr_abs(r.get(), m, MPFR_RNDU);
    return r;
}

void check_finite(const Real& x) {
    if (!mpfr_number_p(x.mid()) || !mpfr_number_p(x.rad()))
        throw error("ball: non-finite value");
}

}  // namespace

mpfr_prec_t default_prec() { return g_default_prec.load(); }
void set_default_prec(mpfr_prec_t prec) {
    if (prec < 8 || prec > (1 << 24)) throw domain_error("default_prec out of range");
    g_default_prec.store(prec);
}

// ---------------------------------------------------------------- Real

Real Real::from_int(long v, mpfr_prec_t prec) {
    Real r(prec);
    int t = mpfr_set_si(r.mid_.get(), v, MPFR_RNDN);
    add_rounding_slop(r.rad_, r.mid(), t);
    return r;
}

Real Real::from_mpz(const mpz_class& v, mpfr_prec_t prec) {
    Real r(prec);
    int t = mpfr_set_z(r.mid_.get(), v.get_mpz_t(), MPFR_RNDN);
    add_rounding_slop(r.rad_, r.mid(), t);
    return r;
}

Real Real::from_mpq(const mpq_class& v, mpfr_prec_t prec) {
    Real r(prec);
    int t = mpfr_set_q(r.mid_.get(), v.get_mpq_t(), MPFR_RNDN);
    add_rounding_slop(r.rad_, r.mid(), t);
    return r;
}

Real Real::from_double(double v, mpfr_prec_t prec) {
    Real r(prec);
    mpfr_set_d(r.mid_.get(), v, MPFR_RNDN);  // exact: prec >= 53
    return r;
}

Real Real::with_rad(const Real& mid, const Real& rad) {
    Real r = mid;
    Mpfr up(kRadPrec);
    mpfr_add(up.get(), rad.mid(), rad.rad(), MPFR_RNDU);
    if (mpfr_sgn(up.get()) < 0) throw domain_error("with_rad: negative radius");
    rad_acc(r.rad_, up.get());
    return r;
}

Real Real::pi(mpfr_prec_t prec) {
    Real r(prec);
    int t = mpfr_const_pi(r.mid_.get(), MPFR_RNDN);
    add_rounding_slop(r.rad_, r.mid(), t);
    return r;
}

Real Real::euler_e(mpfr_prec_t prec) {
    Real one = Real::from_int(1, prec);
    return lab::exp(one, prec);
}

Mpfr Real::lower() const {
    Mpfr lo(prec());
    mpfr_sub(lo.get(), mid(), rad(), MPFR_RNDD);
    return lo;
}

Mpfr Real::upper() const {
    Mpfr hi(prec());
    mpfr_add(hi.get(), mid(), rad(), MPFR_RNDU);
    return hi;
}

double Real::lower_d() const {
    Mpfr lo = lower();
    return mpfr_get_d(lo.get(), MPFR_RNDD);
}

double Real::upper_d() const {
    Mpfr hi = upper();
    return mpfr_get_d(hi.get(), MPFR_RNDU);
}

namespace {

// exact rational value of an mpfr number (finite)
mpq_class mpfr_to_q(mpfr_srcptr x) {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), x);
    return q;
}

}  // namespace

bool Real::contains_zero() const {
    // exact: |mid| <= rad in rational arithmetic
    mpq_class m = mpfr_to_q(mid()), r = mpfr_to_q(rad());
    return ::abs(m) <= r;
}

bool Real::contains(const mpq_class& q) const {
    // exact: |mid - q| <= rad in rational arithmetic
    mpq_class d = mpfr_to_q(mid()) - q;
    return ::abs(d) <= mpfr_to_q(rad());
}

bool Real::certainly_positive() const { return mpfr_sgn(lower().get()) > 0; }
bool Real::certainly_negative() const { return mpfr_sgn(upper().get()) < 0; }
bool Real::certainly_nonnegative() const { return mpfr_sgn(lower().get()) >= 0; }

bool Real::certainly_lt(const Real& a, const Real& b) {
    return mpfr_cmp(a.upper().get(), b.lower().get()) < 0;
}
bool Real::certainly_le(const Real& a, const Real& b) {
    return mpfr_cmp(a.upper().get(), b.lower().get()) <= 0;
}
bool Real::overlaps(const Real& a, const Real& b) {
    return !(certainly_lt(a, b) || certainly_lt(b, a));
}

std::optional<mpz_class> Real::floor_exact() const {
    Mpfr flo(prec()), fhi(prec());
    mpfr_floor(flo.get(), lower().get());
    mpfr_floor(fhi.get(), upper().get());
    if (!mpfr_equal_p(flo.get(), fhi.get())) return std::nullopt;
    mpz_class z;
    mpfr_get_z(z.get_mpz_t(), flo.get(), MPFR_RNDN);
    return z;
}

std::string Real::str(int digits) const {
    return "[" + mid_.str(digits) + " +/- " + rad_.str(3) + "]";
}

Real add(const Real& a, const Real& b, mpfr_prec_t prec) {
    Real r(prec);
    int t = mpfr_add(r.mid_ref().get(), a.mid(), b.mid(), MPFR_RNDN);
    mpfr_add(r.rad_ref().get(), a.rad(), b.rad(), MPFR_RNDU);
    add_rounding_slop(r.rad_ref(), r.mid(), t);
    check_finite(r);
    return r;
}

Real sub(const Real& a, const Real& b, mpfr_prec_t prec) {
    Real r(prec);
    int t = mpfr_sub(r.mid_ref().get(), a.mid(), b.mid(), MPFR_RNDN);
    mpfr_add(r.rad_ref().get(), a.rad(), b.rad(), MPFR_RNDU);
    add_rounding_slop(r.rad_ref(), r.mid(), t);
    check_finite(r);
    return r;
}

Real mul(const Real& a, const Real& b, mpfr_prec_t prec) {
    Real r(prec);
    int t = mpfr_mul(r.mid_ref().get(), a.mid(), b.mid(), MPFR_RNDN);
    // |a||rb| + |b||ra| + ra rb
    Mpfr am = abs_up(a.mid()), bm = abs_up(b.mid()), tmp(kRadPrec);
    mpfr_mul(tmp.get(), am.get(), b.rad(), MPFR_RNDU);
    rad_acc(r.rad_ref(), tmp.get());
    mpfr_mul(tmp.get(), bm.get(), a.rad(), MPFR_RNDU);
    rad_acc(r.rad_ref(), tmp.get());
    mpfr_mul(tmp.get(), a.rad(), b.rad(), MPFR_RNDU);
    rad_acc(r.rad_ref(), tmp.get());
    add_rounding_slop(r.rad_ref(), r.mid(), t);
    check_finite(r);
    return r;
}

Real div(const Real& a, const Real& b, mpfr_prec_t prec) {
    Mpfr bm = abs_up(b.mid());
    Mpfr gap(kRadPrec);
    mpfr_sub(gap.get(), bm.get(), b.rad(), MPFR_RNDD);
    if (mpfr_sgn(gap.get()) <= 0) throw pole_error("real div: divisor ball contains zero");
    Real r(prec);
    int t = mpfr_div(r.mid_ref().get(), a.mid(), b.mid(), MPFR_RNDN);
    // (ra |bm| + |am| rb) / (|bm| (|bm| - rb))
    Mpfr am = abs_up(a.mid()), num(kRadPrec), den(kRadPrec), tmp(kRadPrec);
    mpfr_mul(num.get(), a.rad(), bm.get(), MPFR_RNDU);
    mpfr_mul(tmp.get(), am.get(), b.rad(), MPFR_RNDU);
    mpfr_add(num.get(), num.get(), tmp.get(), MPFR_RNDU);
    mpfr_mul(den.get(), bm.get(), gap.get(), MPFR_RNDD);
    mpfr_div(tmp.get(), num.get(), den.get(), MPFR_RNDU);
    rad_acc(r.rad_ref(), tmp.get());
    add_rounding_slop(r.rad_ref(), r.mid(), t);
    check_finite(r);
    return r;
}

Real neg(const Real& a) {
    Real r = a;
    mpfr_neg(r.mid_ref().get(), r.mid(), MPFR_RNDN);  // exact
    return r;
}

Real abs(const Real& a) {
    Real r = a;
    mpfr_abs(r.mid_ref().get(), r.mid(), MPFR_RNDN);  // exact
    return r;
}

Real sqrt(const Real& a, mpfr_prec_t prec) {
    Mpfr lo = a.lower(), hi = a.upper();
    if (mpfr_sgn(hi.get()) < 0) throw domain_error("real sqrt of negative ball");
    if (mpfr_sgn(lo.get()) < 0) mpfr_set_zero(lo.get(), 1);  // value asserted >= 0
    Mpfr slo(prec), shi(prec);
    mpfr_sqrt(slo.get(), lo.get(), MPFR_RNDD);
    mpfr_sqrt(shi.get(), hi.get(), MPFR_RNDU);
    Real r(prec);
    int t = mpfr_add(r.mid_ref().get(), slo.get(), shi.get(), MPFR_RNDN);
    t |= mpfr_div_2ui(r.mid_ref().get(), r.mid_ref().get(), 1, MPFR_RNDN);
    Mpfr half(kRadPrec);
    mpfr_sub(half.get(), shi.get(), slo.get(), MPFR_RNDU);
    mpfr_div_2ui(half.get(), half.get(), 1, MPFR_RNDU);
    rad_acc(r.rad_ref(), half.get());
    add_rounding_slop(r.rad_ref(), r.mid(), t);
    // half of (shi-slo) rounded down could under-cover; add one ulp of shi
    add_rounding_slop(r.rad_ref(), shi.get(), 1);
    check_finite(r);
    return r;
}

namespace {

// Monotone increasing endpoint rule.
template <typename F>
Real monotone(const Real& a, mpfr_prec_t prec, F op, const char* what, bool need_pos) {
    Mpfr lo = a.lower(), hi = a.upper();
    if (need_pos && mpfr_sgn(lo.get()) <= 0)
        throw domain_error(std::string(what) + ": ball not strictly positive");
    Mpfr flo(prec), fhi(prec);
    op(flo.get(), lo.get(), MPFR_RNDD);
    op(fhi.get(), hi.get(), MPFR_RNDU);
    Real r(prec);
    int t = mpfr_add(r.mid_ref().get(), flo.get(), fhi.get(), MPFR_RNDN);
    t |= mpfr_div_2ui(r.mid_ref().get(), r.mid_ref().get(), 1, MPFR_RNDN);
    Mpfr half(kRadPrec);
    mpfr_sub(half.get(), fhi.get(), flo.get(), MPFR_RNDU);
    mpfr_div_2ui(half.get(), half.get(), 1, MPFR_RNDU);
    rad_acc(r.rad_ref(), half.get());
    add_rounding_slop(r.rad_ref(), r.mid(), t);
    if (!mpfr_zero_p(fhi.get())) add_rounding_slop(r.rad_ref(), fhi.get(), 1);
    check_finite(r);
    return r;
}

}  // namespace

Real exp(const Real& a, mpfr_prec_t prec) {
    return monotone(
        a, prec, [](mpfr_ptr o, mpfr_srcptr x, mpfr_rnd_t rn) { mpfr_exp(o, x, rn); }, "exp",
        false);
}

Real log(const Real& a, mpfr_prec_t prec) {
    return monotone(
        a, prec, [](mpfr_ptr o, mpfr_srcptr x, mpfr_rnd_t rn) { mpfr_log(o, x, rn); }, "log",
        true);
}

Real sin(const Real& a, mpfr_prec_t prec) {
    Real r(prec);
    int t = mpfr_sin(r.mid_ref().get(), a.mid(), MPFR_RNDN);
    rad_acc(r.rad_ref(), a.rad());  // 1-Lipschitz
    add_rounding_slop(r.rad_ref(), r.mid(), t);
    return r;
}

Real cos(const Real& a, mpfr_prec_t prec) {
    Real r(prec);
    int t = mpfr_cos(r.mid_ref().get(), a.mid(), MPFR_RNDN);
    rad_acc(r.rad_ref(), a.rad());  // 1-Lipschitz
    add_rounding_slop(r.rad_ref(), r.mid(), t);
    return r;
}

Real pow(const Real& base, const Real& e, mpfr_prec_t prec) {
    if (!base.certainly_positive()) throw domain_error("real pow: base must be positive");
    return exp(mul(e, log(base, prec + 16), prec + 16), prec);
}

Real pow_si(const Real& base, long e, mpfr_prec_t prec) {
    if (e == 0) return Real::from_int(1, prec);
    if (e < 0) return div(Real::from_int(1, prec), pow_si(base, -e, prec + 16), prec);
    // endpoint analysis; x^e monotone on each sign region
    Mpfr lo = base.lower(), hi = base.upper();
    Mpfr flo(prec + 8), fhi(prec + 8);
    mpfr_pow_si(flo.get(), lo.get(), e, MPFR_RNDD);
    mpfr_pow_si(fhi.get(), hi.get(), e, MPFR_RNDU);
    if (e % 2 == 0) {
        // even powers: min over the interval is 0 when it straddles zero
        if (mpfr_sgn(lo.get()) < 0 && mpfr_sgn(hi.get()) > 0) {
            mpfr_pow_si(flo.get(), lo.get(), e, MPFR_RNDU);  // |lo|^e upper
            if (mpfr_cmp(flo.get(), fhi.get()) > 0) mpfr_swap(flo.get(), fhi.get());
            mpfr_set_zero(flo.get(), 1);
        } else if (mpfr_sgn(hi.get()) <= 0) {
            mpfr_pow_si(flo.get(), hi.get(), e, MPFR_RNDD);
            mpfr_pow_si(fhi.get(), lo.get(), e, MPFR_RNDU);
        }
    }
    if (mpfr_cmp(flo.get(), fhi.get()) > 0) mpfr_swap(flo.get(), fhi.get());
    Real r(prec);
    int t = mpfr_add(r.mid_ref().get(), flo.get(), fhi.get(), MPFR_RNDN);
    t |= mpfr_div_2ui(r.mid_ref().get(), r.mid_ref().get(), 1, MPFR_RNDN);
    Mpfr half(kRadPrec);
    mpfr_sub(half.get(), fhi.get(), flo.get(), MPFR_RNDU);
    mpfr_div_2ui(half.get(), half.get(), 1, MPFR_RNDU);
    rad_acc(r.rad_ref(), half.get());
    add_rounding_slop(r.rad_ref(), r.mid(), t);
    if (!mpfr_zero_p(fhi.get())) add_rounding_slop(r.rad_ref(), fhi.get(), 1);
    check_finite(r);
    return r;
}

Real min(const Real& a, const Real& b, mpfr_prec_t prec) {
    Mpfr lo(prec), hi(prec);
    mpfr_min(lo.get(), a.lower().get(), b.lower().get(), MPFR_RNDD);
    mpfr_min(hi.get(), a.upper().get(), b.upper().get(), MPFR_RNDU);
    Real r(prec);
    int t = mpfr_add(r.mid_ref().get(), lo.get(), hi.get(), MPFR_RNDN);
    t |= mpfr_div_2ui(r.mid_ref().get(), r.mid_ref().get(), 1, MPFR_RNDN);
    Mpfr half(kRadPrec);
    mpfr_sub(half.get(), hi.get(), lo.get(), MPFR_RNDU);
    mpfr_div_2ui(half.get(), half.get(), 1, MPFR_RNDU);
    rad_acc(r.rad_ref(), half.get());
    add_rounding_slop(r.rad_ref(), r.mid(), t);
    if (!mpfr_zero_p(hi.get())) add_rounding_slop(r.rad_ref(), hi.get(), 1);
    return r;
}

Real max(const Real& a, const Real& b, mpfr_prec_t prec) {
    return neg(min(neg(a), neg(b), prec));
}

Real mul_2si(const Real& a, long k) {
    Real r = a;
    mpfr_mul_2si(r.mid_ref().get(), r.mid(), k, MPFR_RNDN);  // exact
    mpfr_mul_2si(r.rad_ref().get(), r.rad(), k, MPFR_RNDU);
    return r;
}

Real hull(const Real& a, const Real& b, mpfr_prec_t prec) {
    Mpfr lo(prec), hi(prec);
    mpfr_min(lo.get(), a.lower().get(), b.lower().get(), MPFR_RNDD);
    mpfr_max(hi.get(), a.upper().get(), b.upper().get(), MPFR_RNDU);
    Real r(prec);
    int t = mpfr_add(r.mid_ref().get(), lo.get(), hi.get(), MPFR_RNDN);
    t |= mpfr_div_2ui(r.mid_ref().get(), r.mid_ref().get(), 1, MPFR_RNDN);
    Mpfr half(kRadPrec);
    mpfr_sub(half.get(), hi.get(), lo.get(), MPFR_RNDU);
    mpfr_div_2ui(half.get(), half.get(), 1, MPFR_RNDU);
    rad_acc(r.rad_ref(), half.get());
    add_rounding_slop(r.rad_ref(), r.mid(), t);
    if (!mpfr_zero_p(hi.get())) add_rounding_slop(r.rad_ref(), hi.get(), 1);
    return r;
}

// ---------------------------------------------------------------- Complex

Complex::Complex(const Real& re, const Real& im) : re_(re.prec()), im_(im.prec()), rad_(kRadPrec) {
    mpfr_set(re_.get(), re.mid(), MPFR_RNDN);
    mpfr_set(im_.get(), im.mid(), MPFR_RNDN);
    mpfr_hypot(rad_.get(), re.rad(), im.rad(), MPFR_RNDU);
}

Complex::Complex(const Real& re) : Complex(re, Real(re.prec())) {}

Complex Complex::from_mpq(const mpq_class& re, const mpq_class& im, mpfr_prec_t prec) {
    return Complex(Real::from_mpq(re, prec), Real::from_mpq(im, prec));
}

Complex Complex::i_unit(mpfr_prec_t prec) {
    return Complex(Real(prec), Real::from_int(1, prec));
}

Real Complex::re() const {
    Real r(prec());
    mpfr_set(r.mid_ref().get(), re_.get(), MPFR_RNDN);
    mpfr_set(r.rad_ref().get(), rad_.get(), MPFR_RNDU);
    return r;
}

Real Complex::im() const {
    Real r(prec());
    mpfr_set(r.mid_ref().get(), im_.get(), MPFR_RNDN);
    mpfr_set(r.rad_ref().get(), rad_.get(), MPFR_RNDU);
    return r;
}

Real Complex::abs(mpfr_prec_t p) const {
    if (p == 0) p = prec();
    Real r(p);
    int t = mpfr_hypot(r.mid_ref().get(), re_.get(), im_.get(), MPFR_RNDN);
    rad_acc(r.rad_ref(), rad_.get());  // | |z|-|m| | <= |z-m|
    add_rounding_slop(r.rad_ref(), r.mid(), t);
    return r;
}

Complex Complex::midpoint() const {
    Complex m = *this;
    mpfr_set_zero(m.rad_.get(), 1);
    return m;
}

namespace {

mpq_class mpfr_to_q2(mpfr_srcptr x) {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), x);
    return q;
}

}  // namespace

bool Complex::contains_zero() const {
    // exact: re^2 + im^2 <= rad^2
    mpq_class x = mpfr_to_q2(re_.get()), y = mpfr_to_q2(im_.get()), r = mpfr_to_q2(rad_.get());
    return x * x + y * y <= r * r;
}

bool Complex::contains(const mpq_class& qre, const mpq_class& qim) const {
    mpq_class dx = mpfr_to_q2(re_.get()) - qre;
    mpq_class dy = mpfr_to_q2(im_.get()) - qim;
    mpq_class r = mpfr_to_q2(rad_.get());
    return dx * dx + dy * dy <= r * r;
}

bool Complex::overlaps(const Complex& a, const Complex& b) {
    // exact: dist(midpoints)^2 <= (ra + rb)^2, so the discs truly intersect
    mpq_class dx = mpfr_to_q2(a.re_mid()) - mpfr_to_q2(b.re_mid());
    mpq_class dy = mpfr_to_q2(a.im_mid()) - mpfr_to_q2(b.im_mid());
    mpq_class rr = mpfr_to_q2(a.rad()) + mpfr_to_q2(b.rad());
    return dx * dx + dy * dy <= rr * rr;
}

std::string Complex::str(int digits) const {
    return "(" + re_.str(digits) + " + " + im_.str(digits) + " i +/- " + rad_.str(3) + ")";
}

Complex add(const Complex& a, const Complex& b, mpfr_prec_t prec) {
    Complex r(prec);
    int t1 = mpfr_add(r.re_ref().get(), a.re_mid(), b.re_mid(), MPFR_RNDN);
    int t2 = mpfr_add(r.im_ref().get(), a.im_mid(), b.im_mid(), MPFR_RNDN);
    mpfr_add(r.rad_ref().get(), a.rad(), b.rad(), MPFR_RNDU);
    add_rounding_slop(r.rad_ref(), r.re_mid(), t1);
    add_rounding_slop(r.rad_ref(), r.im_mid(), t2);
    return r;
}

Complex sub(const Complex& a, const Complex& b, mpfr_prec_t prec) {
    Complex r(prec);
    int t1 = mpfr_sub(r.re_ref().get(), a.re_mid(), b.re_mid(), MPFR_RNDN);
    int t2 = mpfr_sub(r.im_ref().get(), a.im_mid(), b.im_mid(), MPFR_RNDN);
    mpfr_add(r.rad_ref().get(), a.rad(), b.rad(), MPFR_RNDU);
    add_rounding_slop(r.rad_ref(), r.re_mid(), t1);
    add_rounding_slop(r.rad_ref(), r.im_mid(), t2);
    return r;
}

namespace {

Mpfr cabs_up(const Complex& z) {
    Mpfr h(kRadPrec);
    mpfr_hypot(h.get(), z.re_mid(), z.im_mid(), MPFR_RNDU);
    return h;
}

}  // namespace

Complex mul(const Complex& a, const Complex& b, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 8;
    Mpfr p1(wp), p2(wp), p3(wp), p4(wp);
    mpfr_mul(p1.get(), a.re_mid(), b.re_mid(), MPFR_RNDN);
    mpfr_mul(p2.get(), a.im_mid(), b.im_mid(), MPFR_RNDN);
    mpfr_mul(p3.get(), a.re_mid(), b.im_mid(), MPFR_RNDN);
    mpfr_mul(p4.get(), a.im_mid(), b.re_mid(), MPFR_RNDN);
    Complex r(prec);
    int t1 = mpfr_sub(r.re_ref().get(), p1.get(), p2.get(), MPFR_RNDN);
    int t2 = mpfr_add(r.im_ref().get(), p3.get(), p4.get(), MPFR_RNDN);
    // products at wp carry <= 2^-wp relative error each; cover with 4 ulps
    Mpfr am = cabs_up(a), bm = cabs_up(b), tmp(kRadPrec);
    mpfr_mul(tmp.get(), am.get(), b.rad(), MPFR_RNDU);
    rad_acc(r.rad_ref(), tmp.get());
    mpfr_mul(tmp.get(), bm.get(), a.rad(), MPFR_RNDU);
    rad_acc(r.rad_ref(), tmp.get());
    mpfr_mul(tmp.get(), a.rad(), b.rad(), MPFR_RNDU);
    rad_acc(r.rad_ref(), tmp.get());
    add_rounding_slop(r.rad_ref(), r.re_mid(), t1);
    add_rounding_slop(r.rad_ref(), r.im_mid(), t2);
    for (mpfr_srcptr q : {p1.get(), p2.get(), p3.get(), p4.get()})
        if (!mpfr_zero_p(q)) add_rounding_slop(r.rad_ref(), q, 1);
    return r;
}

Complex recip(const Complex& a, mpfr_prec_t prec) {
    Mpfr am(kRadPrec);
    mpfr_hypot(am.get(), a.re_mid(), a.im_mid(), MPFR_RNDD);
    Mpfr gap(kRadPrec);
    mpfr_sub(gap.get(), am.get(), a.rad(), MPFR_RNDD);
    if (mpfr_sgn(gap.get()) <= 0) throw pole_error("complex recip: ball contains zero");

    // 1/m for the exact midpoint m, through rigorous Real ops
    mpfr_prec_t wp = prec + 16;
    Real x(wp), y(wp);
    mpfr_set(x.mid_ref().get(), a.re_mid(), MPFR_RNDN);
    mpfr_set(y.mid_ref().get(), a.im_mid(), MPFR_RNDN);
    Real n2 = add(mul(x, x, wp), mul(y, y, wp), wp);
    Real u = div(x, n2, wp);
    Real v = neg(div(y, n2, wp));
    Complex r(prec);
    int t1 = mpfr_set(r.re_ref().get(), u.mid(), MPFR_RNDN);
    int t2 = mpfr_set(r.im_ref().get(), v.mid(), MPFR_RNDN);
    mpfr_add(r.rad_ref().get(), u.rad(), v.rad(), MPFR_RNDU);
    // input-radius term: sup |1/w^2| * rad <= rad / (|m| - rad)^2... use
    // the sharp bound rad / (|m| (|m| - rad)) valid for discs off zero.
    Mpfr den(kRadPrec), tr(kRadPrec);
    mpfr_mul(den.get(), am.get(), gap.get(), MPFR_RNDD);
    mpfr_div(tr.get(), a.rad(), den.get(), MPFR_RNDU);
    rad_acc(r.rad_ref(), tr.get());
    add_rounding_slop(r.rad_ref(), r.re_mid(), t1);
    add_rounding_slop(r.rad_ref(), r.im_mid(), t2);
    return r;
}

Complex div(const Complex& a, const Complex& b, mpfr_prec_t prec) {
    return mul(a, recip(b, prec + 8), prec);
}

Complex neg(const Complex& a) {
    Complex r = a;
    mpfr_neg(r.re_ref().get(), r.re_mid(), MPFR_RNDN);
    mpfr_neg(r.im_ref().get(), r.im_mid(), MPFR_RNDN);
    return r;
}

Complex conj(const Complex& a) {
    Complex r = a;
    mpfr_neg(r.im_ref().get(), r.im_mid(), MPFR_RNDN);
    return r;
}

Complex mul_i(const Complex& a) {
    Complex r = a;
    mpfr_swap(r.re_ref().get(), r.im_ref().get());
    mpfr_neg(r.re_ref().get(), r.re_mid(), MPFR_RNDN);
    return r;
}

namespace {

// Disc must stay off the closed negative real axis (branch cut of sqrt/log).
void require_off_cut(const Complex& a, const char* what) {
    Mpfr am(kRadPrec);
    mpfr_hypot(am.get(), a.re_mid(), a.im_mid(), MPFR_RNDD);
    if (mpfr_cmp(am.get(), a.rad()) <= 0)
        throw pole_error(std::string(what) + ": ball contains zero");
    if (mpfr_sgn(a.re_mid()) < 0) {
        Mpfr im_abs(kRadPrec);
        mpfr_abs(im_abs.get(), a.im_mid(), MPFR_RNDD);
        if (mpfr_cmp(im_abs.get(), a.rad()) <= 0)
            throw domain_error(std::string(what) + ": ball crosses the branch cut");
    }
}

// lower bound of |z| minus rad (distance of the disc from 0), must be > 0
Mpfr mod_gap(const Complex& a) {
    Mpfr am(kRadPrec), gap(kRadPrec);
    mpfr_hypot(am.get(), a.re_mid(), a.im_mid(), MPFR_RNDD);
    mpfr_sub(gap.get(), am.get(), a.rad(), MPFR_RNDD);
    return gap;
}

}  // namespace

Complex sqrt(const Complex& a, mpfr_prec_t prec) {
    require_off_cut(a, "complex sqrt");
    mpfr_prec_t wp = prec + 16;
    // principal sqrt of the exact midpoint, via ball ops on exact inputs
    Real rere(wp), imim(wp);
    mpfr_set(rere.mid_ref().get(), a.re_mid(), MPFR_RNDN);
    mpfr_set(imim.mid_ref().get(), a.im_mid(), MPFR_RNDN);
    Complex zm(rere, imim);
    Real r_ = zm.abs(wp);
    Real u(wp), v(wp);
    if (mpfr_sgn(a.re_mid()) >= 0) {
        u = sqrt(mul_2si(add(r_, rere, wp), -1), wp);  // sqrt((|z|+re)/2)
        v = div(imim, mul_2si(u, 1), wp);
    } else {
        Real w = sqrt(mul_2si(sub(r_, rere, wp), -1), wp);  // sqrt((|z|-re)/2)
        if (mpfr_sgn(a.im_mid()) >= 0) {
            v = w;
        } else {
            v = neg(w);
        }
        u = div(imim, mul_2si(v, 1), wp);
    }
    Complex r(prec);
    int t1 = mpfr_set(r.re_ref().get(), u.mid(), MPFR_RNDN);
    int t2 = mpfr_set(r.im_ref().get(), v.mid(), MPFR_RNDN);
    mpfr_add(r.rad_ref().get(), u.rad(), v.rad(), MPFR_RNDU);
    // input radius: sup |1/(2 sqrt w)| over the disc = 1/(2 sqrt(|m|-rad))
    Mpfr gap = mod_gap(a);
    Mpfr s(kRadPrec);
    mpfr_sqrt(s.get(), gap.get(), MPFR_RNDD);
    mpfr_mul_2ui(s.get(), s.get(), 1, MPFR_RNDD);
    Mpfr term(kRadPrec);
    mpfr_div(term.get(), a.rad(), s.get(), MPFR_RNDU);
    rad_acc(r.rad_ref(), term.get());
    add_rounding_slop(r.rad_ref(), r.re_mid(), t1);
    add_rounding_slop(r.rad_ref(), r.im_mid(), t2);
    return r;
}

Complex exp(const Complex& a, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 16;
    Real x(wp), y(wp);
    mpfr_set(x.mid_ref().get(), a.re_mid(), MPFR_RNDN);
    mpfr_set(y.mid_ref().get(), a.im_mid(), MPFR_RNDN);
    Real ex = exp(x, wp);
    Real c = cos(y, wp), s = sin(y, wp);
    Real u = mul(ex, c, wp), v = mul(ex, s, wp);
    Complex r(prec);
    int t1 = mpfr_set(r.re_ref().get(), u.mid(), MPFR_RNDN);
    int t2 = mpfr_set(r.im_ref().get(), v.mid(), MPFR_RNDN);
    mpfr_add(r.rad_ref().get(), u.rad(), v.rad(), MPFR_RNDU);
    // input radius: |e^{z+d} - e^z| <= e^{Re z + rad} * rad
    Mpfr reup(kRadPrec), bound(kRadPrec);
    mpfr_set(reup.get(), a.re_mid(), MPFR_RNDU);
    mpfr_add(reup.get(), reup.get(), a.rad(), MPFR_RNDU);
    mpfr_exp(bound.get(), reup.get(), MPFR_RNDU);
    mpfr_mul(bound.get(), bound.get(), a.rad(), MPFR_RNDU);
    rad_acc(r.rad_ref(), bound.get());
    add_rounding_slop(r.rad_ref(), r.re_mid(), t1);
    add_rounding_slop(r.rad_ref(), r.im_mid(), t2);
    return r;
}

Complex log(const Complex& a, mpfr_prec_t prec) {
    require_off_cut(a, "complex log");
    mpfr_prec_t wp = prec + 16;
    Real x(wp), y(wp);
    mpfr_set(x.mid_ref().get(), a.re_mid(), MPFR_RNDN);
    mpfr_set(y.mid_ref().get(), a.im_mid(), MPFR_RNDN);
    Complex zm(x, y);
    Real mod = zm.abs(wp);
    Real lg = log(mod, wp);
    Real arg(wp);
    int targ = mpfr_atan2(arg.mid_ref().get(), a.im_mid(), a.re_mid(), MPFR_RNDN);
    add_rounding_slop(arg.rad_ref(), arg.mid(), targ);
    Complex r(prec);
    int t1 = mpfr_set(r.re_ref().get(), lg.mid(), MPFR_RNDN);
    int t2 = mpfr_set(r.im_ref().get(), arg.mid(), MPFR_RNDN);
    mpfr_add(r.rad_ref().get(), lg.rad(), arg.rad(), MPFR_RNDU);
    // input radius: sup |1/w| = 1/(|m|-rad)
    Mpfr gap = mod_gap(a), term(kRadPrec);
    mpfr_div(term.get(), a.rad(), gap.get(), MPFR_RNDU);
    rad_acc(r.rad_ref(), term.get());
    add_rounding_slop(r.rad_ref(), r.re_mid(), t1);
    add_rounding_slop(r.rad_ref(), r.im_mid(), t2);
    return r;
}

Complex pow_si(const Complex& base, long e, mpfr_prec_t prec) {
    if (e == 0) return Complex(Real::from_int(1, prec));
    if (e < 0) return recip(pow_si(base, -e, prec + 16), prec);
    mpfr_prec_t wp = prec + 16;
    Complex acc(Real::from_int(1, wp));
    Complex sq = base;
    unsigned long u = static_cast<unsigned long>(e);
    while (u > 0) {
        if (u & 1) acc = mul(acc, sq, wp);
        u >>= 1;
        if (u > 0) sq = mul(sq, sq, wp);
    }
    return add(acc, Complex(prec), prec);  // round to target precision
}

}  // namespace lab
