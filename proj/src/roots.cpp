#include "lab/roots.hpp"

#include <algorithm>
#include <cmath>

#include "lab/errors.hpp"

namespace lab {

namespace {

mpq_class q_of(mpfr_srcptr x) {
    mpq_class q;
    mpfr_get_q(q.get_mpq_t(), x);
    return q;
}

// exact disjointness of discs: dist(centers)^2 > (r1+r2)^2
bool certainly_disjoint(const Complex& a, const Complex& b) {
    mpq_class dx = q_of(a.re_mid()) - q_of(b.re_mid());
    mpq_class dy = q_of(a.im_mid()) - q_of(b.im_mid());
    mpq_class rr = q_of(a.rad()) + q_of(b.rad());
    return dx * dx + dy * dy > rr * rr;
}

struct Pt {
    Mpfr re, im;
    Pt(mpfr_prec_t p) : re(p), im(p) {}
};

// plain complex midpoint helpers at precision wp
void c_sub(Pt& r, const Pt& a, const Pt& b) {
    mpfr_sub(r.re.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_sub(r.im.get(), a.im.get(), b.im.get(), MPFR_RNDN);
}

void c_mul(Pt& r, const Pt& a, const Pt& b, Mpfr& t1, Mpfr& t2) {
    mpfr_mul(t1.get(), a.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_sub(t1.get(), t1.get(), t2.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), a.re.get(), b.im.get(), MPFR_RNDN);
    Mpfr t3(mpfr_get_prec(t2.get()));
    mpfr_mul(t3.get(), a.im.get(), b.re.get(), MPFR_RNDN);
    mpfr_add(r.im.get(), t2.get(), t3.get(), MPFR_RNDN);
    mpfr_set(r.re.get(), t1.get(), MPFR_RNDN);
}

void c_div(Pt& r, const Pt& a, const Pt& b, Mpfr& t1, Mpfr& t2) {
    // (a * conj b) / |b|^2
    Mpfr n2(mpfr_get_prec(t1.get()));
    mpfr_mul(t1.get(), b.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_mul(t2.get(), b.im.get(), b.im.get(), MPFR_RNDN);
    mpfr_add(n2.get(), t1.get(), t2.get(), MPFR_RNDN);
    Pt cb(mpfr_get_prec(t1.get()));
    mpfr_set(cb.re.get(), b.re.get(), MPFR_RNDN);
    mpfr_neg(cb.im.get(), b.im.get(), MPFR_RNDN);
    Pt num(mpfr_get_prec(t1.get()));
    c_mul(num, a, cb, t1, t2);
    mpfr_div(r.re.get(), num.re.get(), n2.get(), MPFR_RNDN);
    mpfr_div(r.im.get(), num.im.get(), n2.get(), MPFR_RNDN);
}

}  // namespace

std::vector<Complex> isolate_roots(const PolyQ& p_in, mpfr_prec_t prec,
                                   mpfr_prec_t prec_ceiling) {
    if (p_in.degree() < 1) throw domain_error("isolate_roots: degree must be >= 1");
    PolyQ p = p_in;
    {
        PolyQ g = gcd(p, p.derivative());
        if (g.degree() > 0) throw domain_error("isolate_roots: polynomial must be squarefree");
    }
    const int n = p.degree();
    PolyQ dp = p.derivative();

    // Cauchy bound R = 1 + max |a_i / a_n|
    mpq_class maxr = 0;
    for (int i = 0; i < n; ++i) {
        mpq_class r = ::abs(p.coeff(i) / p.leading());
        if (r > maxr) maxr = r;
    }
    double R = 1.0 + mpq_class(maxr).get_d();
    if (R > 1e12) R = 1e12;

    for (mpfr_prec_t wp = std::max<mpfr_prec_t>(prec, 64) + 32;; wp *= 2) {
        if (wp > 4 * prec_ceiling) throw precision_error("isolate_roots: precision exhausted");

        // initial guesses on a slightly offset circle
        std::vector<Pt> z;
        z.reserve(n);
        Mpfr t1(wp), t2(wp);
        for (int k = 0; k < n; ++k) {
            Pt q(wp);
            double ang = (2.0 * 3.14159265358979312 * (k + 0.25)) / n + 0.31;
            mpfr_set_d(q.re.get(), 0.7 * R * std::cos(ang), MPFR_RNDN);
            mpfr_set_d(q.im.get(), 0.7 * R * std::sin(ang) + 1e-3 * R, MPFR_RNDN);
            z.push_back(std::move(q));
        }

        // Aberth-Ehrlich sweeps
        const auto& c = p.coeffs();
        const auto& dc = dp.coeffs();
        std::vector<Mpfr> cr, ci, dcr, dci;
        for (const auto& q : c) {
            Mpfr a(wp), b(wp);
            mpfr_set_q(a.get(), q.get_mpq_t(), MPFR_RNDN);
            mpfr_set_ui(b.get(), 0, MPFR_RNDN);
            cr.push_back(std::move(a));
            ci.push_back(std::move(b));
        }
        for (const auto& q : dc) {
            Mpfr a(wp), b(wp);
            mpfr_set_q(a.get(), q.get_mpq_t(), MPFR_RNDN);
            mpfr_set_ui(b.get(), 0, MPFR_RNDN);
            dcr.push_back(std::move(a));
            dci.push_back(std::move(b));
        }
        auto horner = [&](const std::vector<Mpfr>& ar, const std::vector<Mpfr>& ai, const Pt& x,
                          Pt& out) {
            Pt acc(wp);
            mpfr_set_ui(acc.re.get(), 0, MPFR_RNDN);
            mpfr_set_ui(acc.im.get(), 0, MPFR_RNDN);
            for (size_t i = ar.size(); i-- > 0;) {
                Pt tmp(wp);
                c_mul(tmp, acc, x, t1, t2);
                mpfr_add(acc.re.get(), tmp.re.get(), ar[i].get(), MPFR_RNDN);
                mpfr_set(acc.im.get(), tmp.im.get(), MPFR_RNDN);
                mpfr_add(acc.im.get(), acc.im.get(), ai[i].get(), MPFR_RNDN);
            }
            out = std::move(acc);
        };

        int max_iters = 60 + static_cast<int>(wp);
        for (int iter = 0; iter < max_iters; ++iter) {
            bool moved = false;
            for (int k = 0; k < n; ++k) {
                Pt pv(wp), dv(wp);
                horner(cr, ci, z[k], pv);
                if (mpfr_zero_p(pv.re.get()) && mpfr_zero_p(pv.im.get())) continue;
                horner(dcr, dci, z[k], dv);
                if (mpfr_zero_p(dv.re.get()) && mpfr_zero_p(dv.im.get())) continue;
                Pt newton(wp);
                c_div(newton, pv, dv, t1, t2);
                // s = sum_{j != k} 1/(z_k - z_j)
                Pt s(wp);
                mpfr_set_ui(s.re.get(), 0, MPFR_RNDN);
                mpfr_set_ui(s.im.get(), 0, MPFR_RNDN);
                Pt one(wp);
                mpfr_set_ui(one.re.get(), 1, MPFR_RNDN);
                mpfr_set_ui(one.im.get(), 0, MPFR_RNDN);
                for (int j = 0; j < n; ++j) {
                    if (j == k) continue;
                    Pt d(wp), inv(wp);
                    c_sub(d, z[k], z[j]);
                    if (mpfr_zero_p(d.re.get()) && mpfr_zero_p(d.im.get())) {
                        mpfr_set_d(d.re.get(), 1e-20, MPFR_RNDN);
                    }
                    c_div(inv, one, d, t1, t2);
                    mpfr_add(s.re.get(), s.re.get(), inv.re.get(), MPFR_RNDN);
                    mpfr_add(s.im.get(), s.im.get(), inv.im.get(), MPFR_RNDN);
                }
                // w = newton / (1 - newton * s)
                Pt ns(wp), den(wp), w(wp);
                c_mul(ns, newton, s, t1, t2);
                mpfr_ui_sub(den.re.get(), 1, ns.re.get(), MPFR_RNDN);
                mpfr_neg(den.im.get(), ns.im.get(), MPFR_RNDN);
                if (mpfr_zero_p(den.re.get()) && mpfr_zero_p(den.im.get())) {
                    den = one;
                }
                c_div(w, newton, den, t1, t2);
                // z_k -= w; convergence when |w| < 2^-(wp-8) (1 + |z_k|)
                mpfr_sub(z[k].re.get(), z[k].re.get(), w.re.get(), MPFR_RNDN);
                mpfr_sub(z[k].im.get(), z[k].im.get(), w.im.get(), MPFR_RNDN);
                Mpfr wab(64), zab(64);
                mpfr_hypot(wab.get(), w.re.get(), w.im.get(), MPFR_RNDU);
                mpfr_hypot(zab.get(), z[k].re.get(), z[k].im.get(), MPFR_RNDU);
                mpfr_add_ui(zab.get(), zab.get(), 1, MPFR_RNDU);
                mpfr_mul_2si(zab.get(), zab.get(), -static_cast<long>(wp) + 8, MPFR_RNDU);
                if (mpfr_cmp(wab.get(), zab.get()) > 0) moved = true;
            }
            if (!moved) break;
        }

        // validation discs r_k = n |p(z)/p'(z)|, rigorous via ball evaluation
        std::vector<Complex> out;
        bool ok = true;
        for (int k = 0; k < n && ok; ++k) {
            Real xm(wp), ym(wp);
            mpfr_set(xm.mid_ref().get(), z[k].re.get(), MPFR_RNDN);
            mpfr_set(ym.mid_ref().get(), z[k].im.get(), MPFR_RNDN);
            Complex zk(xm, ym);
            Complex pv = p.evaluate(zk, wp);
            Complex dv = dp.evaluate(zk, wp);
            Mpfr pv_hi = pv.abs(wp).upper();
            Mpfr dv_lo = dv.abs(wp).lower();
            if (mpfr_sgn(dv_lo.get()) <= 0) {
                ok = false;
                break;
            }
            Mpfr rk(kRadPrec);
            mpfr_div(rk.get(), pv_hi.get(), dv_lo.get(), MPFR_RNDU);
            mpfr_mul_ui(rk.get(), rk.get(), static_cast<unsigned long>(n), MPFR_RNDU);
            Complex disc = zk;
            mpfr_set(disc.rad_ref().get(), rk.get(), MPFR_RNDU);
            out.push_back(disc);
        }
        if (ok) {
            for (int a = 0; a < n && ok; ++a)
                for (int b = a + 1; b < n && ok; ++b)
                    if (!certainly_disjoint(out[a], out[b])) ok = false;
        }
        if (ok) {
            std::sort(out.begin(), out.end(), [](const Complex& a, const Complex& b) {
                int c = mpfr_cmp(a.re_mid(), b.re_mid());
                if (c != 0) return c < 0;
                return mpfr_cmp(a.im_mid(), b.im_mid()) < 0;
            });
            return out;
        }
    }
}

}  // namespace lab
