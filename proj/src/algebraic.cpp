#include "lab/algebraic.hpp"

#include "lab/errors.hpp"
#include "lab/rational.hpp"
#include "lab/roots.hpp"

namespace lab {

AlgebraicNumber algebraic_from_rational(const mpq_class& x, mpfr_prec_t prec) {
    mpq_class r = x;
    r.canonicalize();
    // q x - p, normalized to positive leading coefficient
    PolyQ mp(std::vector<mpq_class>{mpq_class(-r.get_num()), mpq_class(r.get_den())});
    return {mp, Complex::from_mpq(r, 0, prec)};
}

std::vector<AlgebraicNumber> algebraic_roots(const PolyQ& min_poly, mpfr_prec_t prec) {
    auto [c, z] = min_poly.content_primitive();
    (void)c;
    PolyQ mp = PolyQ::from_integer_coeffs(z);
    std::vector<AlgebraicNumber> out;
    for (const Complex& disc : isolate_roots(mp, prec)) out.push_back({mp, disc});
    return out;
}

mpz_class denominator_of(const AlgebraicNumber& a) {
    auto [c, z] = a.min_poly.content_primitive();
    (void)c;
    int d = polyz_degree(z);
    if (d < 1) throw domain_error("denominator_of: constant polynomial");
    mpz_class lead = z.back();
    if (lead == 1) return 1;
    // gamma * alpha is an algebraic integer iff for every prime l | lc and
    // every i < d:  v_l(a_i) + (d - i) v_l(gamma) >= v_l(lc)
    mpz_class gamma = 1;
    for (const auto& [l, vl_lead_u] : factor_integer(lead)) {
        long vl_lead = vl_lead_u;
        long e = 0;
        for (int i = 0; i < d; ++i) {
            if (z[i] == 0) continue;  // infinite valuation, no constraint
            mpz_class t = z[i];
            long v = 0;
            while (mpz_divisible_p(t.get_mpz_t(), l.get_mpz_t())) {
                t /= l;
                ++v;
            }
            if (v >= vl_lead) continue;
            long need = (vl_lead - v + (d - i) - 1) / (d - i);  // ceil
            e = std::max(e, need);
        }
        mpz_class le;
        mpz_pow_ui(le.get_mpz_t(), l.get_mpz_t(), static_cast<unsigned long>(e));
        gamma *= le;
    }
    return gamma;
}

Real mahler_measure(const PolyQ& p, mpfr_prec_t prec) {
    auto [c, z] = p.content_primitive();
    (void)c;
    PolyQ mp = PolyQ::from_integer_coeffs(z);
    if (mp.degree() < 1) return Real::from_int(1, prec);
    mpfr_prec_t wp = prec + 32;
    Real m = abs(Real::from_mpq(mp.leading(), wp));
    Real one = Real::from_int(1, wp);
    for (const Complex& root : isolate_roots(mp, prec)) {
        m = mul(m, max(one, root.abs(wp), wp), wp);
    }
    return m;
}

Real weil_height_algebraic(const AlgebraicNumber& a, mpfr_prec_t prec) {
    int d = a.degree();
    if (d < 1) throw domain_error("weil_height_algebraic: constant polynomial");
    if (d == 1) {
        // rational p/q: height max(|p|, q) exactly
        mpq_class root = -a.min_poly.coeff(0) / a.min_poly.coeff(1);
        return Real::from_mpz(weil_height(root), prec);
    }
    mpfr_prec_t wp = prec + 32;
    Real m = mahler_measure(a.min_poly, wp);
    return pow(m, div(Real::from_int(1, wp), Real::from_int(d, wp), wp), prec);
}

Real size_height(const AlgebraicNumber& a, mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 32;
    Real best = Real::from_mpz(denominator_of(a), wp);
    if (a.degree() == 1) {
        mpq_class root = -a.min_poly.coeff(0) / a.min_poly.coeff(1);
        return max(best, abs(Real::from_mpq(root, wp)), prec);
    }
    for (const Complex& root : isolate_roots(a.min_poly, prec))
        best = max(best, root.abs(wp), wp);
    return add(best, Real(prec), prec);
}

}  // namespace lab
