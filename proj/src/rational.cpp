#include "lab/rational.hpp"

#include <algorithm>

#include "lab/errors.hpp"

namespace lab {

mpz_class weil_height(const mpq_class& x) {
    mpq_class r = x;
    r.canonicalize();
    mpz_class num = ::abs(r.get_num());
    return std::max(num, r.get_den());
}

mpq_class size_height_rational(const mpq_class& x) {
    mpq_class r = x;
    r.canonicalize();
    mpq_class a = ::abs(r);
    mpq_class den(r.get_den());
    return a > den ? a : den;
}

namespace {

bool is_probable_prime(const mpz_class& n) { return mpz_probab_prime_p(n.get_mpz_t(), 32) != 0; }

// Pollard rho with Brent cycle detection; deterministic parameter sweep.
mpz_class pollard_rho(const mpz_class& n) {
    for (unsigned long c = 1;; ++c) {
        mpz_class x = 2, y = 2, d = 1;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            mpz_class diff = x - y;
            if (diff < 0) diff = -diff;
            if (diff == 0) break;
            mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
        }
        if (d != 1 && d != n) return d;
    }
}

void factor_rec(const mpz_class& n, std::map<mpz_class, unsigned>& out) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        ++out[n];
        return;
    }
    mpz_class d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

}  // namespace

std::map<mpz_class, unsigned> factor_integer(const mpz_class& n) {
    if (n <= 0) throw domain_error("factor_integer: argument must be positive");
    std::map<mpz_class, unsigned> out;
    mpz_class m = n;
    for (unsigned long p : {2ul, 3ul, 5ul, 7ul, 11ul, 13ul, 17ul, 19ul, 23ul, 29ul, 31ul, 37ul}) {
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            ++out[mpz_class(p)];
            m /= static_cast<long>(p);
        }
    }
    // trial division up to 10^6, then rho for what is left
    for (unsigned long p = 41; p < 1000000 && m > 1; p += 2) {
        if (mpz_cmp_ui(m.get_mpz_t(), p * p) < 0) break;
        while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
            ++out[mpz_class(p)];
            m /= static_cast<long>(p);
        }
    }
    if (m > 1) factor_rec(m, out);
    return out;
}

mpz_class euler_phi(const mpz_class& n) {
    if (n <= 0) throw domain_error("euler_phi: n must be >= 1");
    if (n == 1) return 1;
    mpz_class phi = 1;
    for (const auto& [p, e] : factor_integer(n)) {
        mpz_class pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e - 1);
        phi *= pe * (p - 1);
    }
    return phi;
}

std::optional<mpq_class> rational_reconstruct(const Real& x, const mpz_class& max_den) {
    if (max_den < 1) throw domain_error("rational_reconstruct: max_den must be >= 1");
    // admissibility: rad < 1/(2 max_den^2)
    mpq_class rad;
    mpfr_get_q(rad.get_mpq_t(), x.rad());
    mpq_class window(1, 2 * max_den * max_den);
    window.canonicalize();
    if (rad >= window)
        throw ambiguity_error("rational_reconstruct: ball radius too large for max_den");
    mpq_class mid;
    mpfr_get_q(mid.get_mpq_t(), x.mid());

    // Any rational p/q with q <= max_den inside the ball satisfies
    // |mid - p/q| <= rad < 1/(2 q max_den) <= 1/(2 q^2), so it is a
    // continued-fraction convergent of mid.  Walk the convergents.
    mpz_class a = mid.get_num(), b = mid.get_den();
    mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    while (b != 0) {
        mpz_class t, r;
        mpz_fdiv_qr(t.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
        mpz_class p2 = t * p1 + p0, q2 = t * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        a = b;
        b = r;
        if (q1 >= 1) {
            mpq_class cand(p1, q1);
            cand.canonicalize();
            if (::abs(mid - cand) <= rad) return cand;
        }
    }
    return std::nullopt;
}

mpq_class parse_rational(const std::string& s) {
    try {
        mpq_class q(s);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw domain_error("parse_rational: cannot parse '" + s + "'");
    }
}

std::string rational_str(const mpq_class& q) {
    mpq_class r = q;
    r.canonicalize();
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

}  // namespace lab
