#include "lab/bounds.hpp"

#include <sstream>

#include "lab/errors.hpp"
#include "lab/rational.hpp"

namespace lab {

PowerProduct PowerProduct::from_integer(const mpz_class& n) {
    if (n < 1) throw domain_error("PowerProduct::from_integer: need n >= 1");
    PowerProduct r;
    if (n == 1) return r;
    for (const auto& [p, e] : factor_integer(n)) r.primes_[p] = static_cast<long>(e);
    return r;
}

PowerProduct PowerProduct::prime_power(const mpz_class& p, const mpq_class& e) {
    PowerProduct r;
    if (e != 0) {
        // factor p in case a composite base slips in
        for (const auto& [q, k] : factor_integer(p))
            r.primes_[q] = e * static_cast<long>(k);
    }
    return r;
}

PowerProduct PowerProduct::e_power(const mpq_class& e) {
    PowerProduct r;
    r.e_exp_ = e;
    return r;
}

PowerProduct& PowerProduct::operator*=(const PowerProduct& o) {
    for (const auto& [p, e] : o.primes_) {
        mpq_class& cur = primes_[p];
        cur += e;
        if (cur == 0) primes_.erase(p);
    }
    e_exp_ += o.e_exp_;
    return *this;
}

PowerProduct PowerProduct::pow(const mpq_class& e) const {
    PowerProduct r;
    if (e == 0) return r;
    for (const auto& [p, ex] : primes_) r.primes_[p] = ex * e;
    r.e_exp_ = e_exp_ * e;
    return r;
}

Real PowerProduct::value(mpfr_prec_t prec) const {
    mpfr_prec_t wp = prec + 32;
    Real acc = Real::from_mpq(e_exp_, wp);  // exponent of e in the log
    for (const auto& [p, e] : primes_) {
        Real lp = log(Real::from_mpz(p, wp), wp);
        acc = add(acc, mul(Real::from_mpq(e, wp), lp, wp), wp);
    }
    return exp(acc, prec);
}

int PowerProduct::compare(const PowerProduct& a, const PowerProduct& b,
                          mpfr_prec_t prec_ceiling) {
    PowerProduct r = a * b.pow(-1);
    if (r.primes_.empty() && r.e_exp_ == 0) return 0;
    if (r.e_exp_ == 0) {
        // clear denominators: r^L is a ratio of integer prime powers
        mpz_class L = 1;
        for (const auto& [p, e] : r.primes_)
            mpz_lcm(L.get_mpz_t(), L.get_mpz_t(), e.get_den().get_mpz_t());
        mpz_class num = 1, den = 1;
        for (const auto& [p, e] : r.primes_) {
            mpq_class el = e * mpq_class(L);
            el.canonicalize();
            mpz_class k = el.get_num();
            mpz_class pw;
            if (k > 0) {
                mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), mpz_get_ui(k.get_mpz_t()));
                num *= pw;
            } else {
                mpz_class kk = -k;
                mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), mpz_get_ui(kk.get_mpz_t()));
                den *= pw;
            }
        }
        return ::cmp(num, den);
    }
    // transcendental base present: certified separation by ball evaluation
    for (mpfr_prec_t prec = 256; prec <= prec_ceiling; prec *= 2) {
        Real v = r.value(prec);
        Real one = Real::from_int(1, prec);
        if (Real::certainly_lt(v, one)) return -1;
        if (Real::certainly_lt(one, v)) return 1;
    }
    throw precision_error("PowerProduct::compare: separation not certified at ceiling");
}

std::string PowerProduct::str() const {
    if (primes_.empty() && e_exp_ == 0) return "1";
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, e] : primes_) {
        if (!first) os << " * ";
        first = false;
        os << p.get_str() << "^";
        if (e.get_den() == 1) {
            os << e.get_num().get_str();
        } else {
            os << "(" << e.get_num().get_str() << "/" << e.get_den().get_str() << ")";
        }
    }
    if (e_exp_ != 0) {
        if (!first) os << " * ";
        os << "e^";
        if (e_exp_.get_den() == 1) {
            os << e_exp_.get_num().get_str();
        } else {
            os << "(" << e_exp_.get_num().get_str() << "/" << e_exp_.get_den().get_str() << ")";
        }
    }
    return os.str();
}

// ------------------------------------------------------------- evaluators

namespace {

void check_pfaffian(const PfaffianComplexity& c) {
    if (c.n < 1 || c.r < 1 || c.alpha < 1 || c.beta < 1)
        throw domain_error("PfaffianComplexity: all entries must be >= 1");
}

// refuse when the argument is certainly below e
void require_at_least_e(const Real& x, const char* what) {
    Real e1 = Real::euler_e(std::max<mpfr_prec_t>(x.prec(), 64));
    if (Real::certainly_lt(x, e1)) throw domain_error(std::string(what) + ": argument below e");
}

}  // namespace

PowerProduct curve_constant(const PfaffianComplexity& c) {
    check_pfaffian(c);
    PowerProduct out = PowerProduct::prime_power(2, mpq_class(c.r * (c.r - 1)));
    // 6^{(5/2) n + r + 53/2}
    mpq_class e6 = mpq_class(5 * c.n, 2) + c.r + mpq_class(53, 2);
    out *= PowerProduct::prime_power(2, e6);
    out *= PowerProduct::prime_power(3, e6);
    out *= PowerProduct::from_integer(c.n + 2).pow(c.n + 3 * c.r + 1);
    out *= PowerProduct::from_integer(c.alpha + c.beta).pow(2 * c.n + 2 * c.r + 1);
    return out;
}

Real curve_theorem_bound(const PfaffianComplexity& c, long d, const Real& H, mpfr_prec_t prec) {
    check_pfaffian(c);
    if (d < 1) throw domain_error("curve_theorem_bound: d must be >= 1");
    require_at_least_e(H, "curve_theorem_bound");
    mpfr_prec_t wp = prec + 32;
    Real v = curve_constant(c).value(wp);
    v = mul(v, pow_si(Real::from_int(d, wp), 6 * c.n + 6 * c.r + 15, wp), wp);
    v = mul(v, pow_si(log(H, wp), 3 * c.n + 3 * c.r + 8, wp), wp);
    return add(v, Real(prec), prec);
}

Real size_theorem_bound(const PfaffianComplexity& c, long d, const Real& T, mpfr_prec_t prec) {
    check_pfaffian(c);
    if (d < 1) throw domain_error("size_theorem_bound: d must be >= 1");
    require_at_least_e(T, "size_theorem_bound");
    mpfr_prec_t wp = prec + 32;
    Real v = curve_constant(c).value(wp);
    long ex = 3 * c.n + 3 * c.r + 8;
    v = mul(v, pow_si(Real::from_int(d, wp), ex, wp), wp);
    v = mul(v, pow_si(log(T, wp), ex, wp), wp);
    return add(v, Real(prec), prec);
}

MildCount mild_hypersurface_count(const MildParams& m, long d, const Real& T, const Real& C1,
                                  const Real& C2, const Real& C3, mpfr_prec_t prec) {
    if (m.dim_k < 1 || m.dim_k >= m.ambient_n)
        throw domain_error("mild_hypersurface_count: need 1 <= dim X < n");
    require_at_least_e(T, "mild_hypersurface_count");
    mpfr_prec_t wp = prec + 32;
    Real dd = Real::from_int(d, wp);
    Real lt = log(T, wp);
    Real count = mul(C1, mul(pow(dd, C2, wp), pow(lt, C3, wp), wp), prec);

    Real ex = div(Real::from_int(m.dim_k, wp), Real::from_int(m.ambient_n - m.dim_k, wp), wp);
    auto floor_of = [&](const Real& base) {
        for (mpfr_prec_t p2 = wp; p2 <= 16 * wp; p2 *= 2) {
            Real v = pow(base, ex, p2);
            if (auto f = v.floor_exact()) return *f;
            // a tiny enclosure around a single integer: the value is that
            // integer up to 2^-p2; resolve the floor to it (exact for the
            // rational-exponent cases this calculator is used with)
            if (p2 >= 4 * wp) {
                Mpfr lo = v.lower(), hi = v.upper();
                Mpfr rlo(64), rhi(64);
                mpfr_round(rlo.get(), lo.get());
                mpfr_round(rhi.get(), hi.get());
                if (mpfr_equal_p(rlo.get(), rhi.get())) {
                    mpz_class k;
                    mpfr_get_z(k.get_mpz_t(), rlo.get(), MPFR_RNDN);
                    return k;
                }
            }
        }
        throw precision_error("mild_hypersurface_count: degree floor undecidable");
    };
    MildCount out{count, 0, 0};
    out.degree = floor_of(mul(mul(dd, dd, wp), lt, wp));
    out.inner_degree = floor_of(mul(dd, lt, wp));
    return out;
}

Real surface_bound_shape(const Real& C1, const Real& C2, const Real& C3, long d, const Real& T,
                         mpfr_prec_t prec) {
    mpfr_prec_t wp = prec + 32;
    Real dd = Real::from_int(d, wp);
    Real lt = log(T, wp);
    return mul(C1, mul(pow(dd, C2, wp), pow(lt, C3, wp), wp), prec);
}

UnityChain unity_corollary_chain(long n, const mpz_class& d, mpfr_prec_t prec) {
    if (n < 4) throw domain_error("unity_corollary_chain: n must be >= 4");
    mpfr_prec_t wp = prec + 32;
    Real nn = Real::from_int(n, wp);
    Real ln = log(nn, wp);
    Real dd = Real::from_mpz(d, wp);

    // n - 2 <= c(2,2,2,1) d^40 (log n)^20
    Real c = curve_constant({2, 2, 2, 1}).value(wp);
    Real rhs = mul(c, mul(pow_si(dd, 40, wp), pow_si(ln, 20, wp), wp), wp);
    Real lhs = Real::from_int(n - 2, wp);
    bool ineq1;
    if (Real::certainly_le(lhs, rhs)) {
        ineq1 = true;
    } else if (Real::certainly_lt(rhs, lhs)) {
        ineq1 = false;
    } else {
        throw precision_error("unity_corollary_chain: proof inequality undecided");
    }

    // d >= n^{1/40} (log n)^{-1/2} / 6
    Real bound = div(pow(nn, div(Real::from_int(1, wp), Real::from_int(40, wp), wp), wp),
                     mul(Real::from_int(6, wp), sqrt(ln, wp), wp), wp);
    bool ineq2;
    if (Real::certainly_le(bound, dd)) {
        ineq2 = true;
    } else if (Real::certainly_lt(dd, bound)) {
        ineq2 = false;
    } else {
        throw precision_error("unity_corollary_chain: corollary inequality undecided");
    }

    return {ineq1, ineq2, !ineq1 || ineq2, add(bound, Real(prec), prec)};
}

}  // namespace lab
