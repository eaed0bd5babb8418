#include "lab/poly.hpp"

#include <algorithm>
#include <sstream>

#include "lab/errors.hpp"

namespace lab {

PolyQ::PolyQ(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) {
    for (auto& c : c_) c.canonicalize();
    normalize();
}

void PolyQ::normalize() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

PolyQ PolyQ::constant(const mpq_class& c) { return PolyQ(std::vector<mpq_class>{c}); }

PolyQ PolyQ::x() { return PolyQ(std::vector<mpq_class>{0, 1}); }

PolyQ PolyQ::monomial(const mpq_class& c, unsigned deg) {
    std::vector<mpq_class> v(deg + 1, mpq_class(0));
    v[deg] = c;
    return PolyQ(std::move(v));
}

const mpq_class& PolyQ::leading() const {
    if (is_zero()) throw domain_error("leading coefficient of the zero polynomial");
    return c_.back();
}

PolyQ PolyQ::derivative() const {
    if (degree() <= 0) return PolyQ();
    std::vector<mpq_class> d(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) d[i - 1] = mpq_class(static_cast<long>(i)) * c_[i];
    return PolyQ(std::move(d));
}

mpq_class PolyQ::evaluate(const mpq_class& x) const {
    mpq_class acc = 0;
    for (size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
    return acc;
}

Complex PolyQ::evaluate(const Complex& x, mpfr_prec_t prec) const {
    Complex acc(prec);
    for (size_t i = c_.size(); i-- > 0;)
        acc = add(mul(acc, x, prec), Complex::from_mpq(c_[i], 0, prec), prec);
    return acc;
}

Real PolyQ::evaluate(const Real& x, mpfr_prec_t prec) const {
    Real acc(prec);
    for (size_t i = c_.size(); i-- > 0;)
        acc = add(mul(acc, x, prec), Real::from_mpq(c_[i], prec), prec);
    return acc;
}

PolyQ PolyQ::monic() const {
    if (is_zero()) return *this;
    PolyQ r = *this;
    mpq_class lc = c_.back();
    for (auto& c : r.c_) c /= lc;
    return r;
}

PolyQ PolyQ::shift(const mpq_class& s) const {
    // Horner: p(x+s) accumulated coefficient by coefficient
    PolyQ acc;
    PolyQ lin(std::vector<mpq_class>{s, 1});
    for (size_t i = c_.size(); i-- > 0;) acc = acc * lin + PolyQ::constant(c_[i]);
    return acc;
}

PolyQ PolyQ::scale_arg(const mpq_class& a) const {
    std::vector<mpq_class> v = c_;
    mpq_class p = 1;
    for (size_t i = 0; i < v.size(); ++i) {
        v[i] *= p;
        p *= a;
    }
    return PolyQ(std::move(v));
}

std::pair<mpq_class, std::vector<mpz_class>> PolyQ::content_primitive() const {
    if (is_zero()) return {mpq_class(0), {}};
    mpz_class den = 1;
    for (const auto& c : c_) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    std::vector<mpz_class> z(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) {
        mpq_class t = c_[i] * mpq_class(den);
        t.canonicalize();
        z[i] = t.get_num();
    }
    mpz_class cont = polyz_content(z);
    if (z.back() < 0) cont = -cont;
    for (auto& v : z) v /= cont;
    mpq_class content(cont, den);
    content.canonicalize();
    return {content, z};
}

PolyQ PolyQ::from_integer_coeffs(const std::vector<mpz_class>& z) {
    std::vector<mpq_class> v(z.size());
    for (size_t i = 0; i < z.size(); ++i) v[i] = mpq_class(z[i]);
    return PolyQ(std::move(v));
}

int PolyQ::cmp(const PolyQ& a, const PolyQ& b) {
    if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
    for (size_t i = a.c_.size(); i-- > 0;) {
        int c = ::cmp(a.c_[i], b.c_[i]);
        if (c != 0) return c;
    }
    return 0;
}

std::string PolyQ::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = c_.size(); i-- > 0;) {
        if (c_[i] == 0) continue;
        mpq_class c = c_[i];
        if (!first) {
            os << (c > 0 ? " + " : " - ");
            if (c < 0) c = -c;
        }
        first = false;
        if (i == 0 || c != 1) {
            os << c.get_num().get_str();
            if (c.get_den() != 1) os << "/" << c.get_den().get_str();
            if (i > 0) os << "*";
        }
        if (i > 0) {
            os << "x";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

PolyQ operator+(const PolyQ& a, const PolyQ& b) {
    std::vector<mpq_class> v(std::max(a.c_.size(), b.c_.size()), mpq_class(0));
    for (size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) v[i] += b.c_[i];
    return PolyQ(std::move(v));
}

PolyQ operator-(const PolyQ& a, const PolyQ& b) {
    std::vector<mpq_class> v(std::max(a.c_.size(), b.c_.size()), mpq_class(0));
    for (size_t i = 0; i < a.c_.size(); ++i) v[i] += a.c_[i];
    for (size_t i = 0; i < b.c_.size(); ++i) v[i] -= b.c_[i];
    return PolyQ(std::move(v));
}

PolyQ operator*(const PolyQ& a, const PolyQ& b) {
    if (a.is_zero() || b.is_zero()) return PolyQ();
    std::vector<mpq_class> v(a.c_.size() + b.c_.size() - 1, mpq_class(0));
    for (size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (size_t j = 0; j < b.c_.size(); ++j) v[i + j] += a.c_[i] * b.c_[j];
    }
    return PolyQ(std::move(v));
}

PolyQ operator*(const mpq_class& a, const PolyQ& b) {
    std::vector<mpq_class> v = b.c_;
    for (auto& c : v) c *= a;
    return PolyQ(std::move(v));
}

PolyQ operator-(const PolyQ& a) { return mpq_class(-1) * a; }

std::pair<PolyQ, PolyQ> divrem(const PolyQ& a, const PolyQ& b) {
    if (b.is_zero()) throw domain_error("polynomial division by zero");
    PolyQ r = a;
    std::vector<mpq_class> q;
    int db = b.degree();
    if (r.degree() >= db) q.assign(r.degree() - db + 1, mpq_class(0));
    while (!r.is_zero() && r.degree() >= db) {
        mpq_class f = r.leading() / b.leading();
        int k = r.degree() - db;
        q[k] = f;
        r = r - PolyQ::monomial(f, k) * b;
    }
    return {PolyQ(std::move(q)), r};
}

PolyQ divexact(const PolyQ& a, const PolyQ& b) {
    auto [q, r] = divrem(a, b);
    if (!r.is_zero()) throw domain_error("divexact: division not exact");
    return q;
}

PolyQ gcd(const PolyQ& a, const PolyQ& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    PolyZ za = a.content_primitive().second;
    PolyZ zb = b.content_primitive().second;
    PolyZ g = polyz_gcd(za, zb);
    return PolyQ::from_integer_coeffs(g).monic();
}

PolyQ squarefree_part(const PolyQ& a) {
    if (a.degree() <= 0) return a.is_zero() ? a : PolyQ::constant(1);
    PolyQ g = gcd(a, a.derivative());
    return divexact(a, g).monic();
}

PolyQ pow(const PolyQ& a, unsigned e) {
    PolyQ acc = PolyQ::constant(1);
    PolyQ sq = a;
    while (e > 0) {
        if (e & 1) acc = acc * sq;
        e >>= 1;
        if (e) sq = sq * sq;
    }
    return acc;
}

// ---------------------------------------------------------------- PolyZ

void polyz_normalize(PolyZ& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

int polyz_degree(const PolyZ& a) { return static_cast<int>(a.size()) - 1; }

mpz_class polyz_content(const PolyZ& a) {
    mpz_class g = 0;
    for (const auto& c : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g == 0 ? mpz_class(1) : g;
}

PolyZ polyz_primitive(const PolyZ& a) {
    PolyZ r = a;
    polyz_normalize(r);
    if (r.empty()) return r;
    mpz_class c = polyz_content(r);
    if (r.back() < 0) c = -c;
    for (auto& v : r) v /= c;
    return r;
}

PolyZ polyz_mul(const PolyZ& a, const PolyZ& b) {
    if (a.empty() || b.empty()) return {};
    PolyZ v(a.size() + b.size() - 1, mpz_class(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) v[i + j] += a[i] * b[j];
    }
    polyz_normalize(v);
    return v;
}

PolyZ polyz_sub(const PolyZ& a, const PolyZ& b) {
    PolyZ v(std::max(a.size(), b.size()), mpz_class(0));
    for (size_t i = 0; i < a.size(); ++i) v[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) v[i] -= b[i];
    polyz_normalize(v);
    return v;
}

PolyZ polyz_derivative(const PolyZ& a) {
    if (a.size() <= 1) return {};
    PolyZ d(a.size() - 1);
    for (size_t i = 1; i < a.size(); ++i) d[i - 1] = mpz_class(static_cast<long>(i)) * a[i];
    polyz_normalize(d);
    return d;
}

namespace {

// pseudo-remainder: exactly lc(b)^(deg a - deg b + 1) * a  mod b
PolyZ pseudo_rem(PolyZ a, const PolyZ& b) {
    int db = polyz_degree(b);
    const mpz_class& lb = b.back();
    int e = polyz_degree(a) - db + 1;
    while (!a.empty() && polyz_degree(a) >= db) {
        int k = polyz_degree(a) - db;
        mpz_class la = a.back();
        for (auto& c : a) c *= lb;
        PolyZ shifted(k, mpz_class(0));
        for (const auto& c : b) shifted.push_back(la * c);
        a = polyz_sub(a, shifted);
        --e;
    }
    if (e > 0 && !a.empty()) {
        mpz_class f;
        mpz_pow_ui(f.get_mpz_t(), lb.get_mpz_t(), static_cast<unsigned long>(e));
        for (auto& c : a) c *= f;
    }
    return a;
}

}  // namespace

PolyZ polyz_gcd(const PolyZ& a, const PolyZ& b) {
    PolyZ f = polyz_primitive(a), g = polyz_primitive(b);
    if (f.empty()) return g;
    if (g.empty()) return f;
    if (polyz_degree(f) < polyz_degree(g)) std::swap(f, g);
    // subresultant PRS
    mpz_class h = 1, s = 1;
    while (true) {
        int d = polyz_degree(f) - polyz_degree(g);
        PolyZ r = pseudo_rem(f, g);
        if (r.empty()) break;
        if (polyz_degree(r) == 0) return {mpz_class(1)};
        f = g;
        // divide by s * h^d
        mpz_class hd;
        mpz_pow_ui(hd.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(d));
        mpz_class div = s * hd;
        g = r;
        for (auto& c : g) c /= div;
        s = f.back();
        if (d >= 1) {
            mpz_class sd;
            mpz_pow_ui(sd.get_mpz_t(), s.get_mpz_t(), static_cast<unsigned long>(d));
            mpz_class hd1;
            mpz_pow_ui(hd1.get_mpz_t(), h.get_mpz_t(), static_cast<unsigned long>(d - 1));
            h = sd / hd1;
        }
    }
    return polyz_primitive(g);
}

}  // namespace lab
