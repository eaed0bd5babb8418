#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "lab/ball.hpp"

namespace lab {

// Univariate polynomial with exact rational coefficients, coefficient of x^i
// at index i.  The zero polynomial has an empty coefficient vector.
class PolyQ {
  public:
    PolyQ() = default;
    explicit PolyQ(std::vector<mpq_class> coeffs);
    static PolyQ constant(const mpq_class& c);
    static PolyQ x();
    static PolyQ monomial(const mpq_class& c, unsigned deg);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const mpq_class& leading() const;
    mpq_class coeff(size_t i) const { return i < c_.size() ? c_[i] : mpq_class(0); }
    const std::vector<mpq_class>& coeffs() const { return c_; }

    PolyQ derivative() const;
    mpq_class evaluate(const mpq_class& x) const;
    Complex evaluate(const Complex& x, mpfr_prec_t prec) const;
    Real evaluate(const Real& x, mpfr_prec_t prec) const;

    PolyQ monic() const;
    // substitute x -> x + s
    PolyQ shift(const mpq_class& s) const;
    // substitute x -> a x
    PolyQ scale_arg(const mpq_class& a) const;

    // content c and primitive integer part p with *this = c * p,
    // p having positive leading coefficient and coprime integer coefficients
    std::pair<mpq_class, std::vector<mpz_class>> content_primitive() const;

    static PolyQ from_integer_coeffs(const std::vector<mpz_class>& z);

    // deterministic total order: degree first, then coefficients from the
    // leading one down
    static int cmp(const PolyQ& a, const PolyQ& b);

    std::string str() const;  // human-readable, variable "x"

    friend PolyQ operator+(const PolyQ& a, const PolyQ& b);
    friend PolyQ operator-(const PolyQ& a, const PolyQ& b);
    friend PolyQ operator*(const PolyQ& a, const PolyQ& b);
    friend PolyQ operator*(const mpq_class& a, const PolyQ& b);
    friend PolyQ operator-(const PolyQ& a);
    friend bool operator==(const PolyQ& a, const PolyQ& b) { return a.c_ == b.c_; }

  private:
    void normalize();
    std::vector<mpq_class> c_;
};

// quotient and remainder; divisor must be nonzero
std::pair<PolyQ, PolyQ> divrem(const PolyQ& a, const PolyQ& b);
// exact division; throws if not divisible
PolyQ divexact(const PolyQ& a, const PolyQ& b);
// monic gcd
PolyQ gcd(const PolyQ& a, const PolyQ& b);
// monic product of the distinct irreducible factors
PolyQ squarefree_part(const PolyQ& a);
PolyQ pow(const PolyQ& a, unsigned e);

// ----- integer polynomial helpers (used by gcd and the factorizer) -----

using PolyZ = std::vector<mpz_class>;  // coefficient of x^i at index i

void polyz_normalize(PolyZ& a);
int polyz_degree(const PolyZ& a);
mpz_class polyz_content(const PolyZ& a);
PolyZ polyz_primitive(const PolyZ& a);  // positive leading coefficient
PolyZ polyz_mul(const PolyZ& a, const PolyZ& b);
PolyZ polyz_sub(const PolyZ& a, const PolyZ& b);
// primitive gcd via the subresultant polynomial remainder sequence
PolyZ polyz_gcd(const PolyZ& a, const PolyZ& b);
PolyZ polyz_derivative(const PolyZ& a);

}  // namespace lab
