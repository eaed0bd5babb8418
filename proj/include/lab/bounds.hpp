#pragma once

#include <gmpxx.h>

#include <map>
#include <string>

#include "lab/ball.hpp"

namespace lab {

// Exact product  prod p_i^{e_i} * e^{q}  with prime bases p_i, rational
// exponents (half-integers occur), and an optional power of Euler's number.
// Comparisons are decided exactly when no transcendental base is involved,
// by clearing exponent denominators and comparing integers; otherwise by
// ball evaluation at escalating precision with certified separation.
class PowerProduct {
  public:
    PowerProduct() = default;  // the number 1

    static PowerProduct from_integer(const mpz_class& n);  // n >= 1, factorized
    static PowerProduct prime_power(const mpz_class& p, const mpq_class& e);
    static PowerProduct e_power(const mpq_class& e);

    PowerProduct& operator*=(const PowerProduct& o);
    friend PowerProduct operator*(PowerProduct a, const PowerProduct& b) { return a *= b; }
    PowerProduct pow(const mpq_class& e) const;

    Real value(mpfr_prec_t prec) const;
    bool is_rational_product() const { return e_exp_ == 0; }

    // -1 / 0 / +1 for a < b, a == b, a > b
    static int compare(const PowerProduct& a, const PowerProduct& b,
                       mpfr_prec_t prec_ceiling = 1 << 14);

    std::string str() const;  // e.g. "2^20 * 3^9 * 6^(67/2)" without the 6 merge

    const std::map<mpz_class, mpq_class>& prime_exponents() const { return primes_; }
    const mpq_class& e_exponent() const { return e_exp_; }

  private:
    std::map<mpz_class, mpq_class> primes_;
    mpq_class e_exp_ = 0;
};

// complexity tuple (n, r, alpha, beta) of an implicitly defined Pfaffian curve
struct PfaffianComplexity {
    long n = 1, r = 1, alpha = 1, beta = 1;
};

// parameters of a (J, A, C)-mild parametrization of a k-dimensional set in
// R^ambient
struct MildParams {
    long J = 1;
    double A = 1.0, C = 0.0;
    long ambient_n = 2;
    long dim_k = 1;
};

// 2^{r(r-1)} 6^{(5/2)n + r + 53/2} (n+2)^{n+3r+1} (alpha+beta)^{2n+2r+1}
PowerProduct curve_constant(const PfaffianComplexity& c);

// curve_constant * d^{6n+6r+15} * (log H)^{3n+3r+8};  H >= e
Real curve_theorem_bound(const PfaffianComplexity& c, long d, const Real& H, mpfr_prec_t prec);

// curve_constant * d^{3n+3r+8} * (log T)^{3n+3r+8};  T >= e
Real size_theorem_bound(const PfaffianComplexity& c, long d, const Real& T, mpfr_prec_t prec);

struct MildCount {
    Real count;              // C1 d^C2 (log T)^C3
    mpz_class degree;        // floor((d^2 log T)^{k/(n-k)})
    mpz_class inner_degree;  // floor((d log T)^{k/(n-k)})
};
MildCount mild_hypersurface_count(const MildParams& m, long d, const Real& T, const Real& C1,
                                  const Real& C2, const Real& C3, mpfr_prec_t prec);

// C1 d^C2 (log T)^C3
Real surface_bound_shape(const Real& C1, const Real& C2, const Real& C3, long d, const Real& T,
                         mpfr_prec_t prec);

struct UnityChain {
    bool proof_inequality_ok;   // n-2 <= c(2,2,2,1) d^40 (log n)^20
    bool corollary_ok;          // d >= n^{1/40} (log n)^{-1/2} / 6
    bool implication_ok;        // material implication of the two
    Real bound_value;           // the corollary's right-hand side
};
UnityChain unity_corollary_chain(long n, const mpz_class& d, mpfr_prec_t prec);

}  // namespace lab
