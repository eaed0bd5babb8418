#pragma once

// Exact torsion machinery for elliptic curves over Q: division polynomials,
// polynomials of exact-order-n abscissas, torsion field degrees for Legendre
// curves (exact factor list + enclosure matching), torsion-representative
// counts in the period-coordinate regions, and the roots-of-unity and
// elliptic Galois-bound experiments.

#include <optional>
#include <string>
#include <vector>

#include "lab/algebraic.hpp"
#include "lab/ball.hpp"
#include "lab/factor.hpp"
#include "lab/poly.hpp"

namespace lab {

// Y^2 = 4X^3 - g2 X - g3, or the Legendre curve y^2 = x(x-1)(x-lambda).
// Division polynomials are returned in the curve's native abscissa.
struct CurveQ {
    static CurveQ short_model(const mpq_class& g2, const mpq_class& g3);
    static CurveQ legendre(const mpq_class& lambda);

    bool is_legendre = false;
    mpq_class g2, g3;
    mpq_class lambda;

    // y^2 = x^3 + a x + b with a = -g2/4, b = -g3/4 (Legendre: shifted model)
    std::pair<mpq_class, mpq_class> short_ab() const;
    // native abscissa = short abscissa + shift
    mpq_class shift() const;
    void validate() const;  // nonzero discriminant
};

struct DivisionPair {
    PolyQ A;  // monic, degree n^2
    PolyQ B;  // degree n^2 - 1, leading coefficient n^2
};

struct TorsionPoint {
    long n = 2, k = 1, l = 0;  // z = (k/n) w1 + (l/n) w2, gcd(k,l,n) = 1
};

// [n](X, Y) = (A_n(X)/B_n(X), ...) via the psi-polynomial recursion;
// invariants (degrees, leading coefficient, coprimality) checked on return
DivisionPair division_pair(const CurveQ& curve, long n);

// polynomial whose roots are the abscissas of points of exact order n,
// primitive integer coefficients, positive leading coefficient
PolyQ primitive_division(const CurveQ& curve, long n);

enum class TorsionRegion { U1_EDGE, U2 };

// exact count of m in 1..n-1 with m (k/n, l/n) mod 1 inside the region
long representatives_in_region(const TorsionPoint& P, TorsionRegion region);

struct TorsionDegree {
    long degree_x = 0;       // [Q(x(P)) : Q], degree of the matched factor
    long degree_low = 0;     // = degree_x
    long degree_high = 0;    // = 2 degree_x, bracketing [Q(P) : Q]
    int matched_factor = -1; // index into the factor list of primitive_division
    int matched_T = -1;      // which of {0, 1, lambda} links X_{lambda'} to x(P)
    bool multiple_T = false;
};

// degree of the matched irreducible factor of the primitive division
// polynomial at the analytically computed abscissa of P
TorsionDegree torsion_field_degree(const mpq_class& lambda, const TorsionPoint& P,
                                   mpfr_prec_t prec);

struct AbscissaHeightReport {
    double max_log_height = 0.0;  // max over factors of log H of the abscissa
    double max_ratio = 0.0;       // max h / (1 + h(lambda))
    int factors = 0;
};
AbscissaHeightReport abscissa_height_check(const mpq_class& lambda, long n, mpfr_prec_t prec);

// cyclotomic polynomial and the minimal polynomial of cos(2 pi / n)
PolyQ cyclotomic(long n);
PolyQ cos_minimal_polynomial(long n);  // n >= 3

struct UnityRow {
    long n = 0;
    mpz_class phi;
    bool corollary_ok = false;   // phi(n) >= n^{1/40} (log n)^{-1/2} / 6
    double bound_value = 0.0;
    bool height_checked = false; // exact H(cos(2 pi k/n)) <= 4 verification ran
    bool height_ok = false;
    bool minpoly_irreducible = false;
};
// rows for 4 <= n <= n_max; exact cosine-height verification for n <= height_cap
std::vector<UnityRow> unity_experiment(long n_max, long height_cap, mpfr_prec_t prec);

struct EllipticCell {
    mpq_class lambda;
    long n = 0, k = 0, l = 0;
    long degree_low = 0, degree_high = 0;
    double h_abscissa = 0.0;
    double bound_value = 0.0;  // delta1 (1+h(lambda))^{-delta2} n^{delta3}
    long reps_u1 = 0, reps_u2 = 0;
    std::string status;  // "ok" or the error category
};

struct EllipticExperiment {
    std::vector<EllipticCell> cells;
    double regression_exponent = 0.0;  // log-log slope of min degree vs n
};

EllipticExperiment elliptic_experiment(const std::vector<mpq_class>& lambdas, long n_max,
                                       double delta1, double delta2, double delta3,
                                       mpfr_prec_t prec, int workers = 1);

// canonical primitive (k,l) orbit representatives modulo (k,l) ~ -(k,l)
std::vector<std::pair<long, long>> primitive_orbit_reps(long n);

}  // namespace lab
