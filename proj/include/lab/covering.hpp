#pragma once

// Constructive determinant method on graphs of smooth functions: the
// covering-count formula evaluators, a rigorous subinterval length that
// forces the monomial determinant of nearby bounded-height points to
// vanish, exact curve fitting per part, and the rational graph point
// enumerator.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lab/ball.hpp"
#include "lab/poly.hpp"

namespace lab {

struct DetParams {
    long delta = 1;  // curve degree
    long d = 1;      // number-field degree (formula parameter)
    Real T;          // size-height bound, >= 1
    Real L;          // interval length, >= 1/T^{4d}

    long D() const { return (delta + 1) * (delta + 2) / 2; }
    void validate() const;
};

// Oracle for a C^(D-1) function on [lo, hi]: rigorous evaluation of the j-th
// derivative, plus sup bounds B_j >= sup_I |f^{(j)}| / j! used by the
// determinant estimate (order 0 bounds |f| itself).
struct SmoothFunctionOracle {
    std::string name;
    mpq_class lo, hi;
    // evaluate the order-th derivative over the ball x
    std::function<Real(const Real& x, int order, mpfr_prec_t prec)> eval;
    // derivative_sup_bounds[j] >= sup |f^(j)|/j!  (as exact rationals)
    std::vector<mpq_class> derivative_sup_bounds;

    Real value(const Real& x, mpfr_prec_t prec) const { return eval(x, 0, prec); }
};

// builtins used by the experiments and the CLI
SmoothFunctionOracle oracle_quadratic();     // x^2 on [0,1]
SmoothFunctionOracle oracle_cubic_minus_x(); // x^3 - x on [0,1]
SmoothFunctionOracle oracle_cos2pi(const mpq_class& lo, const mpq_class& hi);

// a plane curve sum c_{ij} x^i y^j of degree <= delta, graded-lex key order,
// first nonzero coefficient normalized to 1
struct PlaneCurve {
    long delta = 1;
    std::map<std::pair<long, long>, mpq_class> coeffs;

    mpq_class evaluate(const mpq_class& x, const mpq_class& y) const;
    bool vanishes_at(const mpq_class& x, const mpq_class& y) const;
};

struct CoveringCertificate {
    DetParams params;
    std::vector<std::pair<mpq_class, mpq_class>> parts;  // [lo, hi) except the last
    std::vector<PlaneCurve> curves;                      // one per part
    std::vector<std::pair<mpq_class, mpq_class>> points; // the certified points

    // exact re-verification: every point on its part's curve
    bool verify() const;
    std::string to_json() const;
};

// 6 (D!)^{2d/(D(D-1))} (L T^{4d})^{4/(3(delta+3))} A
Real lemma_count_bound(const DetParams& p, const Real& A, mpfr_prec_t prec);

// 54 D (D!)^{2d/(D(D-1))} (L T^{4d})^{4/(3(delta+3))} log(e L T^{4d});  T >= e
Real prop_count_bound(const DetParams& p, mpfr_prec_t prec);

// Length l > 0 such that any D graph points with rational coordinates of
// size-height <= T inside one subinterval of length l satisfy a linear
// relation among the monomials x^i y^j (i+j <= delta), hence lie on one
// curve of degree <= delta.  Derivation (all quantities per the oracle):
//   the D x D monomial-matrix determinant at D graph points factors through
//   divided differences, giving |det| <= D! l^{D(D-1)/2} prod_j max_k
//   sup|g_k^{(j)}|/j! with g_k = x^a f^b; the product is at most
//   (2^{j+2 delta} (XB)^delta) per order j with X = max(1,sup|x|),
//   B = max(1, B_0..B_{D-1}); a nonzero determinant of height-<=T rationals
//   is at least T^{-2 delta D} by clearing denominators.  Forcing the upper
//   bound below the lower bound and using 2 delta D/(D-1) = 4 delta/(delta+3)
//   yields l = (1/4) (D!)^{-2/(D(D-1))} (4 X B T^2)^{-4/(delta+3)}.
Real subinterval_length(const DetParams& p, const SmoothFunctionOracle& oracle,
                        mpfr_prec_t prec);

CoveringCertificate build_covering(const SmoothFunctionOracle& oracle, const DetParams& p,
                                   const std::vector<std::pair<mpq_class, mpq_class>>& points,
                                   mpfr_prec_t prec);

// All graph points with both coordinates rational of size-height <= T:
// scans abscissas a/b with max(b, |a/b|) <= T, detects rational ordinates by
// reconstruction, re-verifies at doubled precision.
std::vector<std::pair<mpq_class, mpq_class>> enumerate_rational_graph_points(
    const SmoothFunctionOracle& oracle, const mpq_class& lo, const mpq_class& hi,
    const mpz_class& T, mpfr_prec_t prec);

}  // namespace lab
