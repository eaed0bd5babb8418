#pragma once

#include <vector>

#include "lab/ball.hpp"
#include "lab/poly.hpp"

namespace lab {

// An algebraic number as (minimal polynomial, isolating ball).  The minimal
// polynomial is irreducible with coprime integer coefficients and positive
// leading coefficient; the ball contains exactly one of its roots.
struct AlgebraicNumber {
    PolyQ min_poly;
    Complex approx;

    int degree() const { return min_poly.degree(); }
};

AlgebraicNumber algebraic_from_rational(const mpq_class& x,
                                        mpfr_prec_t prec = default_prec());

// All roots of an irreducible integer polynomial as algebraic numbers,
// in the deterministic isolate_roots order.
std::vector<AlgebraicNumber> algebraic_roots(const PolyQ& min_poly,
                                             mpfr_prec_t prec = default_prec());

// Smallest positive integer gamma with gamma * alpha an algebraic integer,
// read off the valuations of the minimal polynomial's coefficients.
mpz_class denominator_of(const AlgebraicNumber& a);

// Mahler measure |lc| * prod max(1, |root|) of a squarefree polynomial.
Real mahler_measure(const PolyQ& p, mpfr_prec_t prec);

// Multiplicative Weil height: Mahler measure of the minimal polynomial to
// the power 1/degree.
Real weil_height_algebraic(const AlgebraicNumber& a, mpfr_prec_t prec);

// H^size: max over conjugates sigma of {den(alpha), |sigma(alpha)|}.
Real size_height(const AlgebraicNumber& a, mpfr_prec_t prec);

}  // namespace lab
