#pragma once

#include <utility>
#include <vector>

#include "lab/poly.hpp"

namespace lab {

// content * prod factors[i]^mult[i] == input, each factor irreducible over Q,
// primitive with integer coefficients and positive leading coefficient,
// ordered by (degree, coefficients from the leading one down).
struct Factorization {
    mpq_class content;
    std::vector<std::pair<PolyQ, unsigned>> factors;

    PolyQ expand() const;
};

Factorization factor_over_q(const PolyQ& p);

// true if p is irreducible over Q (degree >= 1)
bool is_irreducible(const PolyQ& p);

// Rabin irreducibility test of the primitive part modulo the odd prime p
// (p < 2^31, p not dividing the leading coefficient); a positive answer
// certifies irreducibility over Q.
bool irreducible_mod_p(const PolyQ& f, unsigned long p);

}  // namespace lab
