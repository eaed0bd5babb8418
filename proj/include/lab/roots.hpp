#pragma once

#include <vector>

#include "lab/ball.hpp"
#include "lab/poly.hpp"

namespace lab {

// Enclosures of all complex roots of a squarefree polynomial: pairwise
// disjoint discs, each containing exactly one root, every root covered.
// Aberth refinement of the midpoints, then validated with the classical
// bound min_i |z - alpha_i| <= deg * |p(z)/p'(z)| and a disjointness check;
// precision escalates (up to the ceiling) until validation succeeds.
// Deterministic ordering: by real part, then imaginary part of midpoints.
std::vector<Complex> isolate_roots(const PolyQ& p, mpfr_prec_t prec,
                                   mpfr_prec_t prec_ceiling = 4096);

}  // namespace lab
