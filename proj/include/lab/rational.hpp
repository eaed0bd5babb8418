#pragma once

#include <gmpxx.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lab/ball.hpp"

namespace lab {

// Multiplicative Weil height of a rational: max(|numerator|, denominator)
// of the reduced fraction.  H(0) = 1.
mpz_class weil_height(const mpq_class& x);

// H^size of a rational: max(denominator, |x|) as an exact rational.
mpq_class size_height_rational(const mpq_class& x);

// Euler totient via prime factorization.
mpz_class euler_phi(const mpz_class& n);

// Prime factorization of a positive integer (trial division + Pollard rho).
// Returned map is prime -> exponent.
std::map<mpz_class, unsigned> factor_integer(const mpz_class& n);

// The unique rational with denominator <= max_den lying inside the ball, if
// any.  Requires rad < 1/(2 max_den^2) so that at most one candidate exists;
// candidates are read off the continued fraction of the midpoint.
std::optional<mpq_class> rational_reconstruct(const Real& x, const mpz_class& max_den);

// Parse "p/q" or "p"; throws domain_error on garbage.
mpq_class parse_rational(const std::string& s);
std::string rational_str(const mpq_class& q);

}  // namespace lab
