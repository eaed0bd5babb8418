#pragma once

// Legendre-family period lattices, fundamental-region reduction of the
// parameter, rigorous Weierstrass evaluation, and the sampled verifiers for
// the distance/upper/lower/derivative-growth inequalities.
//
// Conventions: E_lambda : y^2 = x(x-1)(x-lambda) with invariant differential
// dX/(2 sqrt(X(X-1)(X-lambda))).  For lambda in the closed lens
//     |lambda| <= 1,  |1-lambda| <= 1,  Re lambda <= 1/2
// the period basis is  omega1 = pi F(1/2,1/2;1;lambda),
// omega2 = i pi F(1/2,1/2;1;1-lambda),  and tau = omega2/omega1 lies in the
// standard fundamental domain.  X_lambda = wp + (lambda+1)/3 is the Legendre
// abscissa; it equals wp - wp(omega2/2).

#include <optional>
#include <utility>
#include <vector>

#include "lab/ball.hpp"
#include "lab/poly.hpp"

namespace lab {

struct Lattice {
    Complex omega1, omega2, tau;
};

// Gauss hypergeometric F(1/2,1/2;1;z): direct series for small |z|, the
// logarithmic connection series for z near 1, one descending Landen step in
// between.
Complex hyp2f1_half(const Complex& z, mpfr_prec_t prec);

// periods of E_lambda; requires lambda inside the convergence-managed domain
// (the lens and its immediate surroundings); verifies tau is fundamental
Lattice periods(const Complex& lambda, mpfr_prec_t prec);

// membership in the closed lens, exact for gaussian rationals
bool in_region_exact(const mpq_class& re, const mpq_class& im);
// ball version: true when not certainly outside
bool in_region_within_radius(const Complex& lam);

enum class ScalingClass { IDENTITY, SQRT_ONE_MINUS_LAMBDA, SQRT_LAMBDA };

struct FundamentalOrbit {
    Complex lambda_input;
    Complex lambda_rep;
    // set when the reduction ran on exact gaussian-rational input
    std::optional<std::pair<mpq_class, mpq_class>> lambda_rep_exact;
    ScalingClass scaling_class = ScalingClass::IDENTITY;
    bool epsilon_is_i = false;  // the unit epsilon in {1, i}
    int orbit_index = 0;        // which of the six maps produced the representative
    bool tie_flagged = false;   // more than one admissible representative
};

FundamentalOrbit reduce_lambda(const Complex& lambda_prime, mpfr_prec_t prec);
FundamentalOrbit reduce_lambda_exact(const mpq_class& re, const mpq_class& im,
                                     mpfr_prec_t prec);

// lattice scale factor c with Lambda_{lambda'} = c * Lambda_{lambda_rep}
Complex orbit_scale(const FundamentalOrbit& orbit, mpfr_prec_t prec);

// Weierstrass wp for the lattice, q-series evaluation
Complex wp(const Complex& z, const Lattice& L, mpfr_prec_t prec);
// wp(omega2/2) = -(lambda+1)/3 for the hypergeometric basis
Complex wp_half_omega2(const Lattice& L, mpfr_prec_t prec);

// X_lambda(z), evaluated through both defining forms; their enclosures must
// intersect and the tighter one is returned
Complex x_lambda(const Complex& z, const Complex& lambda, const Lattice& L, mpfr_prec_t prec);

// minimal distance d(z, Lambda)
Real lattice_distance(const Complex& z, const Lattice& L, mpfr_prec_t prec);

// evaluation context for one reduced parameter
struct OrbitContext {
    FundamentalOrbit orbit;
    Complex lambda;   // the representative
    Lattice L;        // its hypergeometric period basis
    Complex e2;       // cached wp(omega2/2)
    mpfr_prec_t prec; // precision the cache was built at
};
OrbitContext make_context(const FundamentalOrbit& orbit, mpfr_prec_t prec);

// X_lambda through the context cache (both forms, intersected)
Complex x_lambda_ctx(const Complex& z, const OrbitContext& ctx, mpfr_prec_t prec);

// the parametrizing branch: X_lambda(b1 w1 + b2 w2) for the identity and
// sqrt(1-lambda) classes on U1 + edge, lambda/X_lambda on U2 for the
// sqrt(lambda) class
Complex f_lambda_prime(const Real& b1, const Real& b2, const OrbitContext& ctx,
                       mpfr_prec_t prec);

struct UpperLemmaReport {
    double max_ratio = 0.0;  // sup |wp(z)-wp(w2/2)| d(z,L)^2
    int samples_used = 0;
    int excluded_near_pole = 0;
};
UpperLemmaReport verify_upper_lemma(const Lattice& L, int samples, mpfr_prec_t prec);

struct LowerLemmaReport {
    double max_product = 0.0;      // sup |1/X(z)| exp(-pi Im tau) over B_eps
    double lambda_exp_ratio = 0.0; // |lambda| exp(pi Im tau)
    int samples_used = 0;
};
LowerLemmaReport verify_lower_lemma(const Complex& lambda, const mpq_class& eps, int samples,
                                    mpfr_prec_t prec);

struct DistanceLemmaReport {
    bool holds = false;
    double worst_margin = 0.0;  // min of (d(z,L) - |w2|/60)/|w2| over samples
    mpq_class witness_b1 = 0, witness_b2 = 0;
};
DistanceLemmaReport verify_distance_lemma(const Complex& lambda, int samples, mpfr_prec_t prec);

struct DerivativeBoundsReport {
    std::vector<double> per_n;  // per_n[k]: sup-estimate of the scaled (k+1)-th derivative / (k+1)!
    double a1_fit = 0.0, a2_fit = 0.0;
    bool growth_ok = false;  // per_n <= a1 a2^n with the fitted constants
};
DerivativeBoundsReport derivative_bounds(const OrbitContext& ctx, int n_max, mpfr_prec_t prec);

struct MildPoint {
    Real coords[4];
};
// (t1, 1/30 + (28/30) t2, Re f/T, Im f/T); T_int must dominate |f|
MildPoint mild_map(const OrbitContext& ctx, const mpq_class& t1, const mpq_class& t2, long T_int,
                   mpfr_prec_t prec);

// deterministic low-discrepancy samples in [0,1]^2 (dyadic rationals)
std::vector<std::pair<mpq_class, mpq_class>> sample_unit_square(int count);

// the default 20-point grid of exact rational lens parameters used by the
// verifier sweeps
std::vector<std::pair<mpq_class, mpq_class>> region_grid_20();

}  // namespace lab
