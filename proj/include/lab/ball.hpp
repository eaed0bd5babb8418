#pragma once

// Midpoint-radius arithmetic over MPFR.
//
// Every operation returns an enclosure: the output ball contains the exact
// image of every point of the input balls.  Midpoints are computed at the
// requested precision with round-to-nearest; the rounding error (one ulp,
// from the MPFR ternary value) is absorbed into the radius, which is kept at
// a fixed small precision and always rounded upward.
//
// Composite functions (complex sqrt/exp/log, 2F1, theta sums) are built from
// these primitives, so rigor is inherited rather than re-argued per formula.

#include <gmpxx.h>
#include <mpfr.h>

#include <optional>
#include <string>

#include "lab/mpwrap.hpp"

namespace lab {

inline constexpr mpfr_prec_t kRadPrec = 64;

mpfr_prec_t default_prec();
void set_default_prec(mpfr_prec_t prec);

class Real {
  public:
    Real() : Real(default_prec()) {}
    explicit Real(mpfr_prec_t prec) : mid_(prec), rad_(kRadPrec) {}

    static Real from_int(long v, mpfr_prec_t prec = default_prec());
    static Real from_mpz(const mpz_class& v, mpfr_prec_t prec = default_prec());
    static Real from_mpq(const mpq_class& v, mpfr_prec_t prec = default_prec());
    static Real from_double(double v, mpfr_prec_t prec = default_prec());
    // Exact midpoint + explicit radius.
    static Real with_rad(const Real& mid, const Real& rad);
    static Real pi(mpfr_prec_t prec = default_prec());
    static Real euler_e(mpfr_prec_t prec = default_prec());

    mpfr_srcptr mid() const { return mid_.get(); }
    mpfr_srcptr rad() const { return rad_.get(); }
    mpfr_prec_t prec() const { return mid_.prec(); }
    bool is_exact() const { return mpfr_zero_p(rad_.get()); }

    Mpfr lower() const;  // rounded down
    Mpfr upper() const;  // rounded up
    double mid_d() const { return mid_.to_double(); }
    double rad_d() const { return rad_.to_double(); }
    double lower_d() const;
    double upper_d() const;

    bool contains_zero() const;
    bool contains(const mpq_class& q) const;  // sufficient (never falsely yes)
    bool certainly_positive() const;
    bool certainly_negative() const;
    bool certainly_nonnegative() const;
    // a < b holds for all points of the two balls.
    static bool certainly_lt(const Real& a, const Real& b);
    static bool certainly_le(const Real& a, const Real& b);
    static bool overlaps(const Real& a, const Real& b);

    // Integer floor if it is the same for the whole ball.
    std::optional<mpz_class> floor_exact() const;

    std::string str(int digits = 20) const;

    // raw access for the implementation
    Mpfr& mid_ref() { return mid_; }
    Mpfr& rad_ref() { return rad_; }

  private:
    Mpfr mid_;
    Mpfr rad_;
};

Real add(const Real& a, const Real& b, mpfr_prec_t prec);
Real sub(const Real& a, const Real& b, mpfr_prec_t prec);
Real mul(const Real& a, const Real& b, mpfr_prec_t prec);
Real div(const Real& a, const Real& b, mpfr_prec_t prec);
Real neg(const Real& a);
Real abs(const Real& a);
Real sqrt(const Real& a, mpfr_prec_t prec);  // clips ball at 0 from below
Real exp(const Real& a, mpfr_prec_t prec);
Real log(const Real& a, mpfr_prec_t prec);
Real sin(const Real& a, mpfr_prec_t prec);
Real cos(const Real& a, mpfr_prec_t prec);
Real pow(const Real& base, const Real& e, mpfr_prec_t prec);  // base > 0
Real pow_si(const Real& base, long e, mpfr_prec_t prec);
Real min(const Real& a, const Real& b, mpfr_prec_t prec);
Real max(const Real& a, const Real& b, mpfr_prec_t prec);
Real mul_2si(const Real& a, long k);
Real hull(const Real& a, const Real& b, mpfr_prec_t prec);

inline Real operator+(const Real& a, const Real& b) {
    return add(a, b, std::max(a.prec(), b.prec()));
}
inline Real operator-(const Real& a, const Real& b) {
    return sub(a, b, std::max(a.prec(), b.prec()));
}
inline Real operator*(const Real& a, const Real& b) {
    return mul(a, b, std::max(a.prec(), b.prec()));
}
inline Real operator/(const Real& a, const Real& b) {
    return div(a, b, std::max(a.prec(), b.prec()));
}
inline Real operator-(const Real& a) { return neg(a); }

class Complex {
  public:
    Complex() : Complex(default_prec()) {}
    explicit Complex(mpfr_prec_t prec) : re_(prec), im_(prec), rad_(kRadPrec) {}
    Complex(const Real& re, const Real& im);
    explicit Complex(const Real& re);

    static Complex from_mpq(const mpq_class& re, const mpq_class& im,
                            mpfr_prec_t prec = default_prec());
    static Complex i_unit(mpfr_prec_t prec = default_prec());

    mpfr_srcptr re_mid() const { return re_.get(); }
    mpfr_srcptr im_mid() const { return im_.get(); }
    mpfr_srcptr rad() const { return rad_.get(); }
    mpfr_prec_t prec() const { return re_.prec(); }

    Real re() const;  // enclosure of the real part
    Real im() const;
    Real abs(mpfr_prec_t prec = 0) const;  // 0 = own precision
    Complex midpoint() const;              // exact center, radius 0

    bool contains_zero() const;
    bool contains(const mpq_class& re, const mpq_class& im) const;  // sufficient
    static bool overlaps(const Complex& a, const Complex& b);       // sufficient
    bool is_exact() const { return mpfr_zero_p(rad_.get()); }

    std::string str(int digits = 20) const;

    Mpfr& re_ref() { return re_; }
    Mpfr& im_ref() { return im_; }
    Mpfr& rad_ref() { return rad_; }

  private:
    Mpfr re_, im_;
    Mpfr rad_;
};

Complex add(const Complex& a, const Complex& b, mpfr_prec_t prec);
Complex sub(const Complex& a, const Complex& b, mpfr_prec_t prec);
Complex mul(const Complex& a, const Complex& b, mpfr_prec_t prec);
Complex div(const Complex& a, const Complex& b, mpfr_prec_t prec);
Complex recip(const Complex& a, mpfr_prec_t prec);
Complex neg(const Complex& a);
Complex conj(const Complex& a);
Complex mul_i(const Complex& a);  // multiply by the imaginary unit
Complex sqrt(const Complex& a, mpfr_prec_t prec);
Complex exp(const Complex& a, mpfr_prec_t prec);
Complex log(const Complex& a, mpfr_prec_t prec);
Complex pow_si(const Complex& base, long e, mpfr_prec_t prec);

inline Complex operator+(const Complex& a, const Complex& b) {
    return add(a, b, std::max(a.prec(), b.prec()));
}
inline Complex operator-(const Complex& a, const Complex& b) {
    return sub(a, b, std::max(a.prec(), b.prec()));
}
inline Complex operator*(const Complex& a, const Complex& b) {
    return mul(a, b, std::max(a.prec(), b.prec()));
}
inline Complex operator/(const Complex& a, const Complex& b) {
    return div(a, b, std::max(a.prec(), b.prec()));
}
inline Complex operator-(const Complex& a) { return neg(a); }

}  // namespace lab
