#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

namespace lab {

// RAII wrapper around mpfr_t.  Value semantics, precision carried per object.
class Mpfr {
  public:
    explicit Mpfr(mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    Mpfr() : Mpfr(64) {}
    Mpfr(const Mpfr& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Mpfr(Mpfr&& o) noexcept {
        mpfr_init2(v_, 64);
        mpfr_swap(v_, o.v_);
    }
    Mpfr& operator=(const Mpfr& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Mpfr& operator=(Mpfr&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Mpfr() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    // Decimal rendering with a fixed digit count; deterministic across runs.
    std::string str(int digits = 20) const {
        char buf[64 + 2 * 1024];
        std::string fmt = "%." + std::to_string(digits) + "Re";
        mpfr_snprintf(buf, sizeof buf, fmt.c_str(), v_);
        return std::string(buf);
    }

  private:
    mpfr_t v_;
};

}  // namespace lab
