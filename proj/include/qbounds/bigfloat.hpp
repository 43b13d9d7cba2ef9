#pragma once

#include <mpfr.h>

#include <string>

#include "qbounds/rational.hpp"

namespace qbounds {

/// Arbitrary-precision float with explicit per-value precision.  Results of
/// arithmetic carry the larger operand precision.  Used only for steering
/// (root-location hints, rate logarithms); every sign decision that feeds a
/// bound is confirmed in exact arithmetic by the callers.
class BigFloat {
  public:
    static constexpr int default_precision = 256;

    BigFloat() : BigFloat(0.0, default_precision) {}
    explicit BigFloat(double v, int precision_bits = default_precision) {
        mpfr_init2(v_, precision_bits);
        mpfr_set_d(v_, v, MPFR_RNDN);
    }
    explicit BigFloat(const Rational& r, int precision_bits = default_precision) {
        mpfr_init2(v_, precision_bits);
        mpfr_set_q(v_, r.get_mpq_t(), MPFR_RNDN);
    }
    BigFloat(const BigFloat& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    BigFloat& operator=(BigFloat o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    int precision_bits() const { return static_cast<int>(mpfr_get_prec(v_)); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    int sign() const { return mpfr_sgn(v_); }

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
        BigFloat out = a.like(b);
        mpfr_add(out.v_, a.v_, b.v_, MPFR_RNDN);
        return out;
    }
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
        BigFloat out = a.like(b);
        mpfr_sub(out.v_, a.v_, b.v_, MPFR_RNDN);
        return out;
    }
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
        BigFloat out = a.like(b);
        mpfr_mul(out.v_, a.v_, b.v_, MPFR_RNDN);
        return out;
    }
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
        BigFloat out = a.like(b);
        mpfr_div(out.v_, a.v_, b.v_, MPFR_RNDN);
        return out;
    }
    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) > 0; }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_) == 0; }

    BigFloat abs() const {
        BigFloat out(0.0, precision_bits());
        mpfr_abs(out.v_, v_, MPFR_RNDN);
        return out;
    }
    /// Exact power of two, usable as an error threshold.
    static BigFloat pow2(long e, int precision_bits = default_precision) {
        BigFloat out(1.0, precision_bits);
        mpfr_mul_2si(out.v_, out.v_, e, MPFR_RNDN);
        return out;
    }
    /// log2, rounded to nearest at this value's precision.
    BigFloat log2() const {
        BigFloat out(0.0, precision_bits());
        mpfr_log2(out.v_, v_, MPFR_RNDN);
        return out;
    }
    std::string str(int digits = 20) const {
        char buf[128];
        mpfr_snprintf(buf, sizeof buf, "%.*Rg", digits, v_);
        return buf;
    }

  private:
    BigFloat like(const BigFloat& other) const {
        return BigFloat(0.0, std::max(precision_bits(), other.precision_bits()));
    }
    mpfr_t v_;
};

}  // namespace qbounds
