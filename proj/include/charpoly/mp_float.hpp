#ifndef CHARPOLY_MP_FLOAT_HPP
#define CHARPOLY_MP_FLOAT_HPP

/* Thin RAII wrappers around MPFR reals, plus the complex arithmetic needed
 * for Newton refinement of polynomial roots. Only the handful of operations
 * the root solver and the regulator computation require. */

#include "charpoly/prelude.hpp"

#include <mpfr.h>

#include <utility>

namespace charpoly {

class MpReal {
  public:
    explicit MpReal(mpfr_prec_t prec = 128) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    MpReal(double d, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_d(v_, d, MPFR_RNDN);
    }
    MpReal(const ZZ &z, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_z(v_, z.get_mpz_t(), MPFR_RNDN);
    }
    MpReal(const QQ &q, mpfr_prec_t prec) {
        mpfr_init2(v_, prec);
        mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN);
    }
    MpReal(const MpReal &o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    MpReal(MpReal &&o) noexcept {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }
    MpReal &operator=(MpReal o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~MpReal() { mpfr_clear(v_); }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    int sign() const { return mpfr_sgn(v_); }

    friend MpReal operator+(const MpReal &a, const MpReal &b) {
        MpReal r(std::max(a.prec(), b.prec()));
        mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend MpReal operator-(const MpReal &a, const MpReal &b) {
        MpReal r(std::max(a.prec(), b.prec()));
        mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend MpReal operator*(const MpReal &a, const MpReal &b) {
        MpReal r(std::max(a.prec(), b.prec()));
        mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend MpReal operator/(const MpReal &a, const MpReal &b) {
        MpReal r(std::max(a.prec(), b.prec()));
        mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    MpReal operator-() const {
        MpReal r(prec());
        mpfr_neg(r.v_, v_, MPFR_RNDN);
        return r;
    }
    friend bool operator<(const MpReal &a, const MpReal &b) { return mpfr_cmp(a.v_, b.v_) < 0; }
    friend bool operator>(const MpReal &a, const MpReal &b) { return mpfr_cmp(a.v_, b.v_) > 0; }

    friend MpReal abs(const MpReal &a) {
        MpReal r(a.prec());
        mpfr_abs(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend MpReal sqrt(const MpReal &a) {
        MpReal r(a.prec());
        mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
        return r;
    }
    friend MpReal log(const MpReal &a) {
        MpReal r(a.prec());
        mpfr_log(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

  private:
    mpfr_t v_;
};

struct MpComplex {
    MpReal re, im;

    explicit MpComplex(mpfr_prec_t prec = 128) : re(prec), im(prec) {}
    MpComplex(MpReal r, MpReal i) : re(std::move(r)), im(std::move(i)) {}
    MpComplex(double r, double i, mpfr_prec_t prec) : re(r, prec), im(i, prec) {}

    mpfr_prec_t prec() const { return std::max(re.prec(), im.prec()); }

    friend MpComplex operator+(const MpComplex &a, const MpComplex &b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend MpComplex operator-(const MpComplex &a, const MpComplex &b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend MpComplex operator*(const MpComplex &a, const MpComplex &b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend MpComplex operator/(const MpComplex &a, const MpComplex &b) {
        MpReal d = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
    }
    friend MpReal abs(const MpComplex &a) { return sqrt(a.re * a.re + a.im * a.im); }
    MpComplex conj() const { return {re, -im}; }
};

} // namespace charpoly

#endif
