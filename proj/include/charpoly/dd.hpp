#ifndef CHARPOLY_DD_HPP
#define CHARPOLY_DD_HPP

/* Double-double arithmetic (~31 significant digits) and the two special
 * functions needed by the volume constants: the Gamma function via a
 * Lanczos approximation (g = 7, nine terms) and the Riemann zeta function
 * via the alternating (eta) series accelerated by repeated averaging of
 * partial sums.  Everything here is deterministic and allocation-free.
 */

#include <cmath>
#include <cstdlib>

#include "charpoly/prelude.hpp"

namespace charpoly {

/* Unevaluated sum hi + lo with |lo| <= ulp(hi)/2. */
struct dd {
    double hi = 0.0;
    double lo = 0.0;

    dd() = default;
    dd(double h) : hi(h), lo(0.0) {}
    dd(double h, double l) : hi(h), lo(l) {}

    double to_double() const { return hi + lo; }
};

namespace dd_detail {

/* Error-free transforms (Knuth / Dekker). */
inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return dd(s, err);
}

inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    double err = b - (s - a);
    return dd(s, err);
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    double err = std::fma(a, b, -p);
    return dd(p, err);
}

} // namespace dd_detail

inline dd dd_add(const dd &a, const dd &b) {
    dd s = dd_detail::two_sum(a.hi, b.hi);
    double lo = s.lo + a.lo + b.lo;
    return dd_detail::quick_two_sum(s.hi, lo);
}

inline dd dd_sub(const dd &a, const dd &b) { return dd_add(a, dd(-b.hi, -b.lo)); }

inline dd dd_neg(const dd &a) { return dd(-a.hi, -a.lo); }

inline dd dd_mul(const dd &a, const dd &b) {
    dd p = dd_detail::two_prod(a.hi, b.hi);
    double lo = p.lo + a.hi * b.lo + a.lo * b.hi;
    return dd_detail::quick_two_sum(p.hi, lo);
}

inline dd dd_div(const dd &a, const dd &b) {
    double q1 = a.hi / b.hi;
    dd r = dd_sub(a, dd_mul(dd(q1), b));
    double q2 = r.hi / b.hi;
    r = dd_sub(r, dd_mul(dd(q2), b));
    double q3 = r.hi / b.hi;
    dd q = dd_detail::quick_two_sum(q1, q2);
    return dd_add(q, dd(q3));
}

inline dd dd_sqrt(const dd &a) {
    if (a.hi == 0.0) return dd(0.0);
    if (a.hi < 0.0) throw invalid_input("dd_sqrt: negative argument");
    double y = std::sqrt(a.hi);
    /* One Newton step: y' = y + (a - y^2) / (2y), carried out in dd. */
    dd y2 = dd_detail::two_prod(y, y);
    dd diff = dd_sub(a, y2);
    double corr = diff.to_double() / (2.0 * y);
    return dd_detail::quick_two_sum(y, corr);
}

inline dd dd_pi() { return dd(3.141592653589793116e+00, 1.224646799147353207e-16); }
inline dd dd_ln2() { return dd(6.931471805599452862e-01, 2.319046813846299558e-17); }

/* exp(x) for |x| within double range; argument reduced by ln 2 and a
 * further /512 so the Taylor tail converges in a few terms.
 */
inline dd dd_exp(const dd &x) {
    if (x.hi > 700.0) throw invalid_input("dd_exp: overflow");
    if (x.hi < -700.0) return dd(0.0);
    double k = std::round(x.to_double() / dd_ln2().to_double());
    dd r = dd_sub(x, dd_mul(dd(k), dd_ln2()));
    /* r in [-ln2/2, ln2/2]; scale down by 2^9. */
    r = dd_div(r, dd(512.0));
    dd sum = dd(1.0);
    dd term = dd(1.0);
    for (int i = 1; i <= 18; ++i) {
        term = dd_mul(term, r);
        term = dd_div(term, dd(static_cast<double>(i)));
        sum = dd_add(sum, term);
        if (std::abs(term.hi) < 1e-35 * std::abs(sum.hi)) break;
    }
    for (int i = 0; i < 9; ++i) sum = dd_mul(sum, sum);
    double scale = std::ldexp(1.0, static_cast<int>(k));
    return dd(sum.hi * scale, sum.lo * scale);
}

/* Natural logarithm via one dd Newton correction of the double-precision seed. */
inline dd dd_log(const dd &a) {
    if (a.hi <= 0.0) throw invalid_input("dd_log: non-positive argument");
    dd y = dd(std::log(a.hi));
    /* y' = y + a*exp(-y) - 1, applied twice. */
    for (int i = 0; i < 2; ++i) {
        dd e = dd_exp(dd_neg(y));
        dd corr = dd_sub(dd_mul(a, e), dd(1.0));
        y = dd_add(y, corr);
    }
    return y;
}

/* x^y = exp(y log x) for x > 0. */
inline dd dd_pow(const dd &x, const dd &y) { return dd_exp(dd_mul(y, dd_log(x))); }

/* Integer power by binary exponentiation. */
inline dd dd_npow(dd base, long e) {
    if (e < 0) return dd_div(dd(1.0), dd_npow(base, -e));
    dd acc = dd(1.0);
    while (e > 0) {
        if (e & 1) acc = dd_mul(acc, base);
        base = dd_mul(base, base);
        e >>= 1;
    }
    return acc;
}

/* Gamma(z) for z > 0 by the Lanczos approximation with g = 7 and nine
 * coefficients, evaluated in double-double.  Relative accuracy is limited
 * by the approximation itself to roughly 1e-15, well inside the 1e-12
 * budget of every downstream constant.
 */
inline dd dd_gamma(const dd &z) {
    if (z.hi <= 0.0) throw invalid_input("dd_gamma: argument must be positive");
    static const double lanczos_g = 7.0;
    static const double lanczos_c[9] = {
        0.99999999999980993,    676.5203681218851,    -1259.1392167224028,
        771.32342877765313,     -176.61502916214059,  12.507343278686905,
        -0.13857109526572012,   9.9843695780195716e-6, 1.5056327351493116e-7};
    dd zm1 = dd_sub(z, dd(1.0));
    dd acc = dd(lanczos_c[0]);
    for (int k = 1; k < 9; ++k)
        acc = dd_add(acc, dd_div(dd(lanczos_c[k]), dd_add(zm1, dd(static_cast<double>(k)))));
    dd t = dd_add(zm1, dd(lanczos_g + 0.5));
    dd sqrt_two_pi = dd_sqrt(dd_mul(dd(2.0), dd_pi()));
    dd power = dd_pow(t, dd_add(zm1, dd(0.5)));
    dd expo = dd_exp(dd_neg(t));
    return dd_mul(dd_mul(dd_mul(sqrt_two_pi, power), expo), acc);
}

/* zeta(s) for real s >= 2 through the eta function
 *     eta(s) = sum_{k>=1} (-1)^{k-1} k^{-s} = (1 - 2^{1-s}) zeta(s),
 * accelerated by repeatedly averaging consecutive partial sums.  Each
 * averaging pass halves the leading error term of the alternating tail,
 * so 72 terms and a full averaging triangle land far below 1e-13.
 */
inline dd dd_zeta(const dd &s) {
    if (s.hi < 2.0 - 1e-12) throw invalid_input("dd_zeta: argument must be >= 2");
    const int terms = 72;
    dd row[terms];
    dd partial = dd(0.0);
    for (int k = 1; k <= terms; ++k) {
        dd a = dd_div(dd(1.0), dd_pow(dd(static_cast<double>(k)), s));
        partial = (k % 2 == 1) ? dd_add(partial, a) : dd_sub(partial, a);
        row[k - 1] = partial;
    }
    int len = terms;
    while (len > 1) {
        for (int i = 0; i + 1 < len; ++i)
            row[i] = dd_mul(dd_add(row[i], row[i + 1]), dd(0.5));
        --len;
    }
    dd eta = row[0];
    dd denom = dd_sub(dd(1.0), dd_pow(dd(2.0), dd_sub(dd(1.0), s)));
    return dd_div(eta, denom);
}

inline double gamma_fn(double z) { return dd_gamma(dd(z)).to_double(); }
inline double zeta_fn(double s) { return dd_zeta(dd(s)).to_double(); }

} // namespace charpoly

#endif
