#ifndef CHARPOLY_PRELUDE_HPP
#define CHARPOLY_PRELUDE_HPP

/* Shared basics: GMP typedefs, error hierarchy, small integer helpers. */

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace charpoly {

using ZZ = mpz_class;
using QQ = mpq_class;

struct error : std::runtime_error {
    explicit error(const std::string &m) : std::runtime_error(m) {}
};
/* Malformed or unsupported input (wrong degree, non-monic, reducible, ...). */
struct invalid_input : error {
    explicit invalid_input(const std::string &m) : error(m) {}
};
/* A required external input (invariants file, ...) is absent. */
struct missing_input : error {
    explicit missing_input(const std::string &m) : error(m) {}
};
/* Search or enumeration would exceed its configured budget; no partial results. */
struct budget_exceeded : error {
    explicit budget_exceeded(const std::string &m) : error(m) {}
};
/* Certified numerics failed to reach the requested tolerance after escalation. */
struct precision_error : error {
    explicit precision_error(const std::string &m) : error(m) {}
};

inline int sgn(const ZZ &x) { return mpz_sgn(x.get_mpz_t()); }
inline int sgn(const QQ &x) { return mpq_sgn(x.get_mpq_t()); }

inline ZZ isqrt(const ZZ &x) {
    if (sgn(x) < 0) throw invalid_input("isqrt of negative");
    ZZ r;
    mpz_sqrt(r.get_mpz_t(), x.get_mpz_t());
    return r;
}

inline bool is_square(const ZZ &x) {
    return sgn(x) >= 0 && mpz_perfect_square_p(x.get_mpz_t()) != 0;
}

/* Exact division; throws if the division leaves a remainder. */
inline ZZ divexact(const ZZ &a, const ZZ &b) {
    ZZ q, r;
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    if (sgn(r) != 0) throw error("divexact: not divisible");
    return q;
}

inline ZZ gcd(const ZZ &a, const ZZ &b) {
    ZZ g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline ZZ lcm(const ZZ &a, const ZZ &b) {
    ZZ l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

inline ZZ pow_zz(const ZZ &a, unsigned long e) {
    ZZ r;
    mpz_pow_ui(r.get_mpz_t(), a.get_mpz_t(), e);
    return r;
}

/* floor(a/b) for rationals. */
inline ZZ floor_q(const QQ &q) {
    ZZ r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline bool is_integer(const QQ &q) { return q.get_den() == 1; }

/* Parse a decimal string ("12", "-3.25", "1e4") into an exact rational. */
inline QQ parse_decimal(const std::string &s) {
    std::string t = s;
    long exp10 = 0;
    auto epos = t.find_first_of("eE");
    if (epos != std::string::npos) {
        exp10 = std::stol(t.substr(epos + 1));
        t = t.substr(0, epos);
    }
    bool neg = false;
    size_t i = 0;
    if (i < t.size() && (t[i] == '+' || t[i] == '-')) neg = t[i++] == '-';
    std::string digits;
    long frac = 0;
    bool seen_dot = false, seen_digit = false;
    for (; i < t.size(); i++) {
        if (t[i] == '.') {
            if (seen_dot) throw invalid_input("bad decimal: " + s);
            seen_dot = true;
        } else if (t[i] >= '0' && t[i] <= '9') {
            digits += t[i];
            seen_digit = true;
            if (seen_dot) frac++;
        } else {
            throw invalid_input("bad decimal: " + s);
        }
    }
    if (!seen_digit) throw invalid_input("bad decimal: " + s);
    ZZ num(digits.empty() ? "0" : digits);
    if (neg) num = -num;
    QQ q(num);
    long e = exp10 - frac;
    ZZ p10 = pow_zz(ZZ(10), static_cast<unsigned long>(e < 0 ? -e : e));
    if (e >= 0)
        q *= QQ(p10);
    else
        q /= QQ(p10);
    q.canonicalize();
    return q;
}

inline std::vector<ZZ> divisors(const ZZ &n0) {
    ZZ n = abs(n0);
    if (sgn(n) == 0) throw invalid_input("divisors of 0");
    std::vector<ZZ> small, big;
    for (ZZ d = 1; d * d <= n; d++) {
        if (n % d == 0) {
            small.push_back(d);
            if (d * d != n) big.push_back(n / d);
        }
    }
    for (auto it = big.rbegin(); it != big.rend(); ++it) small.push_back(*it);
    return small;
}

} // namespace charpoly

#endif
