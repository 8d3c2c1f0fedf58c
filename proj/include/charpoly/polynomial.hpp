#ifndef CHARPOLY_POLYNOMIAL_HPP
#define CHARPOLY_POLYNOMIAL_HPP

/* Exact polynomial arithmetic over Z and Q, in dense ascending-coefficient
 * form, plus the classical certified primitives used everywhere else:
 * subresultant resultants/discriminants, Sturm chains, signature, and a
 * bounded factor search for irreducibility of monic integer polynomials. */

#include "charpoly/prelude.hpp"

#include <algorithm>
#include <complex>
#include <functional>
#include <optional>

namespace charpoly {

using zpoly = std::vector<ZZ>; // ascending; zpoly{c0, c1, ...} = c0 + c1 x + ...
using qpoly = std::vector<QQ>;

template <class P> inline void trim(P &p) {
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

template <class P> inline long deg(const P &p) {
    long d = static_cast<long>(p.size()) - 1;
    while (d >= 0 && sgn(p[static_cast<size_t>(d)]) == 0) d--;
    return d; // deg 0 polynomial -> -1
}

template <class P> inline bool is_zero(const P &p) { return deg(p) < 0; }

template <class P> inline typename P::value_type lc(const P &p) {
    long d = deg(p);
    if (d < 0) throw error("lc of zero polynomial");
    return p[static_cast<size_t>(d)];
}

template <class P> inline P add(const P &a, const P &b) {
    P r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); i++) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] += b[i];
    }
    trim(r);
    return r;
}

template <class P> inline P sub(const P &a, const P &b) {
    P r(std::max(a.size(), b.size()));
    for (size_t i = 0; i < r.size(); i++) {
        if (i < a.size()) r[i] += a[i];
        if (i < b.size()) r[i] -= b[i];
    }
    trim(r);
    return r;
}

template <class P> inline P mul(const P &a, const P &b) {
    if (is_zero(a) || is_zero(b)) return P{};
    P r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); i++) {
        if (sgn(a[i]) == 0) continue;
        for (size_t j = 0; j < b.size(); j++) r[i + j] += a[i] * b[j];
    }
    trim(r);
    return r;
}

template <class P> inline P neg(P a) {
    for (auto &c : a) c = -c;
    return a;
}

template <class P> inline P derivative(const P &p) {
    if (p.size() <= 1) return P{};
    P r(p.size() - 1);
    for (size_t i = 1; i < p.size(); i++) r[i - 1] = p[i] * static_cast<long>(i);
    trim(r);
    return r;
}

template <class P, class X> inline X eval(const P &p, const X &x) {
    X r = X(0);
    for (size_t i = p.size(); i-- > 0;) r = r * x + X(p[i]);
    return r;
}

inline double eval_d(const zpoly &p, double x) {
    double r = 0;
    for (size_t i = p.size(); i-- > 0;) r = r * x + p[i].get_d();
    return r;
}

inline std::complex<double> eval_cd(const zpoly &p, std::complex<double> x) {
    std::complex<double> r = 0;
    for (size_t i = p.size(); i-- > 0;) r = r * x + p[i].get_d();
    return r;
}

inline qpoly to_q(const zpoly &p) {
    qpoly r(p.size());
    for (size_t i = 0; i < p.size(); i++) r[i] = QQ(p[i]);
    return r;
}

/* Division with remainder over Q: a = q*b + r, deg r < deg b. */
inline std::pair<qpoly, qpoly> divmod(qpoly a, const qpoly &b) {
    long db = deg(b);
    if (db < 0) throw error("division by zero polynomial");
    qpoly q;
    long da = deg(a);
    if (da >= db) q.assign(static_cast<size_t>(da - db) + 1, QQ(0));
    QQ binv = QQ(1) / lc(b);
    while ((da = deg(a)) >= db) {
        QQ f = a[static_cast<size_t>(da)] * binv;
        q[static_cast<size_t>(da - db)] = f;
        for (long i = 0; i <= db; i++)
            a[static_cast<size_t>(da - db + i)] -= f * b[static_cast<size_t>(i)];
        a[static_cast<size_t>(da)] = 0; // force exact cancellation of the head
    }
    trim(a);
    trim(q);
    return {q, a};
}

/* Pseudo-remainder: lc(b)^(deg a - deg b + 1) * a  mod  b, all over Z. */
inline zpoly prem(zpoly a, const zpoly &b) {
    long db = deg(b), da = deg(a);
    if (db < 0) throw error("prem: zero divisor");
    if (da < db) {
        ZZ f = pow_zz(lc(b), static_cast<unsigned long>(da - db + 1 < 0 ? 0 : da - db + 1));
        // da < db: exponent convention only reachable with da >= db in our uses
        for (auto &c : a) c *= f;
        return a;
    }
    ZZ lb = lc(b);
    long steps = da - db + 1;
    for (long s = 0; s < steps; s++) {
        da = deg(a);
        if (da < db) {
            // degree dropped early; keep the power of lc(b) consistent
            for (auto &c : a) c *= pow_zz(lb, static_cast<unsigned long>(steps - s));
            break;
        }
        ZZ head = a[static_cast<size_t>(da)];
        for (auto &c : a) c *= lb;
        for (long i = 0; i <= db; i++)
            a[static_cast<size_t>(da - db + i)] -= head * b[static_cast<size_t>(i)];
        a[static_cast<size_t>(da)] = 0;
        trim(a);
        if (is_zero(a)) break;
    }
    return a;
}

inline ZZ content(const zpoly &p) {
    ZZ g = 0;
    for (const auto &c : p) g = gcd(g, c);
    return sgn(g) == 0 ? ZZ(1) : g;
}

/* Resultant over Z via the subresultant pseudo-remainder sequence
 * (Cohen, "A Course in Computational Algebraic Number Theory", 3.3.7). */
inline ZZ resultant(zpoly A, zpoly B) {
    if (is_zero(A) || is_zero(B)) return ZZ(0);
    ZZ ca = content(A), cb = content(B);
    for (auto &c : A) c = divexact(c, ca);
    for (auto &c : B) c = divexact(c, cb);
    long da = deg(A), db = deg(B);
    ZZ t = pow_zz(ca, static_cast<unsigned long>(db)) * pow_zz(cb, static_cast<unsigned long>(da));
    int s = 1;
    if (da < db) {
        std::swap(A, B);
        std::swap(da, db);
        if ((da & 1) && (db & 1)) s = -s;
    }
    ZZ g = 1, h = 1;
    while (deg(B) > 0) {
        da = deg(A);
        db = deg(B);
        long delta = da - db;
        if ((da & 1) && (db & 1)) s = -s;
        zpoly R = prem(A, B);
        A = B;
        ZZ denom = g * pow_zz(h, static_cast<unsigned long>(delta));
        B = R;
        for (auto &c : B) c = divexact(c, denom);
        g = lc(A);
        if (delta > 0) {
            ZZ num = pow_zz(g, static_cast<unsigned long>(delta));
            h = divexact(num, pow_zz(h, static_cast<unsigned long>(delta - 1)));
        }
    }
    if (is_zero(B)) return ZZ(0); // common factor
    long dA = deg(A);
    ZZ res = pow_zz(lc(B), static_cast<unsigned long>(dA));
    if (dA > 0) res = divexact(res, pow_zz(h, static_cast<unsigned long>(dA - 1)));
    ZZ out = t * res;
    return s > 0 ? out : ZZ(-out);
}

/* disc(P) = (-1)^(n(n-1)/2) res(P, P') / lc(P). */
inline ZZ discriminant(const zpoly &p) {
    long n = deg(p);
    if (n < 1) throw invalid_input("discriminant: degree < 1");
    ZZ r = resultant(p, derivative(p));
    ZZ d = divexact(r, lc(p));
    return ((n * (n - 1) / 2) % 2) ? -d : d;
}

/* Sturm chain of a squarefree polynomial. */
inline std::vector<qpoly> sturm_chain(const qpoly &p) {
    std::vector<qpoly> chain;
    chain.push_back(p);
    qpoly d = derivative(p);
    if (!is_zero(d)) chain.push_back(d);
    while (chain.size() >= 2) {
        qpoly r = divmod(chain[chain.size() - 2], chain.back()).second;
        if (is_zero(r)) break;
        chain.push_back(neg(r));
    }
    return chain;
}

namespace detail {
inline int sign_changes(const std::vector<int> &signs) {
    int v = 0, prev = 0;
    for (int s : signs) {
        if (s == 0) continue;
        if (prev != 0 && s != prev) v++;
        prev = s;
    }
    return v;
}
} // namespace detail

/* Number of real roots in (a, b]; pass nullopt for -inf / +inf. */
inline long sturm_count(const std::vector<qpoly> &chain, std::optional<QQ> a, std::optional<QQ> b) {
    auto signs_at = [&](const std::optional<QQ> &x, int dir) {
        std::vector<int> s;
        for (const auto &f : chain) {
            if (is_zero(f)) {
                s.push_back(0);
            } else if (x) {
                s.push_back(sgn(eval(f, *x)));
            } else {
                int l = sgn(lc(f));
                // at -inf the sign is lc * (-1)^deg
                s.push_back(dir < 0 && (deg(f) & 1) ? -l : l);
            }
        }
        return s;
    };
    int va = detail::sign_changes(signs_at(a, -1));
    int vb = detail::sign_changes(signs_at(b, +1));
    return va - vb;
}

inline long count_real_roots(const zpoly &p) {
    if (discriminant(p) == 0) throw invalid_input("count_real_roots: not squarefree");
    auto chain = sturm_chain(to_q(p));
    return sturm_count(chain, std::nullopt, std::nullopt);
}

/* Monic integer characteristic polynomial, degree >= 2. The irreducibility
 * flag is only ever set by the factory that actually ran the check. */
class IntPolynomial {
  public:
    /* Coefficients ascending: c[0] + c[1] x + ... + x^n. */
    explicit IntPolynomial(zpoly coeffs) : c_(std::move(coeffs)) {
        trim(c_);
        long n = deg(c_);
        if (n < 2) throw invalid_input("IntPolynomial: degree must be >= 2");
        if (lc(c_) != 1) throw invalid_input("IntPolynomial: must be monic");
    }

    static IntPolynomial from_leading(const std::vector<long> &leading_first) {
        zpoly c(leading_first.size());
        for (size_t i = 0; i < leading_first.size(); i++)
            c[leading_first.size() - 1 - i] = leading_first[i];
        return IntPolynomial(std::move(c));
    }

    long degree() const { return deg(c_); }
    const zpoly &coeffs() const { return c_; }
    const ZZ &coeff(size_t i) const { return c_[i]; }
    bool irreducibility_checked() const { return checked_irreducible_; }

    bool operator==(const IntPolynomial &o) const { return c_ == o.c_; }

    std::string str() const {
        std::string s;
        for (long i = degree(); i >= 0; i--) {
            if (!s.empty()) s += ",";
            s += c_[static_cast<size_t>(i)].get_str();
        }
        return s;
    }

  private:
    friend bool is_irreducible(const IntPolynomial &);
    friend IntPolynomial checked_irreducible(zpoly);
    zpoly c_;
    bool checked_irreducible_ = false;
};

namespace detail {
/* ||P||_2 rounded up; used for the Mignotte coefficient bound. */
inline ZZ l2_norm_ceil(const zpoly &p) {
    ZZ s = 0;
    for (const auto &c : p) s += c * c;
    ZZ r = isqrt(s);
    if (r * r < s) r += 1;
    return r;
}

inline ZZ binom(long n, long k) {
    if (k < 0 || k > n) return ZZ(0);
    ZZ r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

/* Try exact division of the monic p by the monic candidate g over Z. */
inline bool divides_monic(const zpoly &p, const zpoly &g) {
    zpoly r = p;
    long dg = deg(g);
    while (true) {
        long dr = deg(r);
        if (dr < dg) return is_zero(r);
        ZZ head = r[static_cast<size_t>(dr)];
        for (long i = 0; i <= dg; i++)
            r[static_cast<size_t>(dr - dg + i)] -= head * g[static_cast<size_t>(i)];
        trim(r);
    }
}

/* Search for a monic factor of degree exactly d, coefficients within the
 * Mignotte bound, constant coefficient dividing p(0); divisibility of p(1)
 * and p(-1) by g(1), g(-1) prunes before the full trial division. */
inline bool has_monic_factor_of_degree(const zpoly &p, long d) {
    ZZ norm = l2_norm_ceil(p);
    std::vector<ZZ> bound(static_cast<size_t>(d)); // bound[i] for coefficient of x^i, i < d
    for (long i = 0; i < d; i++)
        bound[static_cast<size_t>(i)] = binom(d - 1, i) * norm + binom(d - 1, i - 1);
    ZZ p1 = eval(p, ZZ(1)), pm1 = eval(p, ZZ(-1));
    std::vector<ZZ> c0s;
    for (const ZZ &dv : divisors(p[0])) {
        if (dv <= bound[0]) {
            c0s.push_back(dv);
            c0s.push_back(-dv);
        }
    }
    zpoly g(static_cast<size_t>(d) + 1);
    g[static_cast<size_t>(d)] = 1;
    std::function<bool(long)> rec = [&](long i) -> bool {
        if (i == d) {
            ZZ g1 = eval(g, ZZ(1)), gm1 = eval(g, ZZ(-1));
            if (sgn(g1) == 0 || sgn(gm1) == 0) return false; // would force p(+-1)=0, handled earlier
            if (p1 % g1 != 0 || pm1 % gm1 != 0) return false;
            return divides_monic(p, g);
        }
        if (i == 0) {
            for (const ZZ &v : c0s) {
                g[0] = v;
                if (rec(1)) return true;
            }
            return false;
        }
        const ZZ &b = bound[static_cast<size_t>(i)];
        for (ZZ v = -b; v <= b; v++) {
            g[static_cast<size_t>(i)] = v;
            if (rec(i + 1)) return true;
        }
        return false;
    };
    return rec(0);
}
} // namespace detail

/* Irreducibility over Q of a monic integer polynomial, by complete search
 * for monic factors of degree <= n/2 within the Mignotte bound. Intended
 * for the small degrees (<= 6) this library works with. */
inline bool is_irreducible(const IntPolynomial &P) {
    const zpoly &p = P.coeffs();
    long n = deg(p);
    if (sgn(p[0]) == 0) return false; // x divides
    // integer roots (degree-1 factors)
    for (const ZZ &dv : divisors(p[0])) {
        if (eval(p, dv) == 0 || eval(p, ZZ(-dv)) == 0) return false;
    }
    for (long d = 2; 2 * d <= n; d++)
        if (detail::has_monic_factor_of_degree(p, d)) return false;
    return true;
}

/* Factory: construct and verify irreducibility, recording the check. */
inline IntPolynomial checked_irreducible(zpoly coeffs) {
    IntPolynomial P(std::move(coeffs));
    if (!is_irreducible(P))
        throw invalid_input("polynomial is reducible: " + P.str());
    P.checked_irreducible_ = true;
    return P;
}

/* (r1, r2): real embeddings and conjugate pairs, via exact Sturm count. */
inline std::pair<int, int> signature(const IntPolynomial &P) {
    long n = P.degree();
    long r1 = count_real_roots(P.coeffs());
    return {static_cast<int>(r1), static_cast<int>((n - r1) / 2)};
}

inline ZZ discriminant(const IntPolynomial &P) { return discriminant(P.coeffs()); }

} // namespace charpoly

#endif
