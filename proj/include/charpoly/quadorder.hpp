#ifndef CHARPOLY_QUADORDER_HPP
#define CHARPOLY_QUADORDER_HPP

/* Invariants of quadratic orders, indexed by discriminant D (D ≡ 0,1 mod 4,
 * D not a square): class numbers via exact reduced-form enumeration, narrow
 * class numbers via cycle counting of reduced indefinite forms, fundamental
 * units via the Pell solver, regulators via MPFR.
 *
 * Wide class number semantics throughout: classes of lattices up to scaling
 * by arbitrary nonzero field elements. For D > 0 this is the cycle count
 * halved when the fundamental unit has norm +1. */

#include "charpoly/mp_float.hpp"
#include "charpoly/pell.hpp"
#include "charpoly/prelude.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace charpoly {

struct QuadForm {
    ZZ a, b, c;
    bool operator<(const QuadForm &o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }
    bool operator==(const QuadForm &o) const { return a == o.a && b == o.b && c == o.c; }
    ZZ disc() const { return b * b - 4 * a * c; }
    bool primitive() const { return gcd(gcd(a, b), c) == 1; }
};

namespace detail {

inline void require_disc(const ZZ &D) {
    if (sgn(D) == 0) throw invalid_input("quadorder: discriminant must be nonzero");
    ZZ m4 = ((D % 4) + 4) % 4;
    if (m4 != 0 && m4 != 1) throw invalid_input("quadorder: discriminant must be 0 or 1 mod 4");
    if (sgn(D) > 0 && is_square(D)) throw invalid_input("quadorder: positive discriminant must not be a square");
}

/* All reduced positive definite forms of discriminant D < 0:
 * -a < b <= a <= c, with b >= 0 when a == c. */
inline std::vector<QuadForm> reduced_definite_forms(const ZZ &D) {
    std::vector<QuadForm> out;
    ZZ absD = abs(D);
    for (ZZ a = 1; 3 * a * a <= absD; a++) {
        for (ZZ b = -a + 1; b <= a; b++) {
            ZZ num = b * b + absD;
            if (num % (4 * a) != 0) continue;
            ZZ c = num / (4 * a);
            if (c < a) continue;
            if (a == c && sgn(b) < 0) continue;
            out.push_back({a, b, c});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/* Reduced indefinite form test, exact: 0 < b < sqrt(D) and |sqrt(D)-2|a|| < b. */
inline bool is_reduced_indefinite(const ZZ &D, const ZZ &a, const ZZ &b) {
    if (sgn(b) <= 0 || b * b >= D) return false;
    ZZ ta = 2 * abs(a);
    ZZ lo = ta - b; // need lo < sqrt(D):  lo <= 0 or lo^2 < D
    if (sgn(lo) > 0 && lo * lo >= D) return false;
    ZZ hi = ta + b; // need sqrt(D) < hi:  D < hi^2
    return D < hi * hi;
}

inline std::vector<QuadForm> reduced_indefinite_forms(const ZZ &D) {
    std::vector<QuadForm> out;
    ZZ s = isqrt(D);
    for (ZZ b = 1; b <= s; b++) {
        if (((D - b * b) % 4) != 0) continue;
        ZZ k = (D - b * b) / 4; // -a*c = k > 0
        if (sgn(k) <= 0) continue;
        for (const ZZ &d : divisors(k)) {
            ZZ a = d, c = -divexact(k, d);
            if (is_reduced_indefinite(D, a, b)) {
                out.push_back({a, b, c});
                out.push_back({-a, b, -c});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/* Reduction-step permutation on reduced indefinite forms (right neighbor). */
inline QuadForm rho(const ZZ &D, const QuadForm &f) {
    ZZ m = 2 * abs(f.c);
    ZZ s = isqrt(D);
    ZZ r = ((-f.b) % m + m) % m;
    ZZ bp = s - ((s - r) % m + m) % m; // largest b' <= floor(sqrt D), b' = r mod m
    ZZ cp = divexact(bp * bp - D, 4 * f.c);
    return {f.c, bp, cp};
}

} // namespace detail

struct QuadOrderData {
    ZZ disc;
    ZZ h;          // wide class number
    ZZ h_narrow;   // narrow class number (equals h for D < 0)
    long torsion;  // number of roots of unity in the order
    double regulator; // log of the fundamental unit for D > 0, else 1.0
    std::optional<PellSolution> unit;
};

inline QuadOrderData quad_order_data(const ZZ &D) {
    detail::require_disc(D);
    QuadOrderData out;
    out.disc = D;
    if (sgn(D) < 0) {
        auto forms = detail::reduced_definite_forms(D);
        ZZ h = 0;
        for (const auto &f : forms)
            if (f.primitive()) h++;
        out.h = h;
        out.h_narrow = h;
        out.torsion = (D == -3) ? 6 : (D == -4) ? 4 : 2;
        out.regulator = 1.0;
        out.unit = std::nullopt;
        return out;
    }
    auto forms = detail::reduced_indefinite_forms(D);
    std::set<QuadForm> pending;
    for (const auto &f : forms)
        if (f.primitive()) pending.insert(f);
    ZZ cycles = 0;
    while (!pending.empty()) {
        QuadForm start = *pending.begin();
        QuadForm cur = start;
        do {
            if (pending.erase(cur) == 0) throw error("quad_order_data: rho escaped the reduced set");
            cur = detail::rho(D, cur);
        } while (!(cur == start));
        cycles++;
    }
    PellSolution eps = fundamental_pell4(D);
    out.h_narrow = cycles;
    if (eps.norm_sign < 0) {
        out.h = cycles;
    } else {
        if (cycles % 2 != 0) throw error("quad_order_data: odd cycle count with norm +1 unit");
        out.h = cycles / 2;
    }
    out.torsion = 2;
    {
        const long prec = 256;
        MpReal x(eps.x, prec), y(eps.y, prec), d(D, prec);
        MpReal val = (x + y * sqrt(d)) / MpReal(2.0, prec);
        out.regulator = log(val).to_double();
    }
    out.unit = eps;
    return out;
}

/* Named accessors for the individual order invariants. */
inline ZZ class_number(const ZZ &D) { return quad_order_data(D).h; }

inline long roots_of_unity(const ZZ &D) {
    detail::require_disc(D);
    if (sgn(D) > 0) return 2;
    return (D == -3) ? 6 : (D == -4) ? 4 : 2;
}

inline double regulator(const ZZ &D) {
    detail::require_disc(D);
    if (sgn(D) < 0) return 1.0;
    return quad_order_data(D).regulator;
}

/* D = f^2 * D0 with D0 a fundamental discriminant; returns (f, D0). */
inline std::pair<ZZ, ZZ> conductor_decompose(const ZZ &D) {
    detail::require_disc(D);
    // |D| = f^2 * s with s squarefree, by trial division
    ZZ rem = abs(D), f = 1;
    for (ZZ p = 2; p * p <= rem; p == 2 ? p = 3 : p += 2) {
        ZZ e = 0;
        while (rem % p == 0) {
            rem = divexact(rem, p);
            e++;
        }
        for (ZZ i = 0; 2 * i + 2 <= e; i++) f *= p; // p^floor(e/2)
        if (e % 2 == 1) rem *= p;                   // restore the odd part
    }
    ZZ s = divexact(abs(D), f * f);
    if (sgn(D) < 0) s = -s;
    // fundamental discriminant attached to squarefree s
    ZZ m4 = ((s % 4) + 4) % 4;
    ZZ D0;
    if (m4 == 1) {
        D0 = s;
    } else {
        D0 = 4 * s;
        if (f % 2 != 0) throw error("conductor_decompose: inconsistent 2-part");
        f /= 2;
    }
    if (f * f * D0 != D) throw error("conductor_decompose: self-check failed");
    return {f, D0};
}

/* Discriminants of the orders containing the order of discriminant D:
 * g^2 * D0 for divisors g of the conductor, in increasing conductor order. */
inline std::vector<ZZ> super_order_discs(const ZZ &D) {
    auto [f, D0] = conductor_decompose(D);
    std::vector<ZZ> out;
    for (const ZZ &g : divisors(f)) out.push_back(g * g * D0);
    return out;
}

} // namespace charpoly

#endif
