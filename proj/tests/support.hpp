#ifndef CHARPOLY_TESTS_SUPPORT_HPP
#define CHARPOLY_TESTS_SUPPORT_HPP

/* Shared helpers for the test suite: deliberately naive reference
 * implementations (oracles) that trade speed for obviousness, plus small
 * utilities for building matrices and random unimodular conjugators.
 * Nothing here may call into the code paths it is used to check.
 */

#include <algorithm>
#include <functional>
#include <random>
#include <set>
#include <vector>

#include "charpoly/counter.hpp"
#include "charpoly/lattice.hpp"
#include "charpoly/numfield.hpp"
#include "charpoly/polynomial.hpp"
#include "charpoly/qmat.hpp"

namespace testsupport {

using charpoly::divexact;
using charpoly::IntPolynomial;
using charpoly::LatticeHNF;
using charpoly::QQ;
using charpoly::ZMat;
using charpoly::zpoly;
using charpoly::ZZ;

inline ZMat mat2(long a, long b, long c, long d) {
    ZMat M(2, 2);
    M(0, 0) = a;
    M(0, 1) = b;
    M(1, 0) = c;
    M(1, 1) = d;
    return M;
}

inline ZMat mat3(const std::vector<long> &e) {
    ZMat M(3, 3);
    for (size_t i = 0; i < 9; i++) M.a[i] = e[i];
    return M;
}

/* Naive census for n = 2: scan the whole box of candidate entries and keep
 * matrices whose trace, determinant and squared Frobenius norm match.  The
 * production counter factors bc through divisors; this one does not.
 */
inline long naive_count_n2(const IntPolynomial &P, long S, bool strict) {
    if (P.degree() != 2) throw charpoly::invalid_input("naive_count_n2: degree != 2");
    long c1 = P.coeff(1).get_si(); // trace = -c1
    long c0 = P.coeff(0).get_si(); // det = c0
    long count = 0;
    long r = static_cast<long>(std::sqrt(static_cast<double>(S))) + 2;
    for (long a = -r; a <= r; a++) {
        long d = -c1 - a;
        long diag = a * a + d * d;
        if (diag > S) continue;
        for (long b = -r; b <= r; b++) {
            if (diag + b * b > S) continue;
            for (long c = -r; c <= r; c++) {
                long n2 = diag + b * b + c * c;
                if (n2 > S || (strict && n2 == S)) continue;
                if (a * d - b * c == c0) count++;
            }
        }
    }
    return count;
}

/* Naive census for n = 3: enumerate all integer 3x3 matrices inside the
 * Frobenius ball (entry-by-entry with the running square-sum bound, which
 * is the problem statement itself, not a structural shortcut) and test the
 * characteristic polynomial at every leaf.
 */
inline long naive_count_n3(const IntPolynomial &P, long S) {
    if (P.degree() != 3) throw charpoly::invalid_input("naive_count_n3: degree != 3");
    long c2 = P.coeff(2).get_si(); // trace = -c2
    long c1 = P.coeff(1).get_si(); // sum of principal 2x2 minors = c1
    long c0 = P.coeff(0).get_si(); // det = -c0
    long e[9];
    long count = 0;
    long r = static_cast<long>(std::sqrt(static_cast<double>(S))) + 1;

    auto leaf = [&]() {
        long tr = e[0] + e[4] + e[8];
        if (tr != -c2) return;
        long m01 = e[0] * e[4] - e[1] * e[3];
        long m02 = e[0] * e[8] - e[2] * e[6];
        long m12 = e[4] * e[8] - e[5] * e[7];
        if (m01 + m02 + m12 != c1) return;
        long det = e[0] * (e[4] * e[8] - e[5] * e[7]) - e[1] * (e[3] * e[8] - e[5] * e[6]) +
                   e[2] * (e[3] * e[7] - e[4] * e[6]);
        if (det == -c0) return void(count++);
    };
    // Recursive box walk; the only pruning is the Frobenius budget itself.
    std::function<void(int, long)> walk = [&](int k, long used) {
        if (k == 9) return leaf();
        for (long v = -r; v <= r; v++) {
            long u = used + v * v;
            if (u > S) continue;
            e[k] = v;
            walk(k + 1, u);
        }
    };
    walk(0, 0);
    return count;
}

/* Brute-force lattice-class count for a quadratic discriminant D: build the
 * order O of discriminant D as Z[alpha] for the standard quadratic
 * polynomial, enumerate every sublattice of index <= ceil(sqrt|D|) via HNF
 * bases, keep those whose multiplicator ring is exactly O, and partition by
 * lattice equivalence.  Every class of proper O-lattices has an integral
 * representative of index below that bound, so the class count is exact.
 */
inline long lattice_class_oracle(const ZZ &D) {
    zpoly p;
    if (D % 4 == 0) {
        p = {-divexact(D, ZZ(4)), ZZ(0), ZZ(1)}; // x^2 - D/4
    } else {
        p = {-divexact(D - 1, ZZ(4)), ZZ(-1), ZZ(1)}; // x^2 - x - (D-1)/4
    }
    IntPolynomial P{p};
    if (charpoly::discriminant(P) != D) throw charpoly::error("oracle: disc mismatch");
    auto F = charpoly::NumberField::create(P);
    LatticeHNF O = LatticeHNF::power_lattice(F);

    ZZ bound = charpoly::isqrt(abs(D));
    if (bound * bound < abs(D)) bound += 1;

    std::vector<LatticeHNF> reps;
    for (ZZ m = 1; m <= bound; m += 1) {
        for (const ZZ &a : charpoly::divisors(m)) {
            ZZ d = divexact(m, a);
            for (ZZ b = 0; b < d; b += 1) {
                std::vector<std::vector<QQ>> gens = {{QQ(a), QQ(b)}, {QQ(0), QQ(d)}};
                LatticeHNF M(F, gens);
                LatticeHNF ring = charpoly::multiplicator_ring(M);
                bool exact = !(ring < O) && !(O < ring);
                if (!exact) continue;
                bool known = false;
                for (const auto &R : reps) {
                    auto eq = charpoly::equivalent(R, M);
                    if (eq.status == charpoly::EquivResult::Status::inconclusive)
                        throw charpoly::error("oracle: inconclusive equivalence");
                    if (eq.status == charpoly::EquivResult::Status::yes) {
                        known = true;
                        break;
                    }
                }
                if (!known) reps.push_back(M);
            }
        }
    }
    return static_cast<long>(reps.size());
}

/* All valid quadratic discriminants in [lo, hi]: congruent to 0 or 1 mod 4,
 * not a square, and <= -3 or >= 5.
 */
inline std::vector<ZZ> valid_discs(long lo, long hi) {
    std::vector<ZZ> out;
    for (long d = lo; d <= hi; d++) {
        long m = ((d % 4) + 4) % 4;
        if (m != 0 && m != 1) continue;
        if (d >= -2 && d <= 4) continue;
        if (d > 0 && charpoly::is_square(ZZ(d))) continue;
        out.push_back(ZZ(d));
    }
    return out;
}

/* Random element of GL_n(Z) as a short word in elementary shears,
 * sign flips, and coordinate swaps; entries stay small.
 */
inline ZMat random_unimodular(int n, std::mt19937_64 &rng, int word_len = 5) {
    ZMat G(static_cast<size_t>(n), static_cast<size_t>(n));
    for (int i = 0; i < n; i++) G(static_cast<size_t>(i), static_cast<size_t>(i)) = 1;
    for (int w = 0; w < word_len; w++) {
        ZMat E(static_cast<size_t>(n), static_cast<size_t>(n));
        for (int i = 0; i < n; i++) E(static_cast<size_t>(i), static_cast<size_t>(i)) = 1;
        int kind = static_cast<int>(rng() % 3);
        size_t i = static_cast<size_t>(rng() % static_cast<unsigned>(n));
        size_t j = static_cast<size_t>(rng() % static_cast<unsigned>(n));
        if (kind == 0 && i != j) {
            E(i, j) = (rng() & 1) ? 1 : -1; // shear
        } else if (kind == 1) {
            E(i, i) = -1; // reflection
        } else if (i != j) {
            E(i, i) = 0; // transposition
            E(j, j) = 0;
            E(i, j) = 1;
            E(j, i) = 1;
        }
        G = G * E;
    }
    return G;
}

/* Conjugate X by G in GL_n(Z): G X G^{-1}, with the inverse obtained from
 * the adjugate (det G = +-1 so the adjugate is the inverse up to sign).
 */
inline ZMat conjugate(const ZMat &G, const ZMat &X) {
    ZZ dg = det(G);
    if (dg != 1 && dg != -1) throw charpoly::error("conjugate: not unimodular");
    size_t n = G.nr;
    ZMat inv(n, n);
    if (n == 2) {
        inv(0, 0) = G(1, 1);
        inv(0, 1) = -G(0, 1);
        inv(1, 0) = -G(1, 0);
        inv(1, 1) = G(0, 0);
    } else {
        for (size_t i = 0; i < n; i++)
            for (size_t j = 0; j < n; j++) {
                // cofactor expansion for the (j, i) entry of the adjugate
                std::vector<ZZ> minor;
                for (size_t r = 0; r < n; r++)
                    for (size_t c = 0; c < n; c++)
                        if (r != j && c != i) minor.push_back(G(r, c));
                ZMat Mm(n - 1, n - 1);
                Mm.a = minor;
                ZZ cof = det(Mm);
                if ((i + j) % 2 == 1) cof = -cof;
                inv(i, j) = cof;
            }
    }
    if (dg == -1)
        for (auto &v : inv.a) v = -v;
    ZMat prod = G * X * inv;
    return prod;
}

/* Stream the full ball census of V_P(Z) with ||X||^2 <= S into a set of
 * entry vectors (row-major longs) for closure checks.
 */
inline std::set<std::vector<long>> census_set(const IntPolynomial &P, long S) {
    std::set<std::vector<long>> out;
    charpoly::enumerate_matrices(P, ZZ(S), [&](const ZMat &M) {
        std::vector<long> v;
        for (const auto &e : M.a) v.push_back(e.get_si());
        out.insert(v);
    });
    return out;
}

/* P(lambda + c) for integer c, by Horner rebasing; monic is preserved. */
inline IntPolynomial shifted(const IntPolynomial &P, long c) {
    zpoly src = P.coeffs();
    zpoly out{ZZ(0)};
    // Horner: P(x) = ((a_n (x) + a_{n-1}) x + ...) evaluated at x = y + c.
    for (size_t i = src.size(); i-- > 0;) {
        // out = out * (y + c) + a_i
        zpoly shifted_out(out.size() + 1);
        for (size_t k = 0; k < out.size(); k++) {
            shifted_out[k + 1] += out[k];
            shifted_out[k] += c * out[k];
        }
        shifted_out[0] += src[i];
        charpoly::trim(shifted_out);
        out = shifted_out;
    }
    return IntPolynomial{out};
}

} // namespace testsupport

#endif
