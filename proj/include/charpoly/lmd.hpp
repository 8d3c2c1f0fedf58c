#ifndef CHARPOLY_LMD_HPP
#define CHARPOLY_LMD_HPP

/* The matrix-orbit <-> lattice-class correspondence.
 *
 * To an integer matrix X with characteristic polynomial P (monic,
 * irreducible) we attach the lattice spanned by the entries of a column of
 * adj(alpha I - X); entries are read off exactly from the Horner tail
 * matrices of P(X). GL_n(Z)-conjugacy of matrices then matches
 * K^*-equivalence of their lattices, which is decided exactly for n = 2 via
 * canonical reduced forms of oriented bases, and by certificate search in
 * higher degree. */

#include "charpoly/lattice.hpp"
#include "charpoly/quadorder.hpp"

#include <functional>
#include <map>
#include <sstream>

namespace charpoly {

struct EigenModule {
    FieldPtr F;
    LatticeHNF lattice; // canonical HNF of the spanned lattice
    QMat basis;         // column i = power-basis coordinates of generator u_i
};

/* Entries u_i of an eigenvector of X with eigenvalue alpha, taken from the
 * first nonzero column of adj(alpha I - X). Verifies X u = alpha u. */
inline EigenModule eigen_module(const ZMat &X, const FieldPtr &F) {
    size_t n = X.nr;
    if (X.nc != n || static_cast<long>(n) != F->degree())
        throw invalid_input("eigen_module: size mismatch");
    if (!(char_poly(X) == F->poly().coeffs()))
        throw invalid_input("eigen_module: characteristic polynomial mismatch");
    const zpoly &c = F->poly().coeffs();
    // Horner tails: B_{n-1} = I, B_{k-1} = X B_k + c_k I;
    // adj(alpha I - X) = sum_k alpha^k B_k
    std::vector<ZMat> B(n, ZMat(n, n));
    for (size_t i = 0; i < n; i++) B[n - 1](i, i) = 1;
    for (size_t k = n - 1; k > 0; k--) {
        B[k - 1] = X * B[k];
        for (size_t i = 0; i < n; i++) B[k - 1](i, i) += c[k];
    }
    size_t j0 = n;
    for (size_t j = 0; j < n && j0 == n; j++)
        for (size_t k = 0; k < n; k++)
            for (size_t i = 0; i < n; i++)
                if (sgn(B[k](i, j)) != 0) {
                    j0 = j;
                    break;
                }
    if (j0 == n) throw error("eigen_module: adjugate vanished");
    std::vector<FieldElement> gens;
    QMat basis(n, n);
    for (size_t i = 0; i < n; i++) {
        std::vector<QQ> coord(n);
        for (size_t k = 0; k < n; k++) {
            coord[k] = QQ(B[k](i, j0));
            basis(k, i) = coord[k];
        }
        gens.emplace_back(F, std::move(coord));
    }
    // eigen relation: sum_j X_ij u_j = alpha u_i
    FieldElement al = FieldElement::alpha(F);
    for (size_t i = 0; i < n; i++) {
        FieldElement lhs = FieldElement::zero(F);
        for (size_t j = 0; j < n; j++) lhs = lhs + QQ(X(i, j)) * gens[j];
        if (!(lhs == al * gens[i])) throw error("eigen_module: eigen relation failed");
    }
    LatticeHNF L(F, gens);
    for (const auto &g : L.generators())
        if (!L.contains(al * g)) throw error("eigen_module: lattice not alpha-stable");
    return {F, std::move(L), std::move(basis)};
}

namespace detail {

/* Gauss reduction of a positive definite integer form. */
inline QuadForm reduce_definite(QuadForm f) {
    ZZ D = f.disc();
    if (sgn(D) >= 0 || sgn(f.a) <= 0) throw invalid_input("reduce_definite: not positive definite");
    for (int guard = 0; guard < 100000; guard++) {
        if (f.b > f.a || f.b <= -f.a) {
            // translate b into (-a, a]
            ZZ k;
            ZZ num = f.a - f.b; // b + 2ka in (-a, a] <=> k = ceil((b-a)/(-2a)) .. use floor form
            mpz_fdiv_q(k.get_mpz_t(), num.get_mpz_t(), ZZ(2 * f.a).get_mpz_t());
            ZZ b2 = f.b + 2 * k * f.a;
            f = {f.a, b2, divexact(b2 * b2 - D, 4 * f.a)};
        }
        if (f.a > f.c) {
            f = {f.c, -f.b, f.a};
            continue;
        }
        if (f.a == f.c && sgn(f.b) < 0) f.b = -f.b;
        if (f.b == -f.a) f.b = f.a;
        if (-f.a < f.b && f.b <= f.a && f.a <= f.c) return f;
    }
    throw budget_exceeded("reduce_definite: no convergence");
}

/* Bring an indefinite form into the reduced set. */
inline QuadForm reduce_indefinite(QuadForm f, const ZZ &D) {
    ZZ s = isqrt(D);
    for (int guard = 0; guard < 1000000; guard++) {
        if (is_reduced_indefinite(D, f.a, f.b)) return f;
        ZZ m = 2 * abs(f.c);
        ZZ r = ((-f.b) % m + m) % m;
        ZZ bp;
        if (abs(f.c) > s) {
            // b' = r shifted into (-|c|, |c|]
            bp = r;
            if (bp > abs(f.c)) bp -= m;
        } else {
            bp = s - ((s - r) % m + m) % m; // largest b' <= floor(sqrt D) in the class
        }
        f = {f.c, bp, divexact(bp * bp - D, 4 * f.c)};
    }
    throw budget_exceeded("reduce_indefinite: no convergence");
}

/* Lexicographically smallest form in the rho-cycle of a reduced form. */
inline QuadForm cycle_min(const ZZ &D, const QuadForm &f0) {
    QuadForm best = f0, cur = f0;
    for (int guard = 0; guard < 10000000; guard++) {
        cur = rho(D, cur);
        if (cur == f0) return best;
        if (cur < best) best = cur;
    }
    throw budget_exceeded("cycle_min: no return to start");
}

} // namespace detail

/* Norm form of an oriented basis of a rank-2 lattice, primitivized without
 * changing sign. Positive orientation == positive determinant of the
 * rational coordinate matrix (equivalent to the usual embedding convention
 * with Im(sigma(alpha)) > 0 resp. increasing real embeddings). */
inline QuadForm oriented_norm_form(const LatticeHNF &L) {
    const FieldPtr &F = L.field();
    if (F->degree() != 2) throw invalid_input("oriented_norm_form: degree must be 2");
    auto g = L.generators();
    QQ d = g[0].coords()[0] * g[1].coords()[1] - g[0].coords()[1] * g[1].coords()[0];
    if (sgn(d) == 0) throw error("oriented_norm_form: degenerate basis");
    if (sgn(d) < 0) std::swap(g[0], g[1]);
    QQ A = g[0].norm(), C = g[1].norm();
    QQ B = (g[0] + g[1]).norm() - A - C;
    ZZ L0 = lcm(lcm(ZZ(A.get_den()), ZZ(B.get_den())), ZZ(C.get_den()));
    ZZ a = ZZ(A.get_num()) * divexact(L0, ZZ(A.get_den()));
    ZZ b = ZZ(B.get_num()) * divexact(L0, ZZ(B.get_den()));
    ZZ c = ZZ(C.get_num()) * divexact(L0, ZZ(C.get_den()));
    ZZ g0 = gcd(gcd(a, b), c);
    return {divexact(a, g0), divexact(b, g0), divexact(c, g0)};
}

/* Canonical representative of the wide class of a primitive form: reduced
 * form for D < 0; for D > 0 the lexicographic minimum over the cycles of f
 * and of -f (scaling by a norm-negative element moves between the two). */
inline QuadForm wide_canonical_form(QuadForm f) {
    ZZ D = f.disc();
    if (sgn(D) < 0) {
        if (sgn(f.a) < 0) throw invalid_input("wide_canonical_form: negative definite input");
        return detail::reduce_definite(f);
    }
    QuadForm m1 = detail::cycle_min(D, detail::reduce_indefinite(f, D));
    QuadForm m2 = detail::cycle_min(D, detail::reduce_indefinite({-f.a, f.b, -f.c}, D));
    return std::min(m1, m2);
}

struct OrbitInvariant {
    ZZ order_disc;       // discriminant of the multiplicator ring
    bool canonical;      // true iff equal invariants <=> same orbit
    QuadForm form;       // canonical form (degree 2 only)
    std::string tag;     // printable digest
    bool operator==(const OrbitInvariant &o) const { return tag == o.tag; }
    bool operator<(const OrbitInvariant &o) const { return tag < o.tag; }
};

inline ZZ order_discriminant(const LatticeHNF &O) {
    auto g = O.generators();
    size_t n = g.size();
    QMat tr(n, n);
    for (size_t i = 0; i < n; i++)
        for (size_t j = 0; j < n; j++) tr(i, j) = (g[i] * g[j]).trace();
    QQ d = det(tr);
    if (!is_integer(d)) throw error("order_discriminant: non-integral trace form");
    return d.get_num();
}

inline OrbitInvariant orbit_invariant(const EigenModule &E) {
    LatticeHNF O = multiplicator_ring(E.lattice);
    ZZ D = order_discriminant(O);
    OrbitInvariant inv;
    inv.order_disc = D;
    std::ostringstream os;
    if (E.F->degree() == 2) {
        QuadForm f = wide_canonical_form(oriented_norm_form(E.lattice));
        if (f.disc() != D) throw error("orbit_invariant: form discriminant mismatch");
        inv.canonical = true;
        inv.form = f;
        os << "disc=" << D.get_str() << ";form=" << f.a.get_str() << "," << f.b.get_str() << ","
           << f.c.get_str();
    } else {
        inv.canonical = false;
        inv.form = {0, 0, 0};
        os << "disc=" << D.get_str() << ";hnf=";
        const LatticeHNF &L = E.lattice;
        os << L.den().get_str();
        for (const auto &e : L.mat().a) os << "," << e.get_str();
    }
    inv.tag = os.str();
    return inv;
}

inline OrbitInvariant orbit_invariant(const ZMat &X, const FieldPtr &F) {
    return orbit_invariant(eigen_module(X, F));
}

struct OrbitResult {
    enum class Status { yes, no, inconclusive } status;
    std::optional<ZMat> witness; // U with U^{-1} X U = Y when status == yes
};

namespace detail {
/* Reconstruct a conjugating matrix from a scaling witness lambda M_X = M_Y. */
inline std::optional<ZMat> conjugator_from_scaling(const ZMat &X, const ZMat &Y,
                                                   const EigenModule &EX, const EigenModule &EY,
                                                   const FieldElement &lambda) {
    size_t n = X.nr;
    QMat W = inverse(EY.basis) * lambda.mult_matrix() * EX.basis;
    ZMat U(n, n);
    for (size_t i = 0; i < n; i++)
        for (size_t j = 0; j < n; j++) {
            if (!is_integer(W(j, i))) return std::nullopt;
            U(i, j) = W(j, i).get_num(); // U = W^T
        }
    ZZ d = det(U);
    if (d != 1 && d != -1) return std::nullopt;
    // verify X U = U Y exactly
    if (!(X * U == U * Y)) return std::nullopt;
    return U;
}
} // namespace detail

/* Decide GL_n(Z)-conjugacy of X and Y (same irreducible characteristic
 * polynomial). Degree 2 is decided exactly; otherwise a certificate search
 * which can return inconclusive but never a wrong yes/no. */
inline OrbitResult same_orbit(const ZMat &X, const ZMat &Y, const FieldPtr &F, long bound = 25) {
    EigenModule EX = eigen_module(X, F), EY = eigen_module(Y, F);
    if (F->degree() == 2) {
        OrbitInvariant ix = orbit_invariant(EX), iy = orbit_invariant(EY);
        if (!(ix == iy)) return {OrbitResult::Status::no, std::nullopt};
        // invariants agree: extract an explicit witness via the lattice search
        EquivResult e = equivalent(EX.lattice, EY.lattice);
        if (e.status != EquivResult::Status::yes)
            throw error("same_orbit: canonical invariants agree but no scaling found");
        // adjust the scaling to the eigen bases (lattice generators differ by
        // a unimodular change which conjugator_from_scaling absorbs)
        auto U = detail::conjugator_from_scaling(X, Y, EX, EY, *e.witness);
        if (!U) throw error("same_orbit: witness reconstruction failed");
        return {OrbitResult::Status::yes, *U};
    }
    EquivResult e = equivalent(EX.lattice, EY.lattice, bound);
    switch (e.status) {
    case EquivResult::Status::yes: {
        auto U = detail::conjugator_from_scaling(X, Y, EX, EY, *e.witness);
        if (!U) throw error("same_orbit: witness reconstruction failed");
        return {OrbitResult::Status::yes, *U};
    }
    case EquivResult::Status::no:
        return {OrbitResult::Status::no, std::nullopt};
    default:
        return {OrbitResult::Status::inconclusive, std::nullopt};
    }
}

struct OrbitDecomposition {
    std::vector<std::vector<size_t>> classes; // indices into the input list
    std::vector<OrbitInvariant> invariants;   // one per class (representative)
    bool certified;                           // false if any merge decision was inconclusive
};

namespace detail {

/* Z-basis of the left kernel {v : vA = 0} of an integer matrix given by
 * rows, via row reduction with a tracked unimodular transform.  The basis
 * is saturated (it generates all integral kernel vectors).
 */
inline std::vector<std::vector<ZZ>> left_kernel_rows(std::vector<std::vector<ZZ>> A) {
    size_t R = A.size();
    size_t C = R ? A[0].size() : 0;
    std::vector<std::vector<ZZ>> U(R, std::vector<ZZ>(R, ZZ(0)));
    for (size_t i = 0; i < R; i++) U[i][i] = 1;
    size_t r = 0;
    for (size_t c = 0; c < C && r < R; c++) {
        while (true) {
            size_t best = R;
            for (size_t i = r; i < R; i++)
                if (A[i][c] != 0 && (best == R || mpz_cmpabs(A[i][c].get_mpz_t(), A[best][c].get_mpz_t()) < 0))
                    best = i;
            if (best == R) break;
            if (best != r) {
                std::swap(A[best], A[r]);
                std::swap(U[best], U[r]);
            }
            bool more = false;
            for (size_t i = r + 1; i < R; i++) {
                if (A[i][c] == 0) continue;
                ZZ q = floor_q(QQ(A[i][c]) / QQ(A[r][c]));
                if (q != 0) {
                    for (size_t j = 0; j < C; j++) A[i][j] -= q * A[r][j];
                    for (size_t j = 0; j < R; j++) U[i][j] -= q * U[r][j];
                }
                if (A[i][c] != 0) more = true;
            }
            if (!more) break;
        }
        if (A[r][c] != 0) r++;
    }
    std::vector<std::vector<ZZ>> out;
    for (size_t i = r; i < R; i++) out.push_back(U[i]);
    return out;
}

} // namespace detail

/* All unimodular solutions of gamma X = Y gamma with max |entry| <= B.
 *
 * The commutation condition is linear; its integral solutions form a
 * Z-module of rank n (X acts irreducibly).  A triangularized basis turns
 * the entry bound into exact per-coefficient intervals at the pivot
 * columns, so the enumeration is exhaustive over the box without a blind
 * (2B+1)^(n^2) scan.  Every reported matrix satisfies the commutation
 * equation exactly and has determinant +-1.
 */
inline std::vector<ZMat> conjugator_search(const ZMat &X, const ZMat &Y, long B) {
    if (X.nr != X.nc || Y.nr != Y.nc || X.nr != Y.nr)
        throw invalid_input("conjugator_search: dimension mismatch");
    if (B < 0) throw invalid_input("conjugator_search: bound must be >= 0");
    size_t n = X.nr, N = n * n;

    /* vec is column-major: coordinate k holds gamma(k % n, k / n), so that
     * vec(gamma X) = (X^T (x) I) vec and vec(Y gamma) = (I (x) Y) vec. */
    std::vector<std::vector<ZZ>> M(N, std::vector<ZZ>(N, ZZ(0)));
    for (size_t i = 0; i < n; i++)
        for (size_t j = 0; j < n; j++)
            for (size_t k = 0; k < n; k++) {
                M[j * n + i][k * n + i] += X(k, j); // (gamma X)_{ij} term
                M[j * n + i][j * n + k] -= Y(i, k); // (Y gamma)_{ij} term
            }

    /* Solutions are the left kernel of M^T. */
    std::vector<std::vector<ZZ>> MT(N, std::vector<ZZ>(N));
    for (size_t i = 0; i < N; i++)
        for (size_t j = 0; j < N; j++) MT[i][j] = M[j][i];
    std::vector<std::vector<ZZ>> basis = detail::left_kernel_rows(std::move(MT));
    if (basis.empty()) return {};

    /* Row-reduce the basis to a staircase so pivot columns bound the
     * coefficients one at a time. */
    std::vector<std::vector<ZZ>> H = basis;
    {
        size_t r = 0;
        for (size_t c = 0; c < N && r < H.size(); c++) {
            while (true) {
                size_t best = H.size();
                for (size_t i = r; i < H.size(); i++)
                    if (H[i][c] != 0 &&
                        (best == H.size() || mpz_cmpabs(H[i][c].get_mpz_t(), H[best][c].get_mpz_t()) < 0))
                        best = i;
                if (best == H.size()) break;
                if (best != r) std::swap(H[best], H[r]);
                bool more = false;
                for (size_t i = r + 1; i < H.size(); i++) {
                    if (H[i][c] == 0) continue;
                    ZZ q = floor_q(QQ(H[i][c]) / QQ(H[r][c]));
                    if (q != 0)
                        for (size_t j = 0; j < N; j++) H[i][j] -= q * H[r][j];
                    if (H[i][c] != 0) more = true;
                }
                if (!more) break;
            }
            if (H[r][c] != 0) {
                if (H[r][c] < 0)
                    for (size_t j = 0; j < N; j++) H[r][j] = -H[r][j];
                r++;
            }
        }
    }
    size_t d = H.size();
    std::vector<size_t> pivot(d);
    for (size_t i = 0; i < d; i++) {
        size_t p = 0;
        while (p < N && H[i][p] == 0) p++;
        if (p == N) throw error("conjugator_search: degenerate kernel basis");
        pivot[i] = p;
    }

    std::vector<ZMat> found;
    std::vector<ZZ> coeff(d, ZZ(0));
    std::vector<ZZ> vec(N);
    ZZ bound(B);

    auto leaf = [&]() {
        for (size_t k = 0; k < N; k++) {
            vec[k] = 0;
            for (size_t i = 0; i < d; i++) vec[k] += coeff[i] * H[i][k];
            if (vec[k] > bound || vec[k] < -bound) return;
        }
        ZMat G(n, n);
        for (size_t k = 0; k < N; k++) G(k % n, k / n) = vec[k];
        ZZ dg = det(G);
        if (dg != 1 && dg != -1) return;
        if (!(G * X == Y * G)) throw error("conjugator_search: commutation check failed");
        found.push_back(G);
    };

    /* Depth-first over coefficients; at depth i the pivot-column entry is
     * sum_{j<=i} coeff[j] H[j][pivot[i]], already fixed for j < i. */
    std::function<void(size_t)> dfs = [&](size_t depth) {
        if (depth == d) {
            leaf();
            return;
        }
        size_t p = pivot[depth];
        ZZ partial(0);
        for (size_t j = 0; j < depth; j++) partial += coeff[j] * H[j][p];
        const ZZ &step = H[depth][p];
        ZZ lo = -floor_q(QQ(bound + partial) / QQ(step));
        ZZ hi = floor_q(QQ(bound - partial) / QQ(step));
        for (ZZ c = lo; c <= hi; c += 1) {
            coeff[depth] = c;
            dfs(depth + 1);
        }
        coeff[depth] = 0;
    };
    dfs(0);
    return found;
}

inline OrbitDecomposition orbit_decompose(const std::vector<ZMat> &mats, const FieldPtr &F,
                                          long bound = 25) {
    OrbitDecomposition out;
    out.certified = true;
    std::vector<EigenModule> mods;
    mods.reserve(mats.size());
    for (const auto &X : mats) mods.push_back(eigen_module(X, F));
    if (F->degree() == 2) {
        std::map<OrbitInvariant, size_t> seen;
        for (size_t i = 0; i < mats.size(); i++) {
            OrbitInvariant inv = orbit_invariant(mods[i]);
            auto it = seen.find(inv);
            if (it == seen.end()) {
                seen.emplace(inv, out.classes.size());
                out.classes.push_back({i});
                out.invariants.push_back(inv);
            } else {
                out.classes[it->second].push_back(i);
            }
        }
        return out;
    }
    for (size_t i = 0; i < mats.size(); i++) {
        bool placed = false;
        for (size_t c = 0; c < out.classes.size() && !placed; c++) {
            size_t rep = out.classes[c][0];
            EquivResult e = equivalent(mods[i].lattice, mods[rep].lattice, bound);
            if (e.status == EquivResult::Status::yes) {
                out.classes[c].push_back(i);
                placed = true;
            } else if (e.status == EquivResult::Status::inconclusive) {
                out.certified = false;
            }
        }
        if (!placed) {
            out.classes.push_back({i});
            out.invariants.push_back(orbit_invariant(mods[i]));
        }
    }
    return out;
}

} // namespace charpoly

#endif
