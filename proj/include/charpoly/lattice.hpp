#ifndef CHARPOLY_LATTICE_HPP
#define CHARPOLY_LATTICE_HPP

/* Full-rank lattices in a number field K = Q(alpha), held in canonical
 * Hermite normal form: the lattice is (1/den) * (Z-span of the rows of H),
 * rows in power-basis coordinates, H upper triangular with positive pivots
 * and the entries above each pivot reduced into [0, pivot). den is minimal.
 * Structural equality of (den, H) therefore decides lattice equality.
 *
 * On top of the HNF core: colon lattices (N : M), multiplicator rings,
 * generalized indices, and K^*-equivalence testing (exact in the quadratic
 * case, bounded search otherwise). */

#include "charpoly/numfield.hpp"
#include "charpoly/pell.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <optional>

namespace charpoly {

namespace detail {
/* Row HNF of an integer matrix whose rows span a full-rank lattice in Z^n.
 * Throws if the row span has rank < n. */
inline ZMat hnf_rows(std::vector<std::vector<ZZ>> rows, size_t n) {
    for (auto &r : rows)
        if (r.size() != n) throw error("hnf_rows: bad row length");
    size_t m = rows.size();
    if (m < n) throw invalid_input("hnf_rows: too few generators");
    for (size_t c = 0; c < n; c++) {
        size_t piv = c;
        // eliminate below row c in column c with extended-gcd row operations
        size_t i0 = piv;
        while (i0 < m && sgn(rows[i0][c]) == 0) i0++;
        if (i0 == m) throw invalid_input("hnf_rows: generators not full rank");
        std::swap(rows[piv], rows[i0]);
        for (size_t i = piv + 1; i < m; i++) {
            if (sgn(rows[i][c]) == 0) continue;
            ZZ g, u, v;
            mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), rows[piv][c].get_mpz_t(),
                       rows[i][c].get_mpz_t());
            ZZ p_over = divexact(rows[piv][c], g), i_over = divexact(rows[i][c], g);
            for (size_t j = c; j < n; j++) {
                ZZ rp = u * rows[piv][j] + v * rows[i][j];
                ZZ ri = p_over * rows[i][j] - i_over * rows[piv][j];
                rows[piv][j] = rp;
                rows[i][j] = ri;
            }
        }
        if (sgn(rows[piv][c]) < 0)
            for (size_t j = c; j < n; j++) rows[piv][j] = -rows[piv][j];
        for (size_t k = 0; k < piv; k++) {
            if (sgn(rows[k][c]) == 0) continue;
            ZZ f;
            mpz_fdiv_q(f.get_mpz_t(), rows[k][c].get_mpz_t(), rows[piv][c].get_mpz_t());
            if (sgn(f) == 0) continue;
            for (size_t j = c; j < n; j++) rows[k][j] -= f * rows[piv][j];
        }
    }
    for (size_t i = n; i < m; i++)
        for (size_t j = 0; j < n; j++)
            if (sgn(rows[i][j]) != 0) throw error("hnf_rows: elimination left a nonzero tail row");
    ZMat H(n, n);
    for (size_t i = 0; i < n; i++)
        for (size_t j = 0; j < n; j++) H(i, j) = rows[i][j];
    return H;
}
} // namespace detail

class LatticeHNF {
  public:
    /* Build from generators (at least n, spanning a full-rank lattice). */
    LatticeHNF(FieldPtr F, const std::vector<std::vector<QQ>> &gens) : F_(std::move(F)) {
        size_t n = static_cast<size_t>(F_->degree());
        ZZ den = 1;
        for (const auto &g : gens) {
            if (g.size() != n) throw invalid_input("LatticeHNF: bad generator length");
            for (const auto &q : g) den = lcm(den, ZZ(q.get_den()));
        }
        std::vector<std::vector<ZZ>> rows;
        rows.reserve(gens.size());
        for (const auto &g : gens) {
            std::vector<ZZ> r(n);
            for (size_t j = 0; j < n; j++) {
                QQ s = g[j] * QQ(den);
                s.canonicalize();
                r[j] = s.get_num();
            }
            rows.push_back(std::move(r));
        }
        H_ = detail::hnf_rows(std::move(rows), n);
        den_ = den;
        normalize();
    }

    LatticeHNF(FieldPtr F, const std::vector<FieldElement> &gens)
        : LatticeHNF(F, [&] {
              std::vector<std::vector<QQ>> g;
              g.reserve(gens.size());
              for (const auto &e : gens) g.push_back(e.coords());
              return g;
          }()) {}

    /* The lattice Z[alpha] (power basis). */
    static LatticeHNF power_lattice(const FieldPtr &F) {
        size_t n = static_cast<size_t>(F->degree());
        std::vector<std::vector<QQ>> gens(n, std::vector<QQ>(n));
        for (size_t i = 0; i < n; i++) gens[i][i] = 1;
        return {F, gens};
    }

    const FieldPtr &field() const { return F_; }
    const ZMat &mat() const { return H_; }
    const ZZ &den() const { return den_; }

    bool operator==(const LatticeHNF &o) const { return den_ == o.den_ && H_ == o.H_; }
    bool operator!=(const LatticeHNF &o) const { return !(*this == o); }
    bool operator<(const LatticeHNF &o) const {
        if (den_ != o.den_) return den_ < o.den_;
        return H_.a < o.H_.a; // lexicographic on row-major entries
    }

    std::vector<FieldElement> generators() const {
        size_t n = H_.nr;
        std::vector<FieldElement> g;
        for (size_t i = 0; i < n; i++) {
            std::vector<QQ> c(n);
            for (size_t j = 0; j < n; j++) {
                c[j] = QQ(H_(i, j)) / QQ(den_);
                c[j].canonicalize();
            }
            g.emplace_back(F_, std::move(c));
        }
        return g;
    }

    /* Covolume relative to Z^n: |det| of the basis matrix. */
    QQ covolume() const {
        QQ d = 1;
        for (size_t i = 0; i < H_.nr; i++) d *= QQ(H_(i, i));
        d /= QQ(pow_zz(den_, static_cast<unsigned long>(H_.nr)));
        d.canonicalize();
        return d;
    }

    bool contains(const std::vector<QQ> &coords) const {
        size_t n = H_.nr;
        std::vector<ZZ> w(n);
        for (size_t j = 0; j < n; j++) {
            QQ s = coords[j] * QQ(den_);
            s.canonicalize();
            if (s.get_den() != 1) return false;
            w[j] = s.get_num();
        }
        // rows are upper triangular: solve w = sum_i k_i row_i left to right
        std::vector<ZZ> k(n);
        for (size_t i = 0; i < n; i++) {
            ZZ rem = w[i];
            for (size_t j = 0; j < i; j++) rem -= k[j] * H_(j, i);
            ZZ q, r;
            mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), rem.get_mpz_t(), H_(i, i).get_mpz_t());
            if (sgn(r) != 0) return false;
            k[i] = q;
        }
        return true;
    }
    bool contains(const FieldElement &x) const { return contains(x.coords()); }
    bool contains_lattice(const LatticeHNF &sub) const {
        for (const auto &g : sub.generators())
            if (!contains(g)) return false;
        return true;
    }

    LatticeHNF scaled(const FieldElement &lambda) const {
        std::vector<FieldElement> gens;
        for (const auto &g : generators()) gens.push_back(lambda * g);
        return {F_, gens};
    }

  private:
    void normalize() {
        ZZ g = den_;
        for (const auto &e : H_.a) g = gcd(g, e);
        if (g > 1) {
            for (auto &e : H_.a) e = divexact(e, g);
            den_ = divexact(den_, g);
        }
    }

    FieldPtr F_;
    ZMat H_;
    ZZ den_;
};

/* Colon lattice (N : M) = { x in K : x M <= N }. Computed by stacking the
 * integrality conditions "coeffs_N(x * m_j) in Z^n" over the generators m_j
 * of M and dualizing the row lattice they span. */
inline LatticeHNF colon_lattice(const LatticeHNF &N, const LatticeHNF &M) {
    const FieldPtr &F = N.field();
    size_t n = static_cast<size_t>(F->degree());
    // basis matrix of N (columns = generators), inverted once
    QMat BN(n, n);
    {
        auto gens = N.generators();
        for (size_t j = 0; j < n; j++)
            for (size_t i = 0; i < n; i++) BN(i, j) = gens[j].coords()[i];
    }
    QMat BNinv = inverse(BN);
    std::vector<std::vector<QQ>> trows;
    for (const auto &mj : M.generators()) {
        QMat cond = BNinv * mj.mult_matrix();
        for (size_t i = 0; i < n; i++) {
            std::vector<QQ> row(n);
            for (size_t j = 0; j < n; j++) row[j] = cond(i, j);
            trows.push_back(std::move(row));
        }
    }
    // row lattice R spanned by the conditions; the colon lattice is its dual
    LatticeHNF R(F, trows);
    QMat G(n, n);
    for (size_t i = 0; i < n; i++)
        for (size_t j = 0; j < n; j++) G(i, j) = QQ(R.mat()(i, j)) / QQ(R.den());
    QMat Ginv = inverse(G);
    std::vector<std::vector<QQ>> dual_gens(n, std::vector<QQ>(n));
    for (size_t j = 0; j < n; j++)
        for (size_t i = 0; i < n; i++) {
            dual_gens[j][i] = Ginv(i, j);
            dual_gens[j][i].canonicalize();
        }
    return {F, dual_gens};
}

/* Multiplicator ring O(M) = (M : M); verifies it is a ring containing 1. */
inline LatticeHNF multiplicator_ring(const LatticeHNF &M) {
    LatticeHNF O = colon_lattice(M, M);
    const FieldPtr &F = M.field();
    if (!O.contains(FieldElement::one(F))) throw error("multiplicator_ring: 1 not contained");
    auto gens = O.generators();
    for (const auto &a : gens)
        for (const auto &b : gens)
            if (!O.contains(a * b)) throw error("multiplicator_ring: not multiplicatively closed");
    return O;
}

/* Generalized index [M : N] = covol(N)/covol(M) as a positive rational. */
inline QQ lattice_index(const LatticeHNF &M, const LatticeHNF &N) {
    QQ r = N.covolume() / M.covolume();
    r.canonicalize();
    if (sgn(r) <= 0) throw error("lattice_index: nonpositive");
    return r;
}

struct EquivResult {
    enum class Status { yes, no, inconclusive } status;
    std::optional<FieldElement> witness; // lambda with lambda*M = N when status == yes
};

namespace detail {
/* Exact binary norm form N(a c1 + b c2) = A a^2 + B ab + C b^2. */
struct NormForm {
    QQ A, B, C;
    QQ eval(const ZZ &a, const ZZ &b) const { return A * a * a + B * a * b + C * b * b; }
};
inline NormForm norm_form(const FieldElement &c1, const FieldElement &c2) {
    QQ A = c1.norm(), C = c2.norm();
    QQ B = (c1 + c2).norm() - A - C;
    return {A, B, C};
}
} // namespace detail

/* K^*-equivalence of lattices: is there lambda with lambda M = N?
 *
 * Both paths first compare multiplicator rings (an invariant; mismatch is a
 * certified "no") and then search the colon lattice (N : M) for lambda with
 * |Norm(lambda)| = [M : N].
 *
 * Quadratic fields: the search region is complete -- an ellipse bound in the
 * imaginary case, one fundamental-unit box in the real case (any witness can
 * be unit-adjusted into the box) -- so yes/no is exact.
 *
 * Higher degree: candidates run over coordinate boxes of height <= bound in
 * the colon-lattice basis, smallest height first; exhaustion only yields
 * "inconclusive", never a false "no". */
inline EquivResult equivalent(const LatticeHNF &M, const LatticeHNF &N, long bound = 50) {
    const FieldPtr &F = M.field();
    long n = F->degree();
    LatticeHNF OM = multiplicator_ring(M), ON = multiplicator_ring(N);
    if (OM != ON) return {EquivResult::Status::no, std::nullopt};
    QQ t = lattice_index(M, N);
    LatticeHNF C = colon_lattice(N, M);
    auto cg = C.generators();

    if (n == 2) {
        detail::NormForm q = detail::norm_form(cg[0], cg[1]);
        if (sgn(F->disc()) < 0) {
            // positive definite: a^2 <= 4C t / (4AC - B^2), likewise for b
            QQ disc_form = q.B * q.B - 4 * q.A * q.C;
            QQ a2 = 4 * q.C * t / (-disc_form), b2 = 4 * q.A * t / (-disc_form);
            ZZ amax = isqrt(floor_q(a2)) + 1, bmax = isqrt(floor_q(b2)) + 1;
            for (ZZ a = -amax; a <= amax; a++)
                for (ZZ b = -bmax; b <= bmax; b++) {
                    if (q.eval(a, b) != t) continue;
                    FieldElement lam = QQ(a) * cg[0] + QQ(b) * cg[1];
                    if (M.scaled(lam) == N) return {EquivResult::Status::yes, lam};
                }
            return {EquivResult::Status::no, std::nullopt};
        }
        // real quadratic: bound embeddings by sqrt(t) * (fundamental unit of O(M));
        // any witness can be unit-adjusted so its coordinates land in this range
        ZZ Dord;
        {
            auto og = OM.generators();
            QMat tr(2, 2);
            for (size_t i = 0; i < 2; i++)
                for (size_t j = 0; j < 2; j++) tr(i, j) = (og[i] * og[j]).trace();
            QQ d = det(tr);
            if (!is_integer(d)) throw error("equivalent: non-integral order discriminant");
            Dord = d.get_num();
        }
        PellSolution eps = fundamental_pell4(Dord);
        double eps_v = (eps.x.get_d() + eps.y.get_d() * std::sqrt(Dord.get_d())) / 2.0;
        double tb = std::sqrt(std::abs(t.get_d())) * eps_v * (1 + 1e-9) + 1e-9;
        double E[2][2];
        for (int i = 0; i < 2; i++)
            for (int j = 0; j < 2; j++) E[i][j] = cg[static_cast<size_t>(j)].embed(i).first.real();
        double detE = E[0][0] * E[1][1] - E[0][1] * E[1][0];
        if (std::abs(detE) < 1e-300) throw error("equivalent: degenerate embedding matrix");
        double amax_d = (std::abs(E[1][1]) + std::abs(E[0][1])) * tb / std::abs(detE);
        double bmax_d = (std::abs(E[1][0]) + std::abs(E[0][0])) * tb / std::abs(detE);
        ZZ amax(static_cast<long>(amax_d) + 2), bmax(static_cast<long>(bmax_d) + 2);
        for (ZZ a = -amax; a <= amax; a++)
            for (ZZ b = -bmax; b <= bmax; b++) {
                if (abs(q.eval(a, b)) != t) continue;
                FieldElement lam = QQ(a) * cg[0] + QQ(b) * cg[1];
                if (M.scaled(lam) == N) return {EquivResult::Status::yes, lam};
            }
        return {EquivResult::Status::no, std::nullopt};
    }

    // bounded search by increasing height shells over the colon basis
    double tdbl = std::abs(t.get_d());
    std::vector<ZZ> k(static_cast<size_t>(n));
    std::vector<std::complex<double>> emb(static_cast<size_t>(n) * static_cast<size_t>(n));
    for (long j = 0; j < n; j++)
        for (long i = 0; i < n; i++)
            emb[static_cast<size_t>(i * n + j)] = cg[static_cast<size_t>(j)].embed(static_cast<int>(i)).first;
    for (long h = 0; h <= bound; h++) {
        // enumerate max-norm shell |k|_inf == h
        std::function<std::optional<EquivResult>(long, bool)> rec =
            [&](long pos, bool hit) -> std::optional<EquivResult> {
            if (pos == n) {
                if (!hit) return std::nullopt;
                // double-precision norm prescreen, then exact confirmation
                double np = 1;
                for (long i = 0; i < n; i++) {
                    std::complex<double> s = 0;
                    for (long j = 0; j < n; j++)
                        s += k[static_cast<size_t>(j)].get_d() * emb[static_cast<size_t>(i * n + j)];
                    np *= std::abs(s);
                }
                if (!(std::abs(np - tdbl) <= 1e-6 * (1 + tdbl))) return std::nullopt;
                FieldElement lam = FieldElement::zero(F);
                for (long j = 0; j < n; j++) lam = lam + QQ(k[static_cast<size_t>(j)]) * cg[static_cast<size_t>(j)];
                if (lam.is_zero() || abs(lam.norm()) != t) return std::nullopt;
                if (M.scaled(lam) == N) return EquivResult{EquivResult::Status::yes, lam};
                return std::nullopt;
            }
            for (long v = -h; v <= h; v++) {
                k[static_cast<size_t>(pos)] = v;
                if (auto r = rec(pos + 1, hit || std::labs(v) == h)) return r;
            }
            return std::nullopt;
        };
        if (auto r = rec(0, false)) return *r;
    }
    return {EquivResult::Status::inconclusive, std::nullopt};
}

} // namespace charpoly

#endif
