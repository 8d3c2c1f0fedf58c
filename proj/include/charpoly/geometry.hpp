#ifndef CHARPOLY_GEOMETRY_HPP
#define CHARPOLY_GEOMETRY_HPP

/* Block-coordinate geometry behind the census asymptotics.  The roots of P
 * give a block-diagonal model point
 *
 *     X1 = diag(d_1, ..., d_{r1+r2}),
 *
 * with 1x1 blocks for real roots and 2x2 blocks [[a,-b],[b,a]] for complex
 * pairs.  The strictly-upper block space U (dimension m - r2) together with
 * the r2 unipotent parameters t carries the map
 *
 *     Psi(t, x) = h(sqrt t) u(x),
 *
 * and the region D1_T = { ||Psi X1 Psi^{-1}|| < T } is the exact image of
 * the half-ball B+_{sqrt(T^2-||X1||^2)} under the solved map tilde_delta.
 * Its polynomial-like approximation delta has constant Jacobian
 * 2^{r2}/sqrt|disc P| and satisfies the sandwich
 *
 *     delta(B+_{T-2-||X1||^2/T})  <  D1_T  <  delta(B+_T).
 *
 * Every solved map re-derives its defining identity through explicit matrix
 * arithmetic, so the algebraic shortcut and the matrix route check each
 * other on every evaluation.
 */

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "charpoly/constants.hpp"
#include "charpoly/polynomial.hpp"
#include "charpoly/prelude.hpp"
#include "charpoly/qmc.hpp"
#include "charpoly/roots.hpp"

namespace charpoly {

/* Minimal dense double matrix; sizes here never exceed n x n. */
struct RMat {
    int r = 0, c = 0;
    std::vector<double> a;

    RMat() = default;
    RMat(int rows, int cols) : r(rows), c(cols), a(static_cast<size_t>(rows * cols), 0.0) {}

    double &operator()(int i, int j) { return a[static_cast<size_t>(i * c + j)]; }
    double operator()(int i, int j) const { return a[static_cast<size_t>(i * c + j)]; }

    static RMat identity(int n) {
        RMat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    RMat operator*(const RMat &o) const {
        RMat out(r, o.c);
        for (int i = 0; i < r; ++i)
            for (int k = 0; k < c; ++k) {
                double v = (*this)(i, k);
                if (v == 0.0) continue;
                for (int j = 0; j < o.c; ++j) out(i, j) += v * o(k, j);
            }
        return out;
    }

    RMat operator-(const RMat &o) const {
        RMat out = *this;
        for (size_t i = 0; i < a.size(); ++i) out.a[i] -= o.a[i];
        return out;
    }

    RMat operator+(const RMat &o) const {
        RMat out = *this;
        for (size_t i = 0; i < a.size(); ++i) out.a[i] += o.a[i];
        return out;
    }

    double frob2() const {
        double s = 0.0;
        for (double v : a) s += v * v;
        return s;
    }
};

/* One verification outcome; `pass` is against the stated tolerance. */
struct CheckReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string note;
};

inline CheckReport make_check(const std::string &name, double lhs, double rhs, double tol,
                              const std::string &note = "") {
    CheckReport rep;
    rep.name = name;
    rep.lhs = lhs;
    rep.rhs = rhs;
    rep.abs_err = std::abs(lhs - rhs);
    double scale = std::max(std::abs(lhs), std::abs(rhs));
    rep.rel_err = scale > 0 ? rep.abs_err / scale : rep.abs_err;
    rep.tol = tol;
    rep.pass = rep.rel_err < tol;
    rep.note = note;
    return rep;
}

class GeometrySession {
  public:
    explicit GeometrySession(const IntPolynomial &P) : poly_(P) {
        RootSet rs = roots(P);
        r1_ = rs.r1;
        r2_ = rs.r2;
        n_ = static_cast<int>(P.degree());
        m_ = n_ * (n_ - 1) / 2;
        nb_ = r1_ + r2_;
        disc_ = discriminant(P);

        bsize_.resize(nb_);
        boff_.resize(nb_);
        int off = 0;
        for (int i = 0; i < nb_; ++i) {
            bsize_[i] = (i < r1_) ? 1 : 2;
            boff_[i] = off;
            off += bsize_[i];
        }
        for (int i = 0; i < r1_; ++i) dreal_.push_back(rs.sigma[static_cast<size_t>(i)].re);
        for (int i = 0; i < r2_; ++i) {
            const auto &bx = rs.sigma[static_cast<size_t>(r1_ + i)];
            dcomplex_.emplace_back(bx.re, bx.im);
            if (!(bx.im > 0)) throw error("geometry: complex representative must have Im > 0");
        }

        X1_ = RMat(n_, n_);
        for (int i = 0; i < r1_; ++i) X1_(i, i) = dreal_[static_cast<size_t>(i)];
        for (int i = 0; i < r2_; ++i) {
            int o = boff_[static_cast<size_t>(r1_ + i)];
            double a = dcomplex_[static_cast<size_t>(i)].real();
            double b = dcomplex_[static_cast<size_t>(i)].imag();
            X1_(o, o) = a;
            X1_(o, o + 1) = -b;
            X1_(o + 1, o) = b;
            X1_(o + 1, o + 1) = a;
        }
        x1_norm2_ = X1_.frob2();

        int zoff = 0;
        for (int i = 0; i < nb_; ++i)
            for (int j = i + 1; j < nb_; ++j) {
                UBlock ub;
                ub.bi = i;
                ub.bj = j;
                ub.rows = bsize_[static_cast<size_t>(i)];
                ub.cols = bsize_[static_cast<size_t>(j)];
                ub.off = zoff;
                zoff += ub.rows * ub.cols;
                ublocks_.push_back(ub);
            }
        udim_ = zoff;
        if (udim_ != m_ - r2_) throw error("geometry: U-dimension bookkeeping failed");
        build_sij();
    }

    int n() const { return n_; }
    int real_places() const { return r1_; }
    int complex_places() const { return r2_; }
    int ball_dim() const { return m_; }
    int u_dim() const { return udim_; }
    const RMat &X1() const { return X1_; }
    double X1_norm2() const { return x1_norm2_; }
    const ZZ &disc() const { return disc_; }
    const IntPolynomial &poly() const { return poly_; }

    /* |b_i| for the i-th complex block. */
    double b_abs(int i) const { return dcomplex_[static_cast<size_t>(i)].imag(); }

    struct Coords {
        std::vector<double> t; // r2 unipotent parameters
        std::vector<double> x; // packed U blocks
    };

    /* u(x) and its exact inverse (Neumann series of the nilpotent part). */
    RMat u_of(const std::vector<double> &x) const {
        RMat u = RMat::identity(n_);
        place_blocks(u, x, 1.0);
        return u;
    }

    RMat u_inv_of(const std::vector<double> &x) const {
        RMat nmat(n_, n_);
        place_blocks(nmat, x, 1.0);
        RMat acc = RMat::identity(n_);
        RMat pw = nmat;
        double sign = -1.0;
        for (int k = 1; k < nb_; ++k) {
            for (size_t i = 0; i < acc.a.size(); ++i) acc.a[i] += sign * pw.a[i];
            pw = pw * nmat;
            sign = -sign;
        }
        return acc;
    }

    /* h(tau) with per-complex-block upper-triangular unipotents. */
    RMat h_of(const std::vector<double> &tau) const {
        RMat h = RMat::identity(n_);
        for (int i = 0; i < r2_; ++i) {
            int o = boff_[static_cast<size_t>(r1_ + i)];
            h(o, o + 1) = tau[static_cast<size_t>(i)];
        }
        return h;
    }

    RMat Psi(const Coords &c) const {
        std::vector<double> tau(static_cast<size_t>(r2_));
        for (int i = 0; i < r2_; ++i) tau[static_cast<size_t>(i)] = std::sqrt(c.t[static_cast<size_t>(i)]);
        return h_of(tau) * u_of(c.x);
    }

    /* ||Psi X1 Psi^{-1}||_F^2 through explicit matrix products. */
    double conj_norm2(const Coords &c) const {
        std::vector<double> tau(static_cast<size_t>(r2_)), ntau(static_cast<size_t>(r2_));
        for (int i = 0; i < r2_; ++i) {
            tau[static_cast<size_t>(i)] = std::sqrt(c.t[static_cast<size_t>(i)]);
            ntau[static_cast<size_t>(i)] = -tau[static_cast<size_t>(i)];
        }
        RMat conj = h_of(tau) * (u_of(c.x) * X1_ * u_inv_of(c.x)) * h_of(ntau);
        return conj.frob2();
    }

    /* Exact solved map: tilde_delta(s, z) with the conjugation-norm identity
     * re-verified on every call (matrix route vs algebraic shortcut).
     */
    Coords tilde_delta(const std::vector<double> &s, const std::vector<double> &z) const {
        Coords c = solve(s, z, /*poly_like=*/false);
        double lhs = conj_norm2(c);
        double rhs = x1_norm2_ + sq_sum(s) + sq_sum(z);
        double scale = std::max(1.0, std::max(lhs, rhs));
        if (!(std::abs(lhs - rhs) <= 1e-9 * scale))
            throw precision_error("tilde_delta: conjugation-norm identity violated");
        return c;
    }

    /* Polynomial-like approximation delta(s, z); also checks 0 <= t'-t < 2. */
    Coords delta(const std::vector<double> &s, const std::vector<double> &z) const {
        Coords c = solve(s, z, /*poly_like=*/true);
        for (int i = 0; i < r2_; ++i) {
            double si = s[static_cast<size_t>(i)];
            double bi = b_abs(i);
            double t_exact = std::sqrt(si * si / (bi * bi) + 4.0) - 2.0;
            double gap = c.t[static_cast<size_t>(i)] - t_exact;
            if (!(gap >= -1e-12 && gap < 2.0))
                throw precision_error("delta: t' - t outside [0, 2)");
        }
        return c;
    }

    /* Inverse of delta (tilde = false) or of tilde_delta (tilde = true). */
    void invert(const Coords &c, bool tilde, std::vector<double> &s_out,
                std::vector<double> &z_out) const {
        s_out.assign(static_cast<size_t>(r2_), 0.0);
        std::vector<double> tau(static_cast<size_t>(r2_)), ntau(static_cast<size_t>(r2_));
        for (int i = 0; i < r2_; ++i) {
            double ti = c.t[static_cast<size_t>(i)];
            double bi = b_abs(i);
            s_out[static_cast<size_t>(i)] =
                tilde ? std::sqrt(bi * bi * (ti * ti + 4.0 * ti)) : bi * ti;
            tau[static_cast<size_t>(i)] = std::sqrt(ti);
            ntau[static_cast<size_t>(i)] = -tau[static_cast<size_t>(i)];
        }
        z_out.assign(static_cast<size_t>(udim_), 0.0);
        std::vector<double> partial(static_cast<size_t>(udim_), 0.0);
        for (int gap = 1; gap < nb_; ++gap) {
            RMat w = conj_by_u(partial);
            for (const auto &ub : ublocks_) {
                if (ub.bj - ub.bi != gap) continue;
                /* z_ij = h(tau_i) (S_ij(x_ij) + Q_ij) h(-tau_j); with x_ij
                 * zeroed in `partial`, the W block is exactly Q_ij. */
                RMat q = block_at(w, ub);
                RMat sx = apply_sij(ub, c.x);
                RMat inner = sx + q;
                RMat lhs = hmul_left(ub.bi, tau, inner);
                RMat res = hmul_right(ub.bj, ntau, lhs);
                copy_into(z_out, ub, res);
                copy_block(partial, c.x, ub);
            }
        }
    }

    /* Theta(s, z) = Psi(delta(s^2, z)) with signed square roots; entries are
     * polynomials in (s, z).
     */
    RMat Theta(const std::vector<double> &s, const std::vector<double> &z) const {
        std::vector<double> tau(static_cast<size_t>(r2_)), ntau(static_cast<size_t>(r2_));
        for (int i = 0; i < r2_; ++i) {
            double bi = b_abs(i);
            tau[static_cast<size_t>(i)] = s[static_cast<size_t>(i)] / std::sqrt(bi);
            ntau[static_cast<size_t>(i)] = -tau[static_cast<size_t>(i)];
        }
        std::vector<double> x = solve_x(tau, ntau, z);
        return h_of(tau) * u_of(x);
    }

    /* Constant Jacobian of delta from the analytic product formula. */
    double jacobian_closed_form() const {
        return std::ldexp(1.0, r2_) / std::sqrt(std::abs(disc_.get_d()));
    }

    /* Pointwise Jacobian of tilde_delta (diagonal-block product). */
    double tilde_jacobian(const std::vector<double> &s) const {
        double j = 1.0;
        for (int i = 0; i < r2_; ++i) {
            double si = s[static_cast<size_t>(i)];
            double bi = b_abs(i);
            j *= (si / (bi * bi)) / std::sqrt(si * si / (bi * bi) + 4.0);
        }
        for (const auto &ub : ublocks_) j /= std::abs(ub.det);
        return j;
    }

    /* |det S_ij| by elimination vs the cross-block product of root gaps. */
    std::vector<CheckReport> sij_det_checks() const {
        std::vector<CheckReport> out;
        for (const auto &ub : ublocks_) {
            double prod = 1.0;
            for (std::complex<double> si : block_roots(ub.bi))
                for (std::complex<double> sj : block_roots(ub.bj)) prod *= std::abs(sj - si);
            out.push_back(make_check("det_S_" + std::to_string(ub.bi) + std::to_string(ub.bj),
                                     std::abs(ub.det), prod, 1e-9));
        }
        return out;
    }

  private:
    struct UBlock {
        int bi = 0, bj = 0, rows = 0, cols = 0, off = 0;
        std::vector<double> op;     // dense matrix of S_ij on vectorized blocks
        std::vector<double> op_inv; // its inverse
        double det = 0.0;
    };

    IntPolynomial poly_;
    int n_ = 0, r1_ = 0, r2_ = 0, m_ = 0, nb_ = 0, udim_ = 0;
    ZZ disc_;
    std::vector<int> bsize_, boff_;
    std::vector<double> dreal_;
    std::vector<std::complex<double>> dcomplex_;
    RMat X1_;
    double x1_norm2_ = 0.0;
    std::vector<UBlock> ublocks_;

    static double sq_sum(const std::vector<double> &v) {
        double s = 0.0;
        for (double a : v) s += a * a;
        return s;
    }

    std::vector<std::complex<double>> block_roots(int b) const {
        if (b < r1_) return {std::complex<double>(dreal_[static_cast<size_t>(b)], 0.0)};
        std::complex<double> d = dcomplex_[static_cast<size_t>(b - r1_)];
        return {d, std::conj(d)};
    }

    RMat d_block(int b) const {
        if (b < r1_) {
            RMat m(1, 1);
            m(0, 0) = dreal_[static_cast<size_t>(b)];
            return m;
        }
        RMat m(2, 2);
        std::complex<double> d = dcomplex_[static_cast<size_t>(b - r1_)];
        m(0, 0) = d.real();
        m(0, 1) = -d.imag();
        m(1, 0) = d.imag();
        m(1, 1) = d.real();
        return m;
    }

    /* Dense operator of S_ij(x) = x d_j - d_i x on the vectorized block,
     * plus determinant and inverse by Gauss-Jordan (size <= 4).
     */
    void build_sij() {
        for (auto &ub : ublocks_) {
            int dim = ub.rows * ub.cols;
            RMat di = d_block(ub.bi), dj = d_block(ub.bj);
            ub.op.assign(static_cast<size_t>(dim * dim), 0.0);
            for (int k = 0; k < dim; ++k) {
                RMat e(ub.rows, ub.cols);
                e.a[static_cast<size_t>(k)] = 1.0;
                RMat img = e * dj - di * e;
                for (int r = 0; r < dim; ++r)
                    ub.op[static_cast<size_t>(r * dim + k)] = img.a[static_cast<size_t>(r)];
            }
            /* Gauss-Jordan with partial pivoting. */
            std::vector<double> aug(ub.op);
            std::vector<double> inv(static_cast<size_t>(dim * dim), 0.0);
            for (int i = 0; i < dim; ++i) inv[static_cast<size_t>(i * dim + i)] = 1.0;
            double det = 1.0;
            for (int col = 0; col < dim; ++col) {
                int piv = col;
                for (int r = col + 1; r < dim; ++r)
                    if (std::abs(aug[static_cast<size_t>(r * dim + col)]) >
                        std::abs(aug[static_cast<size_t>(piv * dim + col)]))
                        piv = r;
                if (piv != col) {
                    for (int j = 0; j < dim; ++j) {
                        std::swap(aug[static_cast<size_t>(col * dim + j)],
                                  aug[static_cast<size_t>(piv * dim + j)]);
                        std::swap(inv[static_cast<size_t>(col * dim + j)],
                                  inv[static_cast<size_t>(piv * dim + j)]);
                    }
                    det = -det;
                }
                double p = aug[static_cast<size_t>(col * dim + col)];
                if (std::abs(p) < 1e-14) throw precision_error("geometry: singular S_ij");
                det *= p;
                for (int j = 0; j < dim; ++j) {
                    aug[static_cast<size_t>(col * dim + j)] /= p;
                    inv[static_cast<size_t>(col * dim + j)] /= p;
                }
                for (int r = 0; r < dim; ++r) {
                    if (r == col) continue;
                    double f = aug[static_cast<size_t>(r * dim + col)];
                    if (f == 0.0) continue;
                    for (int j = 0; j < dim; ++j) {
                        aug[static_cast<size_t>(r * dim + j)] -= f * aug[static_cast<size_t>(col * dim + j)];
                        inv[static_cast<size_t>(r * dim + j)] -= f * inv[static_cast<size_t>(col * dim + j)];
                    }
                }
            }
            ub.op_inv = std::move(inv);
            ub.det = det;
        }
    }

    void place_blocks(RMat &m, const std::vector<double> &x, double scale) const {
        for (const auto &ub : ublocks_) {
            int ro = boff_[static_cast<size_t>(ub.bi)], co = boff_[static_cast<size_t>(ub.bj)];
            for (int r = 0; r < ub.rows; ++r)
                for (int c = 0; c < ub.cols; ++c)
                    m(ro + r, co + c) = scale * x[static_cast<size_t>(ub.off + r * ub.cols + c)];
        }
    }

    RMat block_at(const RMat &m, const UBlock &ub) const {
        RMat out(ub.rows, ub.cols);
        int ro = boff_[static_cast<size_t>(ub.bi)], co = boff_[static_cast<size_t>(ub.bj)];
        for (int r = 0; r < ub.rows; ++r)
            for (int c = 0; c < ub.cols; ++c) out(r, c) = m(ro + r, co + c);
        return out;
    }

    RMat conj_by_u(const std::vector<double> &x) const { return u_of(x) * X1_ * u_inv_of(x); }

    RMat apply_sij(const UBlock &ub, const std::vector<double> &x) const {
        int dim = ub.rows * ub.cols;
        RMat out(ub.rows, ub.cols);
        for (int r = 0; r < dim; ++r) {
            double acc = 0.0;
            for (int k = 0; k < dim; ++k)
                acc += ub.op[static_cast<size_t>(r * dim + k)] * x[static_cast<size_t>(ub.off + k)];
            out.a[static_cast<size_t>(r)] = acc;
        }
        return out;
    }

    RMat apply_sij_inv(const UBlock &ub, const RMat &rhs) const {
        int dim = ub.rows * ub.cols;
        RMat out(ub.rows, ub.cols);
        for (int r = 0; r < dim; ++r) {
            double acc = 0.0;
            for (int k = 0; k < dim; ++k)
                acc += ub.op_inv[static_cast<size_t>(r * dim + k)] * rhs.a[static_cast<size_t>(k)];
            out.a[static_cast<size_t>(r)] = acc;
        }
        return out;
    }

    RMat hmul_left(int blk, const std::vector<double> &tau, const RMat &m) const {
        if (blk < r1_) return m;
        double v = tau[static_cast<size_t>(blk - r1_)];
        RMat out = m; /* [[1, v],[0,1]] * m */
        for (int j = 0; j < m.c; ++j) out(0, j) += v * m(1, j);
        return out;
    }

    RMat hmul_right(int blk, const std::vector<double> &tau, const RMat &m) const {
        if (blk < r1_) return m;
        double v = tau[static_cast<size_t>(blk - r1_)];
        RMat out = m; /* m * [[1, v],[0,1]] */
        for (int i = 0; i < m.r; ++i) out(i, 1) += v * m(i, 0);
        return out;
    }

    static void copy_into(std::vector<double> &dst, const UBlock &ub, const RMat &m) {
        for (int k = 0; k < ub.rows * ub.cols; ++k)
            dst[static_cast<size_t>(ub.off + k)] = m.a[static_cast<size_t>(k)];
    }

    static void copy_block(std::vector<double> &dst, const std::vector<double> &src,
                           const UBlock &ub) {
        for (int k = 0; k < ub.rows * ub.cols; ++k)
            dst[static_cast<size_t>(ub.off + k)] = src[static_cast<size_t>(ub.off + k)];
    }

    /* Shared gap-ascending solver for x given tau = sqrt(t) (signed allowed). */
    std::vector<double> solve_x(const std::vector<double> &tau, const std::vector<double> &ntau,
                                const std::vector<double> &z) const {
        std::vector<double> x(static_cast<size_t>(udim_), 0.0);
        for (int gap = 1; gap < nb_; ++gap) {
            RMat w = conj_by_u(masked(x, gap));
            for (const auto &ub : ublocks_) {
                if (ub.bj - ub.bi != gap) continue;
                RMat q = block_at(w, ub);
                RMat zblk(ub.rows, ub.cols);
                for (int k = 0; k < ub.rows * ub.cols; ++k)
                    zblk.a[static_cast<size_t>(k)] = z[static_cast<size_t>(ub.off + k)];
                RMat rhs = hmul_right(ub.bj, tau, hmul_left(ub.bi, ntau, zblk)) - q;
                RMat sol = apply_sij_inv(ub, rhs);
                copy_into(x, ub, sol);
            }
        }
        return x;
    }

    std::vector<double> masked(const std::vector<double> &x, int max_gap_excl) const {
        std::vector<double> out(static_cast<size_t>(udim_), 0.0);
        for (const auto &ub : ublocks_)
            if (ub.bj - ub.bi < max_gap_excl) copy_block(out, x, ub);
        return out;
    }

    Coords solve(const std::vector<double> &s, const std::vector<double> &z, bool poly_like) const {
        if (static_cast<int>(s.size()) != r2_ || static_cast<int>(z.size()) != udim_)
            throw invalid_input("geometry: coordinate dimensions mismatch");
        for (double v : s)
            if (!(v >= 0.0)) throw invalid_input("geometry: s-coordinates must be >= 0");
        Coords c;
        c.t.resize(static_cast<size_t>(r2_));
        std::vector<double> tau(static_cast<size_t>(r2_)), ntau(static_cast<size_t>(r2_));
        for (int i = 0; i < r2_; ++i) {
            double bi = b_abs(i);
            double ti = poly_like ? s[static_cast<size_t>(i)] / bi
                                  : std::sqrt(s[static_cast<size_t>(i)] * s[static_cast<size_t>(i)] /
                                                  (bi * bi) +
                                              4.0) -
                                        2.0;
            c.t[static_cast<size_t>(i)] = ti;
            tau[static_cast<size_t>(i)] = std::sqrt(ti);
            ntau[static_cast<size_t>(i)] = -tau[static_cast<size_t>(i)];
        }
        c.x = solve_x(tau, ntau, z);
        return c;
    }
};

/* ------------------------------------------------------------------ */
/* Verification drivers                                               */
/* ------------------------------------------------------------------ */

/* Finite-difference Jacobian of delta with Richardson extrapolation at
 * `points` random base points; the determinant must be constant and equal
 * to 2^{r2}/sqrt|disc P| within 1e-6.
 */
inline std::vector<CheckReport> jacobian_check(const GeometrySession &g, std::uint64_t seed,
                                               int points = 10) {
    int dim = g.ball_dim();
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    auto eval = [&g](const std::vector<double> &p) {
        std::vector<double> s(p.begin(), p.begin() + g.complex_places());
        std::vector<double> z(p.begin() + g.complex_places(), p.end());
        GeometrySession::Coords c = g.delta(s, z);
        std::vector<double> out;
        out.insert(out.end(), c.t.begin(), c.t.end());
        out.insert(out.end(), c.x.begin(), c.x.end());
        return out;
    };
    auto det_at = [&](const std::vector<double> &base, double h) {
        std::vector<std::vector<double>> jac(static_cast<size_t>(dim),
                                             std::vector<double>(static_cast<size_t>(dim)));
        for (int j = 0; j < dim; ++j) {
            std::vector<double> hi = base, lo = base;
            hi[static_cast<size_t>(j)] += h;
            lo[static_cast<size_t>(j)] -= h;
            std::vector<double> fh = eval(hi), fl = eval(lo);
            for (int i = 0; i < dim; ++i)
                jac[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                    (fh[static_cast<size_t>(i)] - fl[static_cast<size_t>(i)]) / (2.0 * h);
        }
        double det = 1.0;
        for (int col = 0; col < dim; ++col) {
            int piv = col;
            for (int r = col + 1; r < dim; ++r)
                if (std::abs(jac[static_cast<size_t>(r)][static_cast<size_t>(col)]) >
                    std::abs(jac[static_cast<size_t>(piv)][static_cast<size_t>(col)]))
                    piv = r;
            if (piv != col) {
                std::swap(jac[static_cast<size_t>(col)], jac[static_cast<size_t>(piv)]);
                det = -det;
            }
            double p = jac[static_cast<size_t>(col)][static_cast<size_t>(col)];
            det *= p;
            if (p == 0.0) return 0.0;
            for (int r = col + 1; r < dim; ++r) {
                double f = jac[static_cast<size_t>(r)][static_cast<size_t>(col)] / p;
                for (int j2 = col; j2 < dim; ++j2)
                    jac[static_cast<size_t>(r)][static_cast<size_t>(j2)] -=
                        f * jac[static_cast<size_t>(col)][static_cast<size_t>(j2)];
            }
        }
        return std::abs(det);
    };

    double closed = g.jacobian_closed_form();
    std::vector<CheckReport> out;
    double lo = 1e300, hi = 0.0;
    for (int p = 0; p < points; ++p) {
        std::vector<double> base(static_cast<size_t>(dim));
        for (int i = 0; i < g.complex_places(); ++i) base[static_cast<size_t>(i)] = 0.5 + 1.5 * unit();
        for (int i = g.complex_places(); i < dim; ++i) base[static_cast<size_t>(i)] = 2.0 * unit() - 1.0;
        double d1 = det_at(base, 1e-5);
        double d2 = det_at(base, 5e-6);
        double det = (4.0 * d2 - d1) / 3.0;
        lo = std::min(lo, det);
        hi = std::max(hi, det);
        out.push_back(make_check("jacobian_point_" + std::to_string(p), det, closed, 1e-6));
    }
    out.push_back(make_check("jacobian_spread", hi - lo, 0.0, 1.0, "absolute spread"));
    out.back().pass = (hi - lo) < 1e-6;
    out.back().tol = 1e-6;
    return out;
}

/* Sandwich membership test: inner ball maps inside D1_T under delta, and
 * delta-preimages of D1_T points lie inside B+_T.  Zero violations pass.
 */
inline CheckReport sandwich_check(const GeometrySession &g, double T, long samples,
                                  std::uint64_t seed) {
    double x1n = std::sqrt(g.X1_norm2());
    if (!(T > x1n + 2.0)) throw invalid_input("sandwich_check: need T > ||X1|| + 2");
    int dim = g.ball_dim();
    int r2 = g.complex_places();
    double inner_radius = T - 2.0 - g.X1_norm2() / T;
    double exact_radius = std::sqrt(T * T - g.X1_norm2());

    std::mt19937_64 rng(seed);
    auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    long inner_bad = 0, outer_bad = 0;
    std::vector<double> u(static_cast<size_t>(dim) + 1), pt(static_cast<size_t>(dim));
    for (long k = 0; k < samples; ++k) {
        for (auto &v : u) v = unit();
        ball_point(u.data(), dim, pt.data());
        std::vector<double> s(static_cast<size_t>(r2)), z(static_cast<size_t>(dim - r2));
        for (int i = 0; i < r2; ++i) s[static_cast<size_t>(i)] = std::abs(pt[static_cast<size_t>(i)]);
        for (int i = r2; i < dim; ++i) z[static_cast<size_t>(i - r2)] = pt[static_cast<size_t>(i)];

        /* Inner inclusion at radius T - 2 - ||X1||^2/T. */
        std::vector<double> si = s, zi = z;
        for (auto &v : si) v *= inner_radius;
        for (auto &v : zi) v *= inner_radius;
        GeometrySession::Coords ci = g.delta(si, zi);
        if (!(g.conj_norm2(ci) < T * T)) ++inner_bad;

        /* Outer inclusion: D1_T point via tilde_delta, preimage under delta. */
        std::vector<double> so = s, zo = z;
        for (auto &v : so) v *= exact_radius;
        for (auto &v : zo) v *= exact_radius;
        GeometrySession::Coords co = g.tilde_delta(so, zo);
        std::vector<double> sp, zp;
        g.invert(co, /*tilde=*/false, sp, zp);
        double norm2 = 0.0;
        for (double v : sp) norm2 += v * v;
        for (double v : zp) norm2 += v * v;
        if (!(norm2 < T * T * (1.0 + 1e-12))) ++outer_bad;
    }
    CheckReport rep = make_check("sandwich_violations", static_cast<double>(inner_bad + outer_bad),
                                 0.0, 1.0);
    rep.pass = (inner_bad == 0 && outer_bad == 0);
    rep.tol = 0.0;
    rep.note = "inner=" + std::to_string(inner_bad) + " outer=" + std::to_string(outer_bad) +
               " samples=" + std::to_string(samples);
    return rep;
}

/* Monte Carlo estimate of c_eta at finite T.
 *
 * ell(D1_T) is integrated in (s, z) over B+_T with the pointwise Jacobian
 * of tilde_delta as weight and membership decided by the explicit matrix
 * inequality ||Psi X1 Psi^{-1}|| < T.  The estimate targets
 * (2 pi)^{r2} 2^{-(n-1)} ell(D1_T) / T^m, whose T -> infinity limit is
 * c_eta; at finite T the sandwich confines it to
 *     [ c_eta ((T - 2 - ||X1||^2/T)/T)^m , c_eta ],
 * so the pass window pads that interval by 3 standard errors.
 */
struct CetaReport {
    CheckReport check;
    double estimate = 0.0;
    double std_error = 0.0;
    double closed_form = 0.0;
    double lower = 0.0;
    double upper = 0.0;
};

inline CetaReport mc_c_eta(const GeometrySession &g, double T, long samples, std::uint64_t seed) {
    double x1n = std::sqrt(g.X1_norm2());
    if (!(T > x1n + 2.0)) throw invalid_input("mc_c_eta: need T > ||X1|| + 2");
    int dim = g.ball_dim();
    int r2 = g.complex_places();
    int n = g.n();

    /* Vol(B+_T) = 2^{-r2} Vol(B^m) T^m. */
    double pi = std::acos(-1.0);
    double vol_bm = std::pow(pi, 0.5 * dim) / std::exp(std::lgamma(1.0 + 0.5 * dim));
    double vol_bplus = std::ldexp(vol_bm, -r2) * std::pow(T, dim);

    auto integrand = [&](const double *uc) {
        double pt[64];
        ball_point(uc, dim, pt);
        std::vector<double> s(static_cast<size_t>(r2)), z(static_cast<size_t>(dim - r2));
        for (int i = 0; i < r2; ++i) s[static_cast<size_t>(i)] = T * std::abs(pt[i]);
        for (int i = r2; i < dim; ++i) z[static_cast<size_t>(i - r2)] = T * pt[i];
        GeometrySession::Coords c = g.tilde_delta(s, z);
        if (!(g.conj_norm2(c) < T * T)) return 0.0;
        return g.tilde_jacobian(s);
    };
    QmcResult q = qmc_integrate(dim + 1, samples, 16, seed, integrand);

    double factor = std::pow(2.0 * pi, r2) * std::ldexp(1.0, -(n - 1)) / std::pow(T, dim);
    CetaReport rep;
    rep.estimate = factor * vol_bplus * q.mean;
    rep.std_error = factor * vol_bplus * q.std_error;
    rep.closed_form = c_eta(n, r2, g.disc());
    double shrink = std::pow((T - 2.0 - g.X1_norm2() / T) / T, dim);
    rep.lower = rep.closed_form * shrink - 3.0 * rep.std_error;
    rep.upper = rep.closed_form + 3.0 * rep.std_error;
    rep.check = make_check("mc_c_eta", rep.estimate, rep.closed_form, 1.0);
    rep.check.pass = (rep.estimate >= rep.lower && rep.estimate <= rep.upper);
    rep.check.tol = 0.0;
    rep.check.note = "window [" + std::to_string(rep.lower) + ", " + std::to_string(rep.upper) +
                     "], stderr " + std::to_string(rep.std_error);
    return rep;
}

/* Theta(0) = identity. */
inline CheckReport theta_zero_check(const GeometrySession &g) {
    std::vector<double> s(static_cast<size_t>(g.complex_places()), 0.0);
    std::vector<double> z(static_cast<size_t>(g.u_dim()), 0.0);
    RMat th = g.Theta(s, z);
    RMat diff = th - RMat::identity(g.n());
    return make_check("theta_zero", std::sqrt(diff.frob2()), 0.0, 1.0, "Frobenius distance");
}

/* Polynomiality of Theta: along random lines every entry must be fitted
 * exactly (to 1e-8) by a degree-`fit_degree` interpolating polynomial.
 */
inline CheckReport theta_poly_check(const GeometrySession &g, std::uint64_t seed,
                                    int fit_degree = 8) {
    int dim = g.ball_dim();
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    double worst = 0.0;
    for (int line = 0; line < 5; ++line) {
        std::vector<double> base(static_cast<size_t>(dim)), dir(static_cast<size_t>(dim));
        for (auto &v : base) v = 2.0 * unit() - 1.0;
        for (auto &v : dir) v = 2.0 * unit() - 1.0;
        auto theta_at = [&](double tau) {
            std::vector<double> s(static_cast<size_t>(g.complex_places()));
            std::vector<double> z(static_cast<size_t>(g.u_dim()));
            for (int i = 0; i < g.complex_places(); ++i)
                s[static_cast<size_t>(i)] = base[static_cast<size_t>(i)] + tau * dir[static_cast<size_t>(i)];
            for (int i = g.complex_places(); i < dim; ++i)
                z[static_cast<size_t>(i - g.complex_places())] =
                    base[static_cast<size_t>(i)] + tau * dir[static_cast<size_t>(i)];
            return g.Theta(s, z);
        };
        int nodes = fit_degree + 1;
        std::vector<double> xs(static_cast<size_t>(nodes));
        for (int k = 0; k < nodes; ++k)
            xs[static_cast<size_t>(k)] = -1.0 + 2.0 * k / (nodes - 1);
        std::vector<RMat> vals;
        for (double tau : xs) vals.push_back(theta_at(tau));
        int n2 = g.n() * g.n();
        /* Newton divided differences per entry. */
        std::vector<std::vector<double>> coef(static_cast<size_t>(n2),
                                              std::vector<double>(static_cast<size_t>(nodes)));
        for (int e = 0; e < n2; ++e) {
            std::vector<double> d(static_cast<size_t>(nodes));
            for (int k = 0; k < nodes; ++k) d[static_cast<size_t>(k)] = vals[static_cast<size_t>(k)].a[static_cast<size_t>(e)];
            for (int lvl = 1; lvl < nodes; ++lvl)
                for (int k = nodes - 1; k >= lvl; --k)
                    d[static_cast<size_t>(k)] =
                        (d[static_cast<size_t>(k)] - d[static_cast<size_t>(k - 1)]) /
                        (xs[static_cast<size_t>(k)] - xs[static_cast<size_t>(k - lvl)]);
            coef[static_cast<size_t>(e)] = d;
        }
        for (int probe = 0; probe < 20; ++probe) {
            double tau = 2.0 * unit() - 1.0;
            RMat truth = theta_at(tau);
            for (int e = 0; e < n2; ++e) {
                double acc = coef[static_cast<size_t>(e)][static_cast<size_t>(nodes - 1)];
                for (int k = nodes - 2; k >= 0; --k)
                    acc = acc * (tau - xs[static_cast<size_t>(k)]) + coef[static_cast<size_t>(e)][static_cast<size_t>(k)];
                worst = std::max(worst, std::abs(acc - truth.a[static_cast<size_t>(e)]));
            }
        }
    }
    CheckReport rep = make_check("theta_polynomial", worst, 0.0, 1.0, "max interpolation residual");
    rep.pass = worst < 1e-8;
    rep.tol = 1e-8;
    return rep;
}

/* Round trip tilde_delta then its inverse, max coordinate error < 1e-10. */
inline CheckReport roundtrip_check(const GeometrySession &g, std::uint64_t seed, int points = 50) {
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    double worst = 0.0;
    for (int p = 0; p < points; ++p) {
        std::vector<double> s(static_cast<size_t>(g.complex_places()));
        std::vector<double> z(static_cast<size_t>(g.u_dim()));
        for (auto &v : s) v = 3.0 * unit();
        for (auto &v : z) v = 6.0 * unit() - 3.0;
        GeometrySession::Coords c = g.tilde_delta(s, z);
        std::vector<double> s2, z2;
        g.invert(c, /*tilde=*/true, s2, z2);
        for (size_t i = 0; i < s.size(); ++i) worst = std::max(worst, std::abs(s[i] - s2[i]));
        for (size_t i = 0; i < z.size(); ++i) worst = std::max(worst, std::abs(z[i] - z2[i]));
    }
    CheckReport rep = make_check("tilde_delta_roundtrip", worst, 0.0, 1.0, "max coordinate error");
    rep.pass = worst < 1e-10;
    rep.tol = 1e-10;
    return rep;
}

/* ell(B+_T) = 2^{-r2} Vol(B^m) T^m against box-indicator integration. */
inline CheckReport ell_ball_check(const GeometrySession &g, double T, long samples,
                                  std::uint64_t seed) {
    int dim = g.ball_dim();
    int r2 = g.complex_places();
    auto indicator = [&](const double *u) {
        double norm2 = 0.0;
        for (int i = 0; i < dim; ++i) {
            double v = (i < r2) ? u[i] * T : (2.0 * u[i] - 1.0) * T;
            norm2 += v * v;
        }
        return norm2 < T * T ? 1.0 : 0.0;
    };
    QmcResult q = qmc_integrate(dim, samples, 16, seed, indicator);
    double box = std::pow(T, r2) * std::pow(2.0 * T, dim - r2);
    double est = box * q.mean;
    double pi = std::acos(-1.0);
    double vol_bm = std::pow(pi, 0.5 * dim) / std::exp(std::lgamma(1.0 + 0.5 * dim));
    double want = std::ldexp(vol_bm, -r2) * std::pow(T, dim);
    CheckReport rep = make_check("ell_ball", est, want, 1.0);
    double sigma = box * q.std_error;
    rep.pass = std::abs(est - want) < std::max(4.0 * sigma, 1e-9 * want);
    rep.tol = 0.0;
    rep.note = "stderr " + std::to_string(sigma);
    return rep;
}

} // namespace charpoly

#endif
