#ifndef CHARPOLY_NUMFIELD_HPP
#define CHARPOLY_NUMFIELD_HPP

/* Number field Q(alpha) presented on the power basis 1, alpha, ..., alpha^(n-1)
 * of a monic irreducible P. Elements carry exact rational coordinates; the
 * numerical embeddings come from the certified root boxes of P. */

#include "charpoly/polynomial.hpp"
#include "charpoly/qmat.hpp"
#include "charpoly/roots.hpp"

#include <memory>

namespace charpoly {

class NumberField;
using FieldPtr = std::shared_ptr<const NumberField>;

class NumberField {
  public:
    /* Verifies irreducibility (unless the polynomial arrives pre-checked)
     * and certifies the roots once, up front. */
    static FieldPtr create(IntPolynomial P, double root_eps = 1e-12) {
        if (!P.irreducibility_checked() && !is_irreducible(P))
            throw invalid_input("NumberField: reducible polynomial " + P.str());
        return FieldPtr(new NumberField(std::move(P), root_eps));
    }

    const IntPolynomial &poly() const { return P_; }
    long degree() const { return n_; }
    const RootSet &root_set() const { return roots_; }
    const ZZ &disc() const { return disc_; }

    /* Reduce a coordinate vector of length <= 2n-1 modulo P. */
    std::vector<QQ> reduce(const std::vector<QQ> &c) const {
        std::vector<QQ> r(static_cast<size_t>(n_));
        for (size_t k = 0; k < c.size(); k++) {
            if (sgn(c[k]) == 0) continue;
            const auto &pw = pow_[k];
            for (size_t i = 0; i < r.size(); i++)
                if (sgn(pw[i]) != 0) r[i] += c[k] * pw[i];
        }
        return r;
    }

  private:
    NumberField(IntPolynomial P, double root_eps)
        : P_(std::move(P)), n_(P_.degree()), disc_(discriminant(P_)), roots_(roots(P_, root_eps)) {
        // alpha^k on the power basis for k = 0 .. 2n-2
        pow_.resize(static_cast<size_t>(2 * n_ - 1));
        for (long k = 0; k < n_; k++) {
            pow_[static_cast<size_t>(k)].assign(static_cast<size_t>(n_), ZZ(0));
            pow_[static_cast<size_t>(k)][static_cast<size_t>(k)] = 1;
        }
        for (long k = n_; k <= 2 * n_ - 2; k++) {
            const auto &prev = pow_[static_cast<size_t>(k - 1)];
            std::vector<ZZ> cur(static_cast<size_t>(n_), ZZ(0));
            for (long i = 0; i + 1 < n_; i++) cur[static_cast<size_t>(i + 1)] = prev[static_cast<size_t>(i)];
            const ZZ &head = prev[static_cast<size_t>(n_ - 1)];
            if (sgn(head) != 0)
                for (long i = 0; i < n_; i++)
                    cur[static_cast<size_t>(i)] -= head * P_.coeff(static_cast<size_t>(i));
            pow_[static_cast<size_t>(k)] = std::move(cur);
        }
    }

    IntPolynomial P_;
    long n_;
    ZZ disc_;
    RootSet roots_;
    std::vector<std::vector<ZZ>> pow_;
};

class FieldElement {
  public:
    FieldElement(FieldPtr F, std::vector<QQ> coords) : F_(std::move(F)), c_(std::move(coords)) {
        if (static_cast<long>(c_.size()) != F_->degree())
            throw invalid_input("FieldElement: coordinate length mismatch");
    }

    static FieldElement zero(const FieldPtr &F) {
        return {F, std::vector<QQ>(static_cast<size_t>(F->degree()))};
    }
    static FieldElement one(const FieldPtr &F) { return integer(F, QQ(1)); }
    static FieldElement integer(const FieldPtr &F, const QQ &q) {
        std::vector<QQ> c(static_cast<size_t>(F->degree()));
        c[0] = q;
        return {F, std::move(c)};
    }
    static FieldElement alpha(const FieldPtr &F) {
        std::vector<QQ> c(static_cast<size_t>(F->degree()));
        c[1] = 1;
        return {F, std::move(c)};
    }

    const FieldPtr &field() const { return F_; }
    const std::vector<QQ> &coords() const { return c_; }
    bool is_zero() const {
        for (const auto &x : c_)
            if (sgn(x) != 0) return false;
        return true;
    }
    bool operator==(const FieldElement &o) const { return c_ == o.c_; }

    friend FieldElement operator+(const FieldElement &a, const FieldElement &b) {
        std::vector<QQ> c(a.c_.size());
        for (size_t i = 0; i < c.size(); i++) c[i] = a.c_[i] + b.c_[i];
        return {a.F_, std::move(c)};
    }
    friend FieldElement operator-(const FieldElement &a, const FieldElement &b) {
        std::vector<QQ> c(a.c_.size());
        for (size_t i = 0; i < c.size(); i++) c[i] = a.c_[i] - b.c_[i];
        return {a.F_, std::move(c)};
    }
    FieldElement operator-() const {
        std::vector<QQ> c(c_.size());
        for (size_t i = 0; i < c.size(); i++) c[i] = -c_[i];
        return {F_, std::move(c)};
    }
    friend FieldElement operator*(const FieldElement &a, const FieldElement &b) {
        std::vector<QQ> conv(a.c_.size() + b.c_.size() - 1);
        for (size_t i = 0; i < a.c_.size(); i++) {
            if (sgn(a.c_[i]) == 0) continue;
            for (size_t j = 0; j < b.c_.size(); j++) conv[i + j] += a.c_[i] * b.c_[j];
        }
        return {a.F_, a.F_->reduce(conv)};
    }
    friend FieldElement operator*(const QQ &q, const FieldElement &a) {
        std::vector<QQ> c(a.c_.size());
        for (size_t i = 0; i < c.size(); i++) c[i] = q * a.c_[i];
        return {a.F_, std::move(c)};
    }

    /* Inverse via the extended Euclidean algorithm in Q[x]. */
    FieldElement inverse() const {
        if (is_zero()) throw invalid_input("FieldElement: inverse of zero");
        qpoly a(c_.begin(), c_.end());
        trim(a);
        qpoly b = to_q(F_->poly().coeffs());
        // u*a + v*b = g with g a nonzero constant (P irreducible)
        qpoly u{QQ(1)}, u2{};
        qpoly r = a, r2 = b;
        while (!charpoly::is_zero(r2)) {
            auto [q, rem] = divmod(r, r2);
            qpoly un = sub(u, mul(q, u2));
            r = r2;
            r2 = rem;
            u = u2;
            u2 = un;
        }
        if (deg(r) != 0) throw error("FieldElement: gcd not constant");
        QQ ginv = QQ(1) / r[0];
        std::vector<QQ> c(u.begin(), u.end());
        c.resize(static_cast<size_t>(2 * F_->degree() - 1));
        auto red = F_->reduce(c);
        for (auto &x : red) x *= ginv;
        return {F_, std::move(red)};
    }
    friend FieldElement operator/(const FieldElement &a, const FieldElement &b) {
        return a * b.inverse();
    }

    /* Multiplication-by-this matrix on the power basis (column j = this * alpha^j). */
    QMat mult_matrix() const {
        long n = F_->degree();
        QMat m(static_cast<size_t>(n), static_cast<size_t>(n));
        FieldElement cur = *this;
        for (long j = 0; j < n; j++) {
            for (long i = 0; i < n; i++)
                m(static_cast<size_t>(i), static_cast<size_t>(j)) = cur.c_[static_cast<size_t>(i)];
            if (j + 1 < n) cur = cur * alpha(F_);
        }
        return m;
    }

    QQ norm() const { return det(mult_matrix()); }
    QQ trace() const {
        QMat m = mult_matrix();
        QQ t = 0;
        for (size_t i = 0; i < m.nr; i++) t += m(i, i);
        return t;
    }

    /* Numerical image under the i-th embedding, with an error bound that
     * accounts for the certified root radius and double rounding. */
    std::pair<std::complex<double>, double> embed(int i) const {
        const RootBox &box = F_->root_set().sigma[static_cast<size_t>(i)];
        std::complex<double> s = box.value();
        std::complex<double> v = 0;
        double dsum = 0, asum = 0, pw = 1;
        for (size_t k = c_.size(); k-- > 0;) v = v * s + std::complex<double>(c_[k].get_d());
        double sa = std::abs(s);
        for (size_t k = 0; k < c_.size(); k++) {
            double ck = std::abs(c_[k].get_d());
            asum += ck * pw;
            if (k > 0) dsum += ck * static_cast<double>(k) * pw / std::max(sa, 1e-300);
            pw *= sa;
        }
        double err = dsum * box.radius + asum * static_cast<double>(c_.size() + 1) * 1.2e-16;
        return {v, err};
    }

  private:
    FieldPtr F_;
    std::vector<QQ> c_;
};

/* Matrix of multiplication by beta on an arbitrary Q-basis of the field:
 * beta * basis[j] = sum_i Y(i,j) basis[i]. */
inline QMat regular_representation(const FieldElement &beta,
                                   const std::vector<FieldElement> &basis) {
    long n = beta.field()->degree();
    if (static_cast<long>(basis.size()) != n)
        throw invalid_input("regular_representation: basis size != degree");
    QMat B(static_cast<size_t>(n), static_cast<size_t>(n));
    for (long j = 0; j < n; j++)
        for (long i = 0; i < n; i++)
            B(static_cast<size_t>(i), static_cast<size_t>(j)) =
                basis[static_cast<size_t>(j)].coords()[static_cast<size_t>(i)];
    QMat Binv = inverse(B); // throws if not a basis
    QMat Y(static_cast<size_t>(n), static_cast<size_t>(n));
    for (long j = 0; j < n; j++) {
        FieldElement prod = beta * basis[static_cast<size_t>(j)];
        std::vector<QQ> y = Binv * prod.coords();
        for (long i = 0; i < n; i++) Y(static_cast<size_t>(i), static_cast<size_t>(j)) = y[static_cast<size_t>(i)];
    }
    return Y;
}

inline std::pair<QQ, QQ> norm_trace(const FieldElement &beta) {
    QMat m = beta.mult_matrix();
    QQ t = 0;
    for (size_t i = 0; i < m.nr; i++) t += m(i, i);
    return {det(m), t};
}

} // namespace charpoly

#endif
