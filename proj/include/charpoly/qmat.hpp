#ifndef CHARPOLY_QMAT_HPP
#define CHARPOLY_QMAT_HPP

/* Small dense exact matrices over Q and Z. Everything here is O(n^3)
 * Gaussian elimination on tiny matrices (n <= ~10); no pivot-growth tricks
 * are needed because the arithmetic is exact. */

#include "charpoly/prelude.hpp"

#include <optional>

namespace charpoly {

struct QMat {
    size_t nr = 0, nc = 0;
    std::vector<QQ> a; // row-major

    QMat() = default;
    QMat(size_t r, size_t c) : nr(r), nc(c), a(r * c) {}

    QQ &operator()(size_t i, size_t j) { return a[i * nc + j]; }
    const QQ &operator()(size_t i, size_t j) const { return a[i * nc + j]; }

    static QMat identity(size_t n) {
        QMat m(n, n);
        for (size_t i = 0; i < n; i++) m(i, i) = 1;
        return m;
    }

    bool operator==(const QMat &o) const { return nr == o.nr && nc == o.nc && a == o.a; }
};

inline QMat operator*(const QMat &x, const QMat &y) {
    if (x.nc != y.nr) throw error("QMat: shape mismatch");
    QMat r(x.nr, y.nc);
    for (size_t i = 0; i < x.nr; i++)
        for (size_t k = 0; k < x.nc; k++) {
            if (sgn(x(i, k)) == 0) continue;
            for (size_t j = 0; j < y.nc; j++) r(i, j) += x(i, k) * y(k, j);
        }
    return r;
}

inline std::vector<QQ> operator*(const QMat &m, const std::vector<QQ> &v) {
    if (m.nc != v.size()) throw error("QMat: shape mismatch");
    std::vector<QQ> r(m.nr);
    for (size_t i = 0; i < m.nr; i++)
        for (size_t j = 0; j < m.nc; j++) r[i] += m(i, j) * v[j];
    return r;
}

inline QQ det(QMat m) {
    if (m.nr != m.nc) throw error("det: not square");
    size_t n = m.nr;
    QQ d = 1;
    for (size_t c = 0; c < n; c++) {
        size_t p = c;
        while (p < n && sgn(m(p, c)) == 0) p++;
        if (p == n) return QQ(0);
        if (p != c) {
            for (size_t j = 0; j < n; j++) swap(m(p, j), m(c, j));
            d = -d;
        }
        d *= m(c, c);
        QQ inv = QQ(1) / m(c, c);
        for (size_t i = c + 1; i < n; i++) {
            if (sgn(m(i, c)) == 0) continue;
            QQ f = m(i, c) * inv;
            for (size_t j = c; j < n; j++) m(i, j) -= f * m(c, j);
        }
    }
    return d;
}

/* Gauss-Jordan inverse; throws on singular input. */
inline QMat inverse(QMat m) {
    if (m.nr != m.nc) throw error("inverse: not square");
    size_t n = m.nr;
    QMat r = QMat::identity(n);
    for (size_t c = 0; c < n; c++) {
        size_t p = c;
        while (p < n && sgn(m(p, c)) == 0) p++;
        if (p == n) throw error("inverse: singular");
        if (p != c)
            for (size_t j = 0; j < n; j++) {
                swap(m(p, j), m(c, j));
                swap(r(p, j), r(c, j));
            }
        QQ inv = QQ(1) / m(c, c);
        for (size_t j = 0; j < n; j++) {
            m(c, j) *= inv;
            r(c, j) *= inv;
        }
        for (size_t i = 0; i < n; i++) {
            if (i == c || sgn(m(i, c)) == 0) continue;
            QQ f = m(i, c);
            for (size_t j = 0; j < n; j++) {
                m(i, j) -= f * m(c, j);
                r(i, j) -= f * r(c, j);
            }
        }
    }
    return r;
}

/* Basis of the right kernel {x : Mx = 0}. */
inline std::vector<std::vector<QQ>> kernel(QMat m) {
    size_t nr = m.nr, nc = m.nc;
    std::vector<long> pivot_of_col(nc, -1);
    size_t row = 0;
    for (size_t c = 0; c < nc && row < nr; c++) {
        size_t p = row;
        while (p < nr && sgn(m(p, c)) == 0) p++;
        if (p == nr) continue;
        if (p != row)
            for (size_t j = 0; j < nc; j++) swap(m(p, j), m(row, j));
        QQ inv = QQ(1) / m(row, c);
        for (size_t j = 0; j < nc; j++) m(row, j) *= inv;
        for (size_t i = 0; i < nr; i++) {
            if (i == row || sgn(m(i, c)) == 0) continue;
            QQ f = m(i, c);
            for (size_t j = 0; j < nc; j++) m(i, j) -= f * m(row, j);
        }
        pivot_of_col[c] = static_cast<long>(row);
        row++;
    }
    std::vector<std::vector<QQ>> basis;
    for (size_t c = 0; c < nc; c++) {
        if (pivot_of_col[c] >= 0) continue;
        std::vector<QQ> v(nc);
        v[c] = 1;
        for (size_t j = 0; j < nc; j++)
            if (pivot_of_col[j] >= 0) v[j] = -m(static_cast<size_t>(pivot_of_col[j]), c);
        basis.push_back(std::move(v));
    }
    return basis;
}

/* Characteristic polynomial by the Faddeev-LeVerrier recurrence; returns
 * coefficients of det(lambda I - M), ascending, leading coefficient 1. */
inline std::vector<QQ> char_poly(const QMat &m) {
    if (m.nr != m.nc) throw error("char_poly: not square");
    size_t n = m.nr;
    std::vector<QQ> c(n + 1);
    c[n] = 1;
    QMat mk = QMat::identity(n);
    for (size_t k = 1; k <= n; k++) {
        mk = m * mk;
        QQ tr = 0;
        for (size_t i = 0; i < n; i++) tr += mk(i, i);
        QQ ck = -tr / QQ(static_cast<long>(k));
        c[n - k] = ck;
        for (size_t i = 0; i < n; i++) mk(i, i) += ck;
    }
    return c;
}

/* Integer matrices: thin wrapper reusing QMat for the exact linear algebra. */
struct ZMat {
    size_t nr = 0, nc = 0;
    std::vector<ZZ> a;

    ZMat() = default;
    ZMat(size_t r, size_t c) : nr(r), nc(c), a(r * c) {}
    ZMat(std::initializer_list<std::initializer_list<long>> rows) {
        nr = rows.size();
        nc = nr ? rows.begin()->size() : 0;
        for (auto &r : rows) {
            if (r.size() != nc) throw error("ZMat: ragged rows");
            for (long v : r) a.emplace_back(v);
        }
    }

    ZZ &operator()(size_t i, size_t j) { return a[i * nc + j]; }
    const ZZ &operator()(size_t i, size_t j) const { return a[i * nc + j]; }

    static ZMat identity(size_t n) {
        ZMat m(n, n);
        for (size_t i = 0; i < n; i++) m(i, i) = 1;
        return m;
    }

    bool operator==(const ZMat &o) const { return nr == o.nr && nc == o.nc && a == o.a; }

    QMat to_q() const {
        QMat q(nr, nc);
        for (size_t i = 0; i < a.size(); i++) q.a[i] = QQ(a[i]);
        return q;
    }
};

inline ZMat operator*(const ZMat &x, const ZMat &y) {
    if (x.nc != y.nr) throw error("ZMat: shape mismatch");
    ZMat r(x.nr, y.nc);
    for (size_t i = 0; i < x.nr; i++)
        for (size_t k = 0; k < x.nc; k++) {
            if (sgn(x(i, k)) == 0) continue;
            for (size_t j = 0; j < y.nc; j++) r(i, j) += x(i, k) * y(k, j);
        }
    return r;
}

inline ZZ det(const ZMat &m) {
    QQ d = det(m.to_q());
    if (!is_integer(d)) throw error("ZMat det: internal");
    return d.get_num();
}

inline ZMat transpose(const ZMat &m) {
    ZMat r(m.nc, m.nr);
    for (size_t i = 0; i < m.nr; i++)
        for (size_t j = 0; j < m.nc; j++) r(j, i) = m(i, j);
    return r;
}

/* Exact characteristic polynomial of an integer matrix (ascending, monic). */
inline std::vector<ZZ> char_poly(const ZMat &m) {
    std::vector<QQ> cq = char_poly(m.to_q());
    std::vector<ZZ> c(cq.size());
    for (size_t i = 0; i < cq.size(); i++) {
        if (!is_integer(cq[i])) throw error("char_poly: non-integer coefficient");
        c[i] = cq[i].get_num();
    }
    return c;
}

} // namespace charpoly

#endif
