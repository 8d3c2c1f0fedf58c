#ifndef CHARPOLY_ROOTS_HPP
#define CHARPOLY_ROOTS_HPP

/* Certified complex roots of a squarefree monic integer polynomial.
 *
 * Double-precision Aberth iteration supplies starting points; each
 * representative root is then polished by Newton iteration in MPFR and
 * certified with the inclusion bound  min_i |z - rho_i| <= n |p(z)/p'(z)|,
 * with explicit rounding-error padding. Success requires all inclusion
 * disks (including mirrored conjugates) to be pairwise disjoint and every
 * non-real representative to satisfy Im > radius; the working precision is
 * doubled up to four times before giving up. */

#include "charpoly/mp_float.hpp"
#include "charpoly/polynomial.hpp"

#include <cmath>

namespace charpoly {

struct RootBox {
    bool is_real = false;
    double re = 0, im = 0;
    double radius = 0;

    std::complex<double> value() const { return {re, im}; }
};

/* Embedding order: real roots ascending, then one representative per
 * conjugate pair (Im > 0) ordered by (Re, Im), then the conjugates in the
 * same order. sigma[i] corresponds to the i-th embedding throughout. */
struct RootSet {
    int r1 = 0, r2 = 0;
    double eps = 0;
    std::vector<RootBox> sigma;

    long n() const { return static_cast<long>(sigma.size()); }
};

namespace detail {

inline std::vector<std::complex<double>> aberth(const zpoly &p) {
    long n = deg(p);
    zpoly dp = derivative(p);
    double cmax = 0;
    for (long i = 0; i < n; i++) cmax = std::max(cmax, std::abs(p[static_cast<size_t>(i)].get_d()));
    double r0 = 1.0 + cmax;
    std::vector<std::complex<double>> z(static_cast<size_t>(n));
    for (long k = 0; k < n; k++) {
        double th = 2 * M_PI * (static_cast<double>(k) + 0.353) / static_cast<double>(n) + 0.4;
        z[static_cast<size_t>(k)] = 0.7 * r0 * std::complex<double>(std::cos(th), std::sin(th));
    }
    for (int iter = 0; iter < 400; iter++) {
        double worst = 0;
        for (long i = 0; i < n; i++) {
            std::complex<double> zi = z[static_cast<size_t>(i)];
            std::complex<double> pv = eval_cd(p, zi);
            std::complex<double> dv = eval_cd(dp, zi);
            std::complex<double> w = (dv == 0.0 ? pv : pv / dv);
            std::complex<double> s = 0;
            for (long j = 0; j < n; j++)
                if (j != i) s += 1.0 / (zi - z[static_cast<size_t>(j)]);
            std::complex<double> corr = w / (1.0 - w * s);
            z[static_cast<size_t>(i)] = zi - corr;
            worst = std::max(worst, std::abs(corr));
        }
        if (worst < 1e-14) break;
    }
    return z;
}

/* Horner in MPFR with a crude but safe bound on the accumulated rounding
 * error: err <= 8 (n+2) 2^-w * sum |c_i| max(1,|z|)^i. */
inline MpReal horner_abs_err(const zpoly &p, double zabs, mpfr_prec_t w) {
    double m = std::max(1.0, zabs);
    double s = 0, pw = 1;
    for (size_t i = 0; i < p.size(); i++) {
        s += std::abs(p[i].get_d()) * pw;
        pw *= m;
    }
    double e = 8.0 * static_cast<double>(p.size() + 2) * std::ldexp(s, static_cast<int>(-w));
    return MpReal(e, 64);
}

inline MpComplex horner(const zpoly &p, const MpComplex &z) {
    MpComplex r(z.prec());
    for (size_t i = p.size(); i-- > 0;) {
        r = r * z;
        r.re = r.re + MpReal(p[i], z.prec());
    }
    return r;
}

inline MpReal horner(const zpoly &p, const MpReal &x) {
    MpReal r(x.prec());
    for (size_t i = p.size(); i-- > 0;) r = r * x + MpReal(p[i], x.prec());
    return r;
}

struct polished {
    double re, im, radius;
    bool ok;
};

/* Newton-polish a representative at precision w and certify its radius. */
inline polished polish(const zpoly &p, const zpoly &dp, std::complex<double> z0, bool real,
                       mpfr_prec_t w) {
    long n = deg(p);
    MpComplex z(real ? z0.real() : z0.real(), real ? 0.0 : z0.imag(), w);
    for (int it = 0; it < 200; it++) {
        MpComplex pv = horner(p, z);
        MpComplex dv = horner(dp, z);
        MpReal da = abs(dv);
        if (!(da > MpReal(0.0, 64))) return {0, 0, 0, false};
        MpComplex step = pv / dv;
        if (real) step.im = MpReal(0.0, w);
        z = z - step;
        MpReal small = abs(z) + MpReal(1.0, 64);
        if (!(abs(step) > small * MpReal(std::ldexp(1.0, static_cast<int>(-w) + 6), 64))) break;
    }
    MpComplex pv = horner(p, z);
    MpComplex dv = horner(dp, z);
    double zabs = abs(z).to_double();
    MpReal ep = horner_abs_err(p, zabs, w), edp = horner_abs_err(dp, zabs, w);
    MpReal num = abs(pv) + ep;
    MpReal den = abs(dv) - edp;
    if (!(den > MpReal(0.0, 64))) return {0, 0, 0, false};
    double radius = (MpReal(static_cast<double>(n), 64) * num / den).to_double();
    radius = std::max(radius, std::ldexp(std::max(1.0, zabs), static_cast<int>(-w) + 8));
    return {z.re.to_double(), z.im.to_double(), radius, true};
}

} // namespace detail

inline RootSet roots(const IntPolynomial &P, double eps = 1e-12) {
    const zpoly &p = P.coeffs();
    if (discriminant(p) == 0) throw invalid_input("roots: polynomial not squarefree");
    zpoly dp = derivative(p);
    auto [r1i, r2i] = signature(P);
    int r1 = r1i, r2 = r2i;

    std::vector<std::complex<double>> z0 = detail::aberth(p);
    // classification: the r1 approximations of smallest |Im| are the real
    // candidates (validated afterwards by the certification step)
    std::vector<size_t> order(z0.size());
    for (size_t i = 0; i < order.size(); i++) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return std::abs(z0[a].imag()) < std::abs(z0[b].imag()); });
    std::vector<std::complex<double>> reals, reps;
    for (int i = 0; i < r1; i++) reals.push_back(z0[order[static_cast<size_t>(i)]]);
    for (size_t i = static_cast<size_t>(r1); i < order.size(); i++) {
        std::complex<double> c = z0[order[i]];
        if (c.imag() > 0) reps.push_back(c);
    }
    if (static_cast<int>(reps.size()) != r2)
        throw precision_error("roots: conjugate pairing failed at double precision");

    for (mpfr_prec_t w = 128; w <= 1024; w *= 2) {
        std::vector<RootBox> boxes;
        bool ok = true;
        for (auto &c : reals) {
            auto pr = detail::polish(p, dp, c, true, w);
            if (!pr.ok || pr.radius > eps) {
                ok = false;
                break;
            }
            boxes.push_back({true, pr.re, 0.0, pr.radius});
        }
        if (ok)
            for (auto &c : reps) {
                auto pr = detail::polish(p, dp, c, false, w);
                if (!pr.ok || pr.radius > eps || !(pr.im > pr.radius)) {
                    ok = false;
                    break;
                }
                boxes.push_back({false, pr.re, pr.im, pr.radius});
            }
        if (ok) {
            std::sort(boxes.begin(), boxes.end(), [](const RootBox &a, const RootBox &b) {
                if (a.is_real != b.is_real) return a.is_real;
                if (a.re != b.re) return a.re < b.re;
                return a.im < b.im;
            });
            std::vector<RootBox> all = boxes;
            for (int i = 0; i < r2; i++) {
                RootBox cj = boxes[static_cast<size_t>(r1 + i)];
                cj.im = -cj.im;
                all.push_back(cj);
            }
            for (size_t i = 0; i < all.size() && ok; i++)
                for (size_t j = i + 1; j < all.size(); j++) {
                    double dist = std::hypot(all[i].re - all[j].re, all[i].im - all[j].im);
                    if (!(dist > all[i].radius + all[j].radius)) {
                        ok = false;
                        break;
                    }
                }
        }
        if (ok) {
            RootSet rs;
            rs.r1 = r1;
            rs.r2 = r2;
            rs.eps = eps;
            rs.sigma = std::move(boxes);
            for (int i = 0; i < r2; i++) {
                RootBox cj = rs.sigma[static_cast<size_t>(r1 + i)];
                cj.im = -cj.im;
                rs.sigma.push_back(cj);
            }
            return rs;
        }
    }
    throw precision_error("roots: certification failed after precision escalation");
}

} // namespace charpoly

#endif
