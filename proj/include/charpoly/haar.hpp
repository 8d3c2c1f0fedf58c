#ifndef CHARPOLY_HAAR_HPP
#define CHARPOLY_HAAR_HPP

/* Numerical confirmation of the SL2(R) Haar-measure decompositions used by
 * the volume normalizations, plus the fundamental-domain quadrature for
 * determinant-one Minkowski-reduced quadratic forms.
 *
 * With k(theta) the rotation by angle 2*pi*theta (theta in [0,1)),
 * h(t) = [[1,t],[0,1]] and a(l) = diag(l, 1/l), the identities are
 *
 *   (KNA)  int f(k(t1) h(t) a(l)) dt1 dt dl/l
 *        = (pi/2) int f(k(t2) a(al) k(th)) |al^2 - al^-2| dt2 (dal/al) dth
 *   (KNK)  int f(k(p1) h(t) k(p)) dp1 d(t^2) dp
 *        =        int f(k(t2) a(al) k(th)) |al^2 - al^-2| dt2 (dal/al) dth
 *   hence  KNA = (pi/2) KNK.
 *
 * All integrals run over theta in [0,1), t in R (resp. t >= 0 for KNK) and
 * l, al in (0, infinity).  For radial integrands f = phi(||g||^2) each side
 * collapses to int_2^inf phi (times pi/2 on the KNA side), which pins the
 * absolute normalization independently.
 */

#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "charpoly/geometry.hpp"
#include "charpoly/qmc.hpp"

namespace charpoly {

namespace haar_detail {

struct M2 {
    double a, b, c, d; // [[a,b],[c,d]]
};

inline M2 mul(const M2 &x, const M2 &y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
}

inline M2 rot(double theta) {
    double ang = 2.0 * std::acos(-1.0) * theta;
    double co = std::cos(ang), si = std::sin(ang);
    return {co, -si, si, co};
}

inline M2 shear(double t) { return {1.0, t, 0.0, 1.0}; }

inline M2 diag(double l) { return {l, 0.0, 0.0, 1.0 / l}; }

inline double norm2(const M2 &g) { return g.a * g.a + g.b * g.b + g.c * g.c + g.d * g.d; }

/* Truncation windows; the Gaussian factor in every test function makes the
 * discarded tails smaller than exp(-55).
 */
constexpr double X_CUT = 4.0;  // l = exp(x), |x| <= 4
constexpr double T_CUT = 60.0; // |t| <= 60

} // namespace haar_detail

using HaarTestFn = std::function<double(const haar_detail::M2 &)>;

/* Three low-degree polynomial-times-Gaussian test functions. */
inline std::vector<std::pair<std::string, HaarTestFn>> haar_test_functions() {
    using haar_detail::M2;
    using haar_detail::norm2;
    std::vector<std::pair<std::string, HaarTestFn>> fs;
    fs.push_back({std::string("gauss"), [](const M2 &g) { return std::exp(-norm2(g)); }});
    fs.push_back({std::string("gauss_e11sq"),
                  [](const M2 &g) { return std::exp(-norm2(g)) * g.a * g.a; }});
    fs.push_back({std::string("gauss_mixed"), [](const M2 &g) {
                      return std::exp(-norm2(g)) * (g.a * g.d + 2.0 * g.b * g.c + g.c * g.c);
                  }});
    return fs;
}

/* int f(k h a) dtheta dt dl/l over the truncated window.  The t variable is
 * stretched through t = T_CUT w^3 to spend samples where the Gaussian mass
 * lives; this is an exact change of variables, not an approximation.
 */
inline QmcResult haar_int_kna(const HaarTestFn &f, long samples, std::uint64_t seed) {
    using namespace haar_detail;
    return qmc_integrate(3, samples, 16, seed, [&f](const double *u) {
        double theta = u[0];
        double w = 2.0 * u[1] - 1.0;
        double t = T_CUT * w * w * w;
        double jt = 2.0 * T_CUT * 3.0 * w * w;
        double x = X_CUT * (2.0 * u[2] - 1.0);
        double jx = 2.0 * X_CUT;
        M2 g = mul(mul(rot(theta), shear(t)), diag(std::exp(x)));
        return f(g) * jt * jx;
    });
}

/* int f(k h k) dphi1 d(t^2) dphi with v = t^2 = T_CUT^2 u^3. */
inline QmcResult haar_int_knk(const HaarTestFn &f, long samples, std::uint64_t seed) {
    using namespace haar_detail;
    return qmc_integrate(3, samples, 16, seed, [&f](const double *u) {
        double p1 = u[0], p = u[2];
        double v = T_CUT * T_CUT * u[1] * u[1] * u[1];
        double jv = T_CUT * T_CUT * 3.0 * u[1] * u[1];
        M2 g = mul(mul(rot(p1), shear(std::sqrt(v))), rot(p));
        return f(g) * jv;
    });
}

/* int f(k a k) |al^2 - al^-2| dtheta (dal/al) dphi; set with_weight = false
 * for the negative control that drops the Cartan density.
 */
inline QmcResult haar_int_kak(const HaarTestFn &f, long samples, std::uint64_t seed,
                              bool with_weight = true) {
    using namespace haar_detail;
    return qmc_integrate(3, samples, 16, seed, [&f, with_weight](const double *u) {
        double theta = u[0], phi = u[2];
        double x = X_CUT * (2.0 * u[1] - 1.0);
        double jx = 2.0 * X_CUT;
        double al2 = std::exp(2.0 * x);
        double weight = with_weight ? std::abs(al2 - 1.0 / al2) : 1.0;
        M2 g = mul(mul(rot(theta), diag(std::exp(x))), rot(phi));
        return f(g) * weight * jx;
    });
}

/* Full identity suite: nine pairwise comparisons, three radial closed
 * forms, one negative control.  rel_tol applies to the comparisons.
 *
 * The shear-times-Cartan parametrization converges noticeably slower than
 * the two rotation-framed ones, so its integrals get a fixed 16x sample
 * multiplier; this equalizes the accuracy of both sides of each comparison
 * at the stated budget.
 */
inline std::vector<CheckReport> haar_verify(long samples, std::uint64_t seed,
                                            double rel_tol = 1e-3) {
    const double pi = std::acos(-1.0);
    const long kna_samples = 16 * samples;
    std::vector<CheckReport> out;
    auto fns = haar_test_functions();
    int idx = 0;
    for (const auto &[name, f] : fns) {
        QmcResult kna = haar_int_kna(f, kna_samples, seed + static_cast<std::uint64_t>(100 + idx));
        QmcResult knk = haar_int_knk(f, samples, seed + static_cast<std::uint64_t>(200 + idx));
        QmcResult kak = haar_int_kak(f, samples, seed + static_cast<std::uint64_t>(300 + idx));
        out.push_back(make_check("kna_eq_kak_" + name, kna.mean, 0.5 * pi * kak.mean, rel_tol));
        out.push_back(make_check("knk_eq_kak_" + name, knk.mean, kak.mean, rel_tol));
        out.push_back(make_check("kna_eq_knk_" + name, kna.mean, 0.5 * pi * knk.mean, rel_tol));
        ++idx;
    }

    /* Radial pinning with phi(rho) = exp(-rho): each side must reproduce
     * exp(-2) = int_2^inf exp(-rho) drho up to the stated prefactor.
     */
    using haar_detail::M2;
    HaarTestFn radial = [](const M2 &g) { return std::exp(-haar_detail::norm2(g)); };
    double e2 = std::exp(-2.0);
    QmcResult rk = haar_int_kna(radial, kna_samples, seed + 400);
    QmcResult rn = haar_int_knk(radial, samples, seed + 401);
    QmcResult ra = haar_int_kak(radial, samples, seed + 402);
    out.push_back(make_check("radial_kna", rk.mean, 0.5 * pi * e2, rel_tol));
    out.push_back(make_check("radial_knk", rn.mean, e2, rel_tol));
    out.push_back(make_check("radial_kak", ra.mean, e2, rel_tol));

    /* Dropping the Cartan density must break the identity decisively. */
    QmcResult bad = haar_int_kak(radial, samples, seed + 500, /*with_weight=*/false);
    CheckReport neg = make_check("negative_control_density", rn.mean, bad.mean, 1.0);
    neg.pass = neg.rel_err > 0.05;
    neg.tol = 0.05;
    neg.note = "pass requires rel_err > tol";
    out.push_back(neg);
    return out;
}

/* Volume of the reduced domain of determinant-one positive binary forms.
 *
 * Writing W = [[w11, w12], [w12, (1+w12^2)/w11]], the invariant measure is
 * dw11 dw12 / w11 and the reduced region is 0 <= 2 w12 <= w11 with
 * w11^2 - w12^2 <= 1; midpoint quadrature over the bounding box must
 * reproduce pi/6.
 */
inline CheckReport minkowski2_quadrature(int grid = 2000) {
    const double pi = std::acos(-1.0);
    const double w11_max = 2.0 / std::sqrt(3.0);
    const double w12_max = 1.0 / std::sqrt(3.0);
    double h1 = w11_max / grid, h2 = w12_max / grid;
    double acc = 0.0;
    for (int i = 0; i < grid; ++i) {
        double w11 = (i + 0.5) * h1;
        /* For fixed w11 the region is the w12 interval [lo, hi]; cells that
         * straddle its ends contribute their exact overlap, so the grid
         * error comes only from the w11 midpoint rule.
         */
        double lo = w11 > 1.0 ? std::sqrt(w11 * w11 - 1.0) : 0.0;
        double hi = std::min(w12_max, 0.5 * w11);
        if (hi <= lo) continue;
        for (int j = 0; j < grid; ++j) {
            double c0 = j * h2, c1 = c0 + h2;
            double ov = std::min(hi, c1) - std::max(lo, c0);
            if (c0 > hi) break;
            if (ov > 0.0) acc += h1 * ov / w11;
        }
    }
    CheckReport rep = make_check("minkowski2_volume", acc, pi / 6.0, 1.0);
    rep.pass = rep.abs_err < 1e-3;
    rep.tol = 1e-3;
    rep.note = "absolute tolerance";
    return rep;
}

} // namespace charpoly

#endif
