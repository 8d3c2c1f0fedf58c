#ifndef CHARPOLY_CONSTANTS_HPP
#define CHARPOLY_CONSTANTS_HPP

/* Closed-form constants for the asymptotic census count:
 *
 *   count(T) / T^{n(n-1)/2}  -->  C_P = sum_O kappa(O) Vol(B^m)/Vol(SM_n),
 *
 * summed over the orders O of Q(alpha) containing Z[alpha], with
 *
 *   kappa(O) = 2^{r1} (2 pi)^{r2} h_O R_O / (w_O sqrt|D|),
 *   Vol(B^m) = pi^{m/2} / Gamma(1 + m/2),          m = n(n-1)/2,
 *   Vol(SM_n) = prod_{k=2}^n pi^{-k/2} Gamma(k/2) zeta(k).
 *
 * The discriminant D in the kappa denominators is ambiguous between the
 * polynomial discriminant disc(P) and the field discriminant; both totals
 * are computed and the caller picks one (`disc_choice`).  The same total
 * is assembled a second time through the independent route
 *
 *   C_P = sum_O c_eta nu_H(O) h_O / mu(G/Gamma),
 *   c_eta = (2 pi)^{r2} Vol(B^m) / (2^{n-1} sqrt|D|),
 *   nu_H(O) = 2^{r1} R_O / w_O,
 *   mu(G/Gamma) = 2^{-(n-1)} Vol(SM_n),
 *
 * and the two routes must agree to 1e-9 relative.
 */

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "charpoly/dd.hpp"
#include "charpoly/polynomial.hpp"
#include "charpoly/prelude.hpp"
#include "charpoly/quadorder.hpp"

namespace charpoly {

/* Volume of the unit ball in R^m. */
inline double vol_ball(int m) {
    if (m < 0) throw invalid_input("vol_ball: negative dimension");
    if (m == 0) return 1.0;
    dd num = dd_pow(dd_pi(), dd(0.5 * m));
    dd den = dd_gamma(dd(1.0 + 0.5 * m));
    return dd_div(num, den).to_double();
}

/* Volume of the determinant-one surface of the Minkowski domain,
 * prod_{k=2}^n pi^{-k/2} Gamma(k/2) zeta(k).
 */
inline double vol_minkowski(int n) {
    if (n < 2) throw invalid_input("vol_minkowski: need n >= 2");
    dd acc = dd(1.0);
    for (int k = 2; k <= n; ++k) {
        dd fac = dd_pow(dd_pi(), dd(-0.5 * k));
        fac = dd_mul(fac, dd_gamma(dd(0.5 * k)));
        fac = dd_mul(fac, dd_zeta(dd(static_cast<double>(k))));
        acc = dd_mul(acc, fac);
    }
    return acc.to_double();
}

/* mu(G/Gamma) for G = GL_n(R)^{det +-1}, Gamma = GL_n(Z). */
inline double vol_G_mod_Gamma(int n) {
    return std::ldexp(vol_minkowski(n), -(n - 1));
}

/* nu(H / H cap Gamma) = 2^{r1} R / w for one order. */
inline double nu_H(int r1, double regulator, long w) {
    if (w <= 0) throw invalid_input("nu_H: torsion order must be positive");
    return std::ldexp(regulator, r1) / static_cast<double>(w);
}

/* c_eta = (2 pi)^{r2} Vol(B^m) / (2^{n-1} sqrt|disc|). */
inline double c_eta(int n, int r2, const ZZ &disc) {
    if (disc == 0) throw invalid_input("c_eta: zero discriminant");
    int m = n * (n - 1) / 2;
    double numer = std::pow(2.0 * std::acos(-1.0), r2) * vol_ball(m);
    double denom = std::ldexp(std::sqrt(std::abs(disc.get_d())), n - 1);
    return numer / denom;
}

/* Per-order arithmetic data.  For degree 2 these are computed internally;
 * for higher degree the caller supplies them (CLI: --invariants file).
 */
struct OrderInvariants {
    ZZ disc;
    ZZ conductor;
    long h = 0;        // lattice classes with this multiplicator ring
    long h_narrow = 0; // proper (oriented) class count, 0 if not known
    long w = 0;        // roots of unity in O^x
    double regulator = 0.0;
};

struct OrderRow {
    OrderInvariants inv;
    double nu_H = 0.0;
    double kappa_disc_poly = 0.0;
    double kappa_disc_field = 0.0;
    double contrib_disc_poly = 0.0;
    double contrib_disc_field = 0.0;
};

struct PredictionReport {
    std::vector<ZZ> poly; // ascending coefficients, monic
    int n = 0, r1 = 0, r2 = 0, m = 0;
    ZZ disc_poly;
    ZZ disc_field;
    double vol_ball_m = 0.0;
    double vol_minkowski_n = 0.0;
    double vol_G_mod_Gamma_n = 0.0;
    double c_eta_disc_poly = 0.0;
    double c_eta_disc_field = 0.0;
    std::vector<OrderRow> orders;
    double C_P_disc_poly = 0.0;
    double C_P_disc_field = 0.0;
    std::string disc_choice; // "poly" or "field"
    double C_P = 0.0;        // total under disc_choice
    double dual_route_rel_err = 0.0;
};

namespace detail {

/* Degree-2 order tower: conductor divisors of Z[alpha]'s conductor. */
inline std::vector<OrderInvariants> quadratic_orders(const ZZ &disc) {
    auto [f, d0] = conductor_decompose(disc);
    std::vector<OrderInvariants> rows;
    for (const ZZ &g : divisors(f)) {
        QuadOrderData q = quad_order_data(g * g * d0);
        OrderInvariants inv;
        inv.disc = q.disc;
        inv.conductor = g;
        inv.h = q.h.get_si();
        inv.h_narrow = q.h_narrow.get_si();
        inv.w = q.torsion;
        inv.regulator = q.regulator;
        rows.push_back(inv);
    }
    return rows;
}

inline void validate_supplied_orders(const std::vector<OrderInvariants> &rows,
                                     const ZZ &disc_poly) {
    if (rows.empty()) throw invalid_input("order table is empty");
    int maximal = 0;
    for (const auto &r : rows) {
        if (r.h < 1 || r.w < 1 || !(r.regulator > 0.0))
            throw invalid_input("order table: h, w must be >= 1 and R > 0");
        if (r.disc == 0 || sgn(r.disc) != sgn(disc_poly))
            throw invalid_input("order table: discriminant sign mismatch");
        if (!mpz_divisible_p(disc_poly.get_mpz_t(), r.disc.get_mpz_t()) ||
            !is_square(divexact(disc_poly, r.disc)))
            throw invalid_input("order table: disc must divide disc(P) with square quotient");
        if (r.conductor == 1) ++maximal;
    }
    if (maximal != 1)
        throw invalid_input("order table: need exactly one conductor-1 row");
}

} // namespace detail

/* Full prediction for C_P.  Degree 2 computes the order data itself;
 * degree >= 3 requires a supplied table and throws missing_input without one.
 */
inline PredictionReport predict_CP(const IntPolynomial &P,
                                   const std::string &disc_choice = "poly",
                                   const std::vector<OrderInvariants> *supplied = nullptr) {
    if (disc_choice != "poly" && disc_choice != "field")
        throw invalid_input("disc_choice must be 'poly' or 'field'");
    PredictionReport rep;
    rep.poly = P.coeffs();
    rep.n = static_cast<int>(P.degree());
    auto sig = signature(P);
    rep.r1 = sig.first;
    rep.r2 = sig.second;
    rep.m = rep.n * (rep.n - 1) / 2;
    rep.disc_poly = discriminant(P);
    rep.disc_choice = disc_choice;

    std::vector<OrderInvariants> rows;
    if (rep.n == 2) {
        rows = detail::quadratic_orders(rep.disc_poly);
        rep.disc_field = rows.front().disc; // conductor 1 comes first
        for (const auto &r : rows)
            if (r.conductor == 1) rep.disc_field = r.disc;
    } else {
        if (supplied == nullptr)
            throw missing_input("degree >= 3 prediction needs an order invariants table");
        rows = *supplied;
        detail::validate_supplied_orders(rows, rep.disc_poly);
        for (const auto &r : rows)
            if (r.conductor == 1) rep.disc_field = r.disc;
    }

    rep.vol_ball_m = vol_ball(rep.m);
    rep.vol_minkowski_n = vol_minkowski(rep.n);
    rep.vol_G_mod_Gamma_n = vol_G_mod_Gamma(rep.n);
    rep.c_eta_disc_poly = c_eta(rep.n, rep.r2, rep.disc_poly);
    rep.c_eta_disc_field = c_eta(rep.n, rep.r2, rep.disc_field);

    const double two_pi = 2.0 * std::acos(-1.0);
    const double geom = rep.vol_ball_m / rep.vol_minkowski_n;
    double total_poly = 0.0, total_field = 0.0;
    double total2_poly = 0.0, total2_field = 0.0;
    double worst = 0.0;
    for (const auto &inv : rows) {
        OrderRow row;
        row.inv = inv;
        row.nu_H = nu_H(rep.r1, inv.regulator, inv.w);
        double hr_over_w = static_cast<double>(inv.h) * inv.regulator / static_cast<double>(inv.w);
        double numer = std::ldexp(std::pow(two_pi, rep.r2) * hr_over_w, rep.r1);
        row.kappa_disc_poly = numer / std::sqrt(std::abs(rep.disc_poly.get_d()));
        row.kappa_disc_field = numer / std::sqrt(std::abs(rep.disc_field.get_d()));
        row.contrib_disc_poly = row.kappa_disc_poly * geom;
        row.contrib_disc_field = row.kappa_disc_field * geom;
        /* Independent assembly of the same contribution. */
        double alt_poly = rep.c_eta_disc_poly * row.nu_H * static_cast<double>(inv.h) /
                          rep.vol_G_mod_Gamma_n;
        double alt_field = rep.c_eta_disc_field * row.nu_H * static_cast<double>(inv.h) /
                           rep.vol_G_mod_Gamma_n;
        worst = std::max(worst,
                         std::abs(alt_poly - row.contrib_disc_poly) / row.contrib_disc_poly);
        worst = std::max(worst,
                         std::abs(alt_field - row.contrib_disc_field) / row.contrib_disc_field);
        total_poly += row.contrib_disc_poly;
        total_field += row.contrib_disc_field;
        total2_poly += alt_poly;
        total2_field += alt_field;
        rep.orders.push_back(row);
    }
    worst = std::max(worst, std::abs(total2_poly - total_poly) / total_poly);
    worst = std::max(worst, std::abs(total2_field - total_field) / total_field);
    rep.dual_route_rel_err = worst;
    if (!(worst < 1e-9))
        throw precision_error("prediction routes disagree beyond 1e-9");
    rep.C_P_disc_poly = total_poly;
    rep.C_P_disc_field = total_field;
    rep.C_P = (disc_choice == "poly") ? total_poly : total_field;
    return rep;
}

} // namespace charpoly

#endif
