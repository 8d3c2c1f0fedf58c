// Closed-form constants, the leading-coefficient prediction, and the
// dual-route consistency of its assembly.
#include "support.hpp"

#include <charpoly/constants.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace charpoly;

namespace {
const double PI = std::acos(-1.0);
double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
} // namespace

TEST_CASE("gamma and zeta reference values") {
    REQUIRE(rel(zeta_fn(2.0), PI * PI / 6.0) < 1e-12);
    REQUIRE(rel(zeta_fn(3.0), 1.2020569031595943) < 1e-13);
    REQUIRE(rel(zeta_fn(4.0), PI * PI * PI * PI / 90.0) < 1e-12);

    REQUIRE(rel(gamma_fn(1.0), 1.0) < 1e-14);
    REQUIRE(rel(gamma_fn(2.0), 1.0) < 1e-14);
    REQUIRE(rel(gamma_fn(3.0), 2.0) < 1e-14);
    REQUIRE(rel(gamma_fn(4.0), 6.0) < 1e-14);
    REQUIRE(rel(gamma_fn(5.0), 24.0) < 1e-14);
    REQUIRE(rel(gamma_fn(0.5), std::sqrt(PI)) < 1e-13);
    REQUIRE(rel(gamma_fn(1.5), 0.5 * std::sqrt(PI)) < 1e-13);
    REQUIRE(rel(gamma_fn(2.5), 0.75 * std::sqrt(PI)) < 1e-13);
}

TEST_CASE("ball volumes in closed form") {
    const double want[] = {1.0,          2.0,           PI,          4.0 * PI / 3.0,
                           PI * PI / 2.0, 8 * PI * PI / 15.0, PI * PI * PI / 6.0};
    for (int m = 0; m <= 6; m++) REQUIRE(rel(vol_ball(m), want[m]) < 1e-12);
    REQUIRE_THROWS_AS(vol_ball(-1), invalid_input);
}

TEST_CASE("Minkowski domain volumes") {
    REQUIRE(rel(vol_minkowski(2), PI / 6.0) < 1e-12);
    REQUIRE(rel(vol_minkowski(3), zeta_fn(3.0) / 12.0) < 1e-12);
    // the n = 2 geometric ratio used throughout the degree-2 predictions
    REQUIRE(rel(vol_ball(1) / vol_minkowski(2), 12.0 / PI) < 1e-12);

    REQUIRE(rel(vol_G_mod_Gamma(2), PI / 12.0) < 1e-12);
    REQUIRE(rel(vol_G_mod_Gamma(3), zeta_fn(3.0) / 48.0) < 1e-12);
    REQUIRE_THROWS_AS(vol_minkowski(1), invalid_input);
}

TEST_CASE("c_eta closed forms on the corpus") {
    REQUIRE(rel(c_eta(2, 1, ZZ(-4)), PI) < 1e-12);
    REQUIRE(rel(c_eta(2, 0, ZZ(5)), 1.0 / std::sqrt(5.0)) < 1e-12);
    REQUIRE(rel(c_eta(2, 0, ZZ(8)), 1.0 / (2.0 * std::sqrt(2.0))) < 1e-12);
    // 2 pi^2 / (3 sqrt(23))
    REQUIRE(rel(c_eta(3, 1, ZZ(-23)), 1.371969852) < 1e-9);
    REQUIRE(rel(c_eta(3, 1, ZZ(-23)), 2.0 * PI * PI / (3.0 * std::sqrt(23.0))) < 1e-12);
    REQUIRE_THROWS_AS(c_eta(2, 0, ZZ(0)), invalid_input);
}

TEST_CASE("nu_H per-order factor") {
    REQUIRE(rel(nu_H(0, 1.0, 4), 0.25) < 1e-15);
    REQUIRE(rel(nu_H(2, 0.5, 2), 1.0) < 1e-15);
    REQUIRE_THROWS_AS(nu_H(1, 1.0, 0), invalid_input);
}

TEST_CASE("degree-2 predictions hit the pinned constants") {
    PredictionReport g = predict_CP(IntPolynomial(zpoly{1, 0, 1}));
    REQUIRE(g.n == 2);
    REQUIRE(g.r1 == 0);
    REQUIRE(g.r2 == 1);
    REQUIRE(g.m == 1);
    REQUIRE(g.disc_poly == -4);
    REQUIRE(g.disc_field == -4);
    REQUIRE(g.orders.size() == 1);
    REQUIRE(rel(g.C_P, 3.0) < 1e-12);
    REQUIRE(g.dual_route_rel_err < 1e-9);

    PredictionReport f = predict_CP(IntPolynomial(zpoly{-1, -1, 1}));
    REQUIRE(f.r1 == 2);
    REQUIRE(f.disc_poly == 5);
    REQUIRE(rel(f.C_P, 1.6440411) < 1e-7);
    REQUIRE(f.dual_route_rel_err < 1e-9);

    PredictionReport s = predict_CP(IntPolynomial(zpoly{-2, 0, 1}));
    REQUIRE(s.disc_poly == 8);
    REQUIRE(rel(s.C_P, 2.3805451) < 1e-7);
    REQUIRE(s.dual_route_rel_err < 1e-9);
}

TEST_CASE("non-maximal order towers and the disc-choice split") {
    PredictionReport p = predict_CP(IntPolynomial(zpoly{3, 0, 1}), "poly");
    REQUIRE(p.disc_poly == -12);
    REQUIRE(p.disc_field == -3);
    REQUIRE(p.orders.size() == 2); // conductors 1 and 2
    bool saw1 = false, saw2 = false;
    for (const auto &row : p.orders) {
        if (row.inv.conductor == 1) {
            saw1 = true;
            REQUIRE(row.inv.disc == -3);
            REQUIRE(row.inv.w == 6);
        }
        if (row.inv.conductor == 2) {
            saw2 = true;
            REQUIRE(row.inv.disc == -12);
            REQUIRE(row.inv.w == 2);
        }
    }
    REQUIRE(saw1);
    REQUIRE(saw2);
    REQUIRE(rel(p.C_P, 4.618802153517) < 1e-9);
    REQUIRE(p.C_P == p.C_P_disc_poly);

    PredictionReport q = predict_CP(IntPolynomial(zpoly{3, 0, 1}), "field");
    REQUIRE(rel(q.C_P, 9.23760430703401) < 1e-9);
    REQUIRE(q.C_P == q.C_P_disc_field);
    // the two routes differ exactly by sqrt(disc_poly/disc_field) = 2
    REQUIRE(rel(q.C_P, 2.0 * p.C_P) < 1e-12);

    REQUIRE_THROWS_AS(predict_CP(IntPolynomial(zpoly{1, 0, 1}), "maximal"), invalid_input);
}

TEST_CASE("degree-3 prediction with a supplied order table") {
    IntPolynomial P(zpoly{-1, -1, 0, 1});
    REQUIRE_THROWS_AS(predict_CP(P), missing_input);

    OrderInvariants inv;
    inv.disc = -23;
    inv.conductor = 1;
    inv.h = 1;
    inv.h_narrow = 1;
    inv.w = 2;
    inv.regulator = 0.2811995743514594;
    std::vector<OrderInvariants> table = {inv};
    PredictionReport r = predict_CP(P, "poly", &table);
    REQUIRE(r.n == 3);
    REQUIRE(r.r1 == 1);
    REQUIRE(r.r2 == 1);
    REQUIRE(r.m == 3);
    REQUIRE(r.disc_poly == -23);
    REQUIRE(r.disc_field == -23);
    REQUIRE(rel(r.C_P, 15.4054872) < 1e-7);
    REQUIRE(r.dual_route_rel_err < 1e-9);

    // malformed tables are rejected
    std::vector<OrderInvariants> bad = table;
    bad[0].h = 0;
    REQUIRE_THROWS_AS(predict_CP(P, "poly", &bad), invalid_input);
    bad = table;
    bad[0].disc = 23;
    REQUIRE_THROWS_AS(predict_CP(P, "poly", &bad), invalid_input);
    bad = table;
    bad[0].disc = -5; // does not divide -23 with square quotient
    REQUIRE_THROWS_AS(predict_CP(P, "poly", &bad), invalid_input);
    bad = table;
    bad[0].conductor = 2; // no maximal row left
    REQUIRE_THROWS_AS(predict_CP(P, "poly", &bad), invalid_input);
    std::vector<OrderInvariants> empty;
    REQUIRE_THROWS_AS(predict_CP(P, "poly", &empty), invalid_input);
}

TEST_CASE("contribution sums are reproducible in the published order") {
    for (const zpoly &c :
         {zpoly{1, 0, 1}, zpoly{-1, -1, 1}, zpoly{-2, 0, 1}, zpoly{3, 0, 1}, zpoly{5, 0, 1}}) {
        PredictionReport r = predict_CP(IntPolynomial(c));
        double sum_poly = 0.0, sum_field = 0.0;
        for (const auto &row : r.orders) {
            sum_poly += row.contrib_disc_poly;
            sum_field += row.contrib_disc_field;
        }
        // bitwise equality: the report's totals are these sums in this order
        REQUIRE(sum_poly == r.C_P_disc_poly);
        REQUIRE(sum_field == r.C_P_disc_field);
        REQUIRE(r.dual_route_rel_err < 1e-9);
    }
}
