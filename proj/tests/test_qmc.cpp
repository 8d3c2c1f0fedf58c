// Randomized quasi-Monte Carlo integrator and the ball sampler it feeds.
#include "support.hpp"

#include <charpoly/constants.hpp>
#include <charpoly/qmc.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace charpoly;

TEST_CASE("known integrals over the unit cube") {
    auto prod = [](const double *u) { return u[0] * u[1]; };
    QmcResult r = qmc_integrate(2, 200000, 16, 11, prod);
    REQUIRE(std::abs(r.mean - 0.25) < std::max(4.0 * r.std_error, 1e-5));

    auto expf = [](const double *u) { return std::exp(u[0]); };
    QmcResult e = qmc_integrate(1, 100000, 16, 12, expf);
    REQUIRE(std::abs(e.mean - (std::exp(1.0) - 1.0)) < std::max(4.0 * e.std_error, 1e-6));

    REQUIRE(r.shifts == 16);
    REQUIRE(r.samples_per_shift == 200000 / 16);
    REQUIRE((int)r.shift_means.size() == 16);
    REQUIRE(r.std_error >= 0.0);
}

TEST_CASE("determinism under a fixed seed") {
    auto f = [](const double *u) { return std::sin(u[0]) * u[1] + u[2]; };
    QmcResult a = qmc_integrate(3, 50000, 8, 99, f);
    QmcResult b = qmc_integrate(3, 50000, 8, 99, f);
    REQUIRE(a.mean == b.mean);
    REQUIRE(a.std_error == b.std_error);
    QmcResult c = qmc_integrate(3, 50000, 8, 100, f);
    REQUIRE(a.mean != c.mean); // different shift draws
}

TEST_CASE("argument validation") {
    auto f = [](const double *) { return 1.0; };
    REQUIRE_THROWS_AS(qmc_integrate(0, 100, 8, 1, f), invalid_input);
    REQUIRE_THROWS_AS(qmc_integrate(65, 100, 8, 1, f), invalid_input);
    REQUIRE_THROWS_AS(qmc_integrate(2, 100, 1, 1, f), invalid_input);
    REQUIRE_THROWS_AS(qmc_integrate(2, 4, 8, 1, f), invalid_input);
}

TEST_CASE("ball_point lands in the closed unit ball and fills it") {
    for (int dim : {1, 2, 3, 5}) {
        std::mt19937_64 rng(314 + (unsigned)dim);
        auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
        double max_norm = 0.0, min_norm = 2.0;
        double lo = 1.0, hi = -1.0;
        std::vector<double> u(size_t(dim) + 1);
        std::vector<double> out(size_t(dim), 0.0);
        for (int k = 0; k < 20000; k++) {
            for (auto &v : u) v = unit();
            ball_point(u.data(), dim, out.data());
            double n2 = 0.0;
            for (double v : out) n2 += v * v;
            double n = std::sqrt(n2);
            REQUIRE(n <= 1.0 + 1e-12);
            max_norm = std::max(max_norm, n);
            min_norm = std::min(min_norm, n);
            lo = std::min(lo, out[0]);
            hi = std::max(hi, out[0]);
        }
        // the radial law reaches both the center and the boundary
        REQUIRE(max_norm > 0.99);
        REQUIRE(min_norm < 0.3);
        REQUIRE(lo < -0.8);
        REQUIRE(hi > 0.8);
    }
}

TEST_CASE("ball sampler integrates to the ball volume") {
    for (int dim : {2, 3}) {
        // E[2^dim * indicator(|2u-1| in ball)] over the cube = vol(ball)/2^dim
        auto indicator = [dim](const double *u) {
            double n2 = 0.0;
            for (int i = 0; i < dim; i++) {
                double v = 2.0 * u[i] - 1.0;
                n2 += v * v;
            }
            return n2 <= 1.0 ? 1.0 : 0.0;
        };
        QmcResult r = qmc_integrate(dim, 400000, 16, 21, indicator);
        double est = std::ldexp(r.mean, dim);
        double sigma = std::ldexp(r.std_error, dim);
        REQUIRE(std::abs(est - vol_ball(dim)) < std::max(4.0 * sigma, 1e-4));
    }
}

TEST_CASE("inverse normal CDF round-trips the error function") {
    for (double p : {0.025, 0.16, 0.5, 0.84, 0.975}) {
        double x = inv_normal_cdf(p);
        double back = 0.5 * std::erfc(-x / std::sqrt(2.0));
        REQUIRE(std::abs(back - p) < 1e-8);
    }
    REQUIRE(inv_normal_cdf(0.5) == 0.0);
}
