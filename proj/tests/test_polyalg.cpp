#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <random>

#include "charpoly/polynomial.hpp"
#include "charpoly/roots.hpp"
#include "support.hpp"

using namespace charpoly;
using testsupport::shifted;

namespace {

IntPolynomial leading(std::initializer_list<long> c) {
    return IntPolynomial::from_leading(std::vector<long>(c));
}

/* Independent reducibility oracle for monic polynomials of degree <= 4:
 * exhaustive search for a degree-1 factor (integer root dividing the
 * constant term) or, for degree 4, a monic quadratic factor via long
 * synthetic division over a coefficient box that provably contains any
 * factor of a polynomial with |coeffs| <= 6.
 */
bool reducible_oracle(const std::vector<long> &asc) {
    long n = static_cast<long>(asc.size()) - 1;
    auto eval_at = [&](long x) {
        long r = 0;
        for (long i = n; i >= 0; i--) r = r * x + asc[static_cast<size_t>(i)];
        return r;
    };
    if (asc[0] == 0) return true; // root at 0
    for (long r = 1; r <= std::abs(asc[0]); r++) {
        if (std::abs(asc[0]) % r != 0) continue;
        if (eval_at(r) == 0 || eval_at(-r) == 0) return true;
    }
    if (n < 4) return false;
    // monic quadratic factor x^2 + u x + v: v divides asc[0], |u| <= 9
    for (long u = -9; u <= 9; u++) {
        for (long v = -6; v <= 6; v++) {
            if (v == 0 || std::abs(asc[0]) % std::abs(v) != 0) continue;
            // synthetic division of asc by x^2 + u x + v
            long b3 = asc[4];
            long b2 = asc[3] - u * b3;
            long b1 = asc[2] - u * b2 - v * b3;
            long r1 = asc[1] - u * b1 - v * b2;
            long r0 = asc[0] - v * b1;
            if (r1 == 0 && r0 == 0) return true;
        }
    }
    return false;
}

} // namespace

TEST_CASE("IntPolynomial construction enforces the contract", "[polyalg]") {
    REQUIRE_THROWS_AS((IntPolynomial{zpoly{ZZ(1), ZZ(1)}}), invalid_input);      // degree 1
    REQUIRE_THROWS_AS((IntPolynomial{zpoly{ZZ(1), ZZ(0), ZZ(2)}}), invalid_input); // not monic
    IntPolynomial P = leading({1, 0, 1});
    REQUIRE(P.degree() == 2);
    REQUIRE(P.coeff(0) == 1);
    REQUIRE(P.coeff(2) == 1);
    REQUIRE(P.str() == "1,0,1");
}

TEST_CASE("irreducibility on the worked examples", "[polyalg]") {
    REQUIRE(is_irreducible(leading({1, 0, 1})));       // x^2 + 1
    REQUIRE_FALSE(is_irreducible(leading({1, 0, -1}))); // (x-1)(x+1)
    REQUIRE(is_irreducible(leading({1, 0, -1, -1})));  // x^3 - x - 1
    REQUIRE(is_irreducible(leading({1, -1, -1})));
    REQUIRE_FALSE(is_irreducible(leading({1, 0, 0, 0, 1, 0}))); // x divides
    REQUIRE_THROWS_AS((checked_irreducible(zpoly{ZZ(-1), ZZ(0), ZZ(1)})), invalid_input);
    REQUIRE(checked_irreducible(zpoly{ZZ(1), ZZ(0), ZZ(1)}).irreducibility_checked());
}

TEST_CASE("irreducibility agrees with the factor-search oracle", "[polyalg]") {
    long mismatches = 0;
    for (long deg = 2; deg <= 4; deg++) {
        std::vector<long> asc(static_cast<size_t>(deg) + 1, -6);
        asc[static_cast<size_t>(deg)] = 1;
        while (true) {
            zpoly z;
            for (long v : asc) z.push_back(ZZ(v));
            bool lib = is_irreducible(IntPolynomial{z});
            bool oracle = !reducible_oracle(asc);
            if (lib != oracle) mismatches++;
            // odometer over the non-leading coefficients
            size_t k = 0;
            while (k < static_cast<size_t>(deg) && asc[k] == 6) asc[k++] = -6;
            if (k == static_cast<size_t>(deg)) break;
            asc[k]++;
        }
    }
    REQUIRE(mismatches == 0);
}

TEST_CASE("discriminant on the worked examples", "[polyalg]") {
    REQUIRE(discriminant(leading({1, 0, 1})) == -4);
    REQUIRE(discriminant(leading({1, -1, -1})) == 5);
    REQUIRE(discriminant(leading({1, 0, -1, -1})) == -23);
    REQUIRE(discriminant(leading({1, 0, -2})) == 8);
    REQUIRE(discriminant(leading({1, 0, 3})) == -12);
    // (x-1)^2 (x+2) = x^3 - 3x + 2 has a repeated root
    REQUIRE(discriminant(leading({1, 0, -3, 2})) == 0);
}

TEST_CASE("signature on the worked examples", "[polyalg]") {
    REQUIRE(signature(leading({1, 0, 1})) == std::pair<int, int>(0, 1));
    REQUIRE(signature(leading({1, 0, -2})) == std::pair<int, int>(2, 0));
    REQUIRE(signature(leading({1, 0, -1, -1})) == std::pair<int, int>(1, 1));
    REQUIRE(signature(leading({1, 0, 0, 0, -1, -1})) == std::pair<int, int>(1, 2));
}

TEST_CASE("Sturm real-root count is shift invariant", "[polyalg]") {
    std::vector<IntPolynomial> corpus = {
        leading({1, 0, 1}),      leading({1, -1, -1}),    leading({1, 0, -2}),
        leading({1, 0, -1, -1}), leading({1, 2, -3, 5}),  leading({1, 0, 0, -2, 1}),
    };
    for (const auto &P : corpus)
        for (long c : {-5L, -2L, -1L, 1L, 3L, 7L})
            REQUIRE(signature(shifted(P, c)) == signature(P));
}

TEST_CASE("roots: certification, ordering, and conjugate symmetry", "[polyalg][roots]") {
    SECTION("Gaussian quadratic") {
        RootSet rs = roots(leading({1, 0, 1}));
        REQUIRE(rs.r1 == 0);
        REQUIRE(rs.r2 == 1);
        REQUIRE(rs.sigma.size() == 2);
        REQUIRE(rs.sigma[0].im > 0); // representative first
        REQUIRE(std::abs(rs.sigma[0].re) < 1e-12);
        REQUIRE(std::abs(rs.sigma[0].im - 1.0) < 1e-12);
        REQUIRE(std::abs(rs.sigma[1].im + 1.0) < 1e-12);
    }
    SECTION("real quadratic") {
        RootSet rs = roots(leading({1, 0, -2}));
        REQUIRE(rs.r1 == 2);
        REQUIRE(rs.r2 == 0);
        REQUIRE(std::abs(rs.sigma[0].re + 1.4142135623730951) < 1e-12);
        REQUIRE(std::abs(rs.sigma[1].re - 1.4142135623730951) < 1e-12);
        REQUIRE(rs.sigma[0].re < rs.sigma[1].re); // ascending reals
    }
    SECTION("general corpus properties") {
        std::vector<IntPolynomial> corpus = {
            leading({1, 0, 1}),          leading({1, -1, -1}),
            leading({1, 0, -1, -1}),     leading({1, 1, 1, 1, 1}),
            leading({1, 0, 0, -2, 1}),   leading({1, -3, 1, 2}),
        };
        for (const auto &P : corpus) {
            RootSet rs = roots(P, 1e-12);
            long n = P.degree();
            REQUIRE(rs.n() == n);
            REQUIRE(rs.r1 + 2 * rs.r2 == n);
            // radii certified to the requested epsilon
            for (const auto &b : rs.sigma) REQUIRE(b.radius <= 1e-12);
            // reals ascending, then conjugate-pair symmetry sigma_{j+r2} = conj(sigma_j)
            for (int i = 0; i + 1 < rs.r1; i++) REQUIRE(rs.sigma[i].re < rs.sigma[i + 1].re);
            for (int j = 0; j < rs.r2; j++) {
                const auto &rep = rs.sigma[static_cast<size_t>(rs.r1 + j)];
                const auto &bar = rs.sigma[static_cast<size_t>(rs.r1 + rs.r2 + j)];
                REQUIRE(rep.im > 0);
                REQUIRE(std::abs(rep.re - bar.re) < 1e-11);
                REQUIRE(std::abs(rep.im + bar.im) < 1e-11);
            }
            // signature computed from the boxes agrees with the Sturm count
            auto sig = signature(P);
            REQUIRE(rs.r1 == sig.first);
            REQUIRE(rs.r2 == sig.second);
            // product of roots = (-1)^n c0, sum = -c_{n-1}
            std::complex<double> prod(1.0, 0.0), sum(0.0, 0.0);
            for (const auto &b : rs.sigma) {
                prod *= b.value();
                sum += b.value();
            }
            double c0 = P.coeff(0).get_d();
            double cn1 = P.coeff(static_cast<size_t>(n - 1)).get_d();
            REQUIRE(std::abs(prod - std::complex<double>((n % 2 == 0 ? 1.0 : -1.0) * c0, 0.0)) < 1e-9);
            REQUIRE(std::abs(sum - std::complex<double>(-cn1, 0.0)) < 1e-9);
            // discriminant matches the squared product of root differences
            std::complex<double> dprod(1.0, 0.0);
            for (size_t i = 0; i < rs.sigma.size(); i++)
                for (size_t j = i + 1; j < rs.sigma.size(); j++) {
                    auto d = rs.sigma[i].value() - rs.sigma[j].value();
                    dprod *= d * d;
                }
            double want = discriminant(P).get_d();
            REQUIRE(std::abs(dprod.real() - want) < 1e-6 * std::max(1.0, std::abs(want)));
            REQUIRE(std::abs(dprod.imag()) < 1e-6 * std::max(1.0, std::abs(want)));
        }
    }
    SECTION("not squarefree is rejected") {
        REQUIRE_THROWS_AS(roots(leading({1, 0, -3, 2})), invalid_input);
    }
}
