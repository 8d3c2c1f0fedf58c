// Ball census: fast paths vs naive exhaustive oracles, symmetry and
// monotonicity properties, streaming, budgets, and orbit-restricted counts.
#include "support.hpp"

#include <charpoly/counter.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

using namespace charpoly;
using testsupport::census_set;
using testsupport::mat2;
using testsupport::mat3;
using testsupport::naive_count_n2;
using testsupport::naive_count_n3;

namespace {

std::vector<long> key(const ZMat &X) {
    std::vector<long> k;
    for (const auto &e : X.a) k.push_back(e.get_si());
    return k;
}

// all signed permutation matrices of size n (det +-1)
std::vector<ZMat> signed_perms(size_t n) {
    std::vector<std::vector<size_t>> perms;
    std::vector<size_t> p(n);
    for (size_t i = 0; i < n; i++) p[i] = i;
    do perms.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    std::vector<ZMat> out;
    for (const auto &pp : perms)
        for (size_t mask = 0; mask < (size_t(1) << n); mask++) {
            ZMat G(n, n);
            for (size_t i = 0; i < n; i++) G(i, pp[i]) = (mask >> i & 1) ? -1 : 1;
            out.push_back(G);
        }
    return out;
}

ZZ count_at(const IntPolynomial &P, long T, bool strict = false, int threads = 1,
            bool force_generic = false) {
    CountOptions o;
    o.T = QQ(T);
    o.strict = strict;
    o.threads = threads;
    o.force_generic = force_generic;
    return count_matrices(P, o).count;
}

} // namespace

TEST_CASE("degree-2 fast path equals the naive box scan on a polynomial sweep") {
    long mismatches = 0, polys = 0;
    for (long c1 = -5; c1 <= 5; c1++)
        for (long c0 = -5; c0 <= 5; c0++) {
            IntPolynomial P(zpoly{c0, c1, 1});
            if (!is_irreducible(P)) continue;
            polys++;
            for (long T = 1; T <= 12; T++)
                for (bool strict : {false, true}) {
                    long naive = naive_count_n2(P, T * T, strict);
                    CountOptions o;
                    o.T = QQ(T);
                    o.strict = strict;
                    CountResult fast = count_matrices(P, o);
                    REQUIRE(fast.fast_path);
                    o.force_generic = true;
                    CountResult gen = count_matrices(P, o);
                    REQUIRE(!gen.fast_path);
                    if (fast.count != naive || gen.count != naive) mismatches++;
                }
        }
    REQUIRE(polys > 50); // the sweep actually covered a large family
    REQUIRE(mismatches == 0);
}

TEST_CASE("degree-3 pruned census equals the naive exhaustive scan at T = 4") {
    IntPolynomial P(zpoly{-1, -1, 0, 1});
    REQUIRE(naive_count_n3(P, 16) == 840);

    CountOptions o;
    o.T = QQ(4);
    CountResult r = count_matrices(P, o);
    REQUIRE(r.count == 840);
    REQUIRE(r.boundary == 144);
    REQUIRE(!r.fast_path);

    o.strict = true;
    REQUIRE(count_matrices(P, o).count == 840 - 144);

    // the big-integer route of the same pruned walk agrees
    detail::NodeBudget budget(5'000'000'000ULL);
    detail::GenericCounter g(P, ZZ(16), budget, nullptr);
    g.run();
    REQUIRE(g.count == ZZ(840));
}

TEST_CASE("census is closed under transpose and signed permutation conjugation") {
    struct Case {
        IntPolynomial P;
        long S;
    };
    std::vector<Case> cases = {{IntPolynomial(zpoly{5, 0, 1}), 144},
                               {IntPolynomial(zpoly{-1, -1, 1}), 64},
                               {IntPolynomial(zpoly{-1, -1, 0, 1}), 16}};
    for (const auto &[P, S] : cases) {
        auto cs = census_set(P, S);
        REQUIRE(!cs.empty());
        size_t n = P.degree();
        auto perms = signed_perms(n);
        REQUIRE(perms.size() == (n == 2 ? 8 : 48));
        for (const auto &k : cs) {
            ZMat X(n, n);
            for (size_t i = 0; i < n * n; i++) X.a[i] = k[i];
            REQUIRE(cs.count(key(transpose(X))) == 1);
            for (const auto &G : perms) REQUIRE(cs.count(key(testsupport::conjugate(G, X))) == 1);
        }
    }
}

TEST_CASE("counts are monotone in the radius") {
    IntPolynomial P1(zpoly{1, 0, 1});
    IntPolynomial Pc(zpoly{-1, -1, 0, 1});
    ZZ prev(-1);
    for (long T = 0; T <= 30; T++) {
        ZZ c = count_at(P1, T);
        REQUIRE(c >= prev);
        prev = c;
    }
    prev = ZZ(-1);
    for (long T = 0; T <= 6; T++) {
        ZZ c = count_at(Pc, T);
        REQUIRE(c >= prev);
        prev = c;
    }
}

TEST_CASE("power-sum targets from Newton's identities") {
    REQUIRE(power_sum_targets(IntPolynomial(zpoly{1, 0, 1})) == std::vector<ZZ>{ZZ(0), ZZ(-2)});
    REQUIRE(power_sum_targets(IntPolynomial(zpoly{-1, -1, 1})) == std::vector<ZZ>{ZZ(1), ZZ(3)});
    REQUIRE(power_sum_targets(IntPolynomial(zpoly{-1, -1, 0, 1})) ==
            std::vector<ZZ>{ZZ(0), ZZ(2), ZZ(3)});
    // consistency: tr(C^k) over the companion matrix reproduces the targets
    IntPolynomial P(zpoly{3, -2, 0, 1});
    ZMat C = companion(P), M = C;
    auto p = power_sum_targets(P);
    for (size_t k = 0; k < p.size(); k++) {
        ZZ tr(0);
        for (size_t i = 0; i < M.nr; i++) tr += M(i, i);
        REQUIRE(tr == p[k]);
        M = M * C;
    }
}

TEST_CASE("companion matrices") {
    REQUIRE(companion(IntPolynomial(zpoly{5, 0, 1})) == mat2(0, -5, 1, 0));
    REQUIRE(companion(IntPolynomial(zpoly{-1, -1, 0, 1})) == mat3({0, 0, 1, 1, 0, 1, 0, 1, 0}));
    IntPolynomial Q(zpoly{7, -3, 2, 0, 1});
    REQUIRE(char_poly(companion(Q)) == Q.coeffs());
}

TEST_CASE("worked counts and the exact stream at small radius") {
    IntPolynomial P1(zpoly{1, 0, 1});
    REQUIRE(count_at(P1, 3) == 10);

    std::set<std::vector<long>> got;
    enumerate_matrices(P1, ZZ(4), [&](const ZMat &X) { got.insert(key(X)); });
    std::set<std::vector<long>> want = {{0, -1, 1, 0}, {0, 1, -1, 0}};
    REQUIRE(got == want);

    // streamed census agrees with the counted census
    IntPolynomial P5(zpoly{5, 0, 1});
    long streamed = 0;
    enumerate_matrices(P5, ZZ(400), [&](const ZMat &) { streamed++; });
    REQUIRE(ZZ(streamed) == count_at(P5, 20));
}

TEST_CASE("boundary accounting and non-integral radii") {
    IntPolynomial P1(zpoly{1, 0, 1});
    CountOptions o;
    o.T = QQ(7) / 2; // T^2 = 49/4 is not an integer: no boundary possible
    CountResult r = count_matrices(P1, o);
    REQUIRE(r.S == 12);
    REQUIRE(r.boundary == 0);
    REQUIRE(r.count == naive_count_n2(P1, 12, false));
    o.strict = true;
    REQUIRE(count_matrices(P1, o).count == r.count);

    // degree 3 at T = 4 has a populated sphere; strict drops exactly that shell
    IntPolynomial Pc(zpoly{-1, -1, 0, 1});
    REQUIRE(count_at(Pc, 4, false) - count_at(Pc, 4, true) == 144);

    // zero radius and the negative-radius guard
    REQUIRE(count_at(P1, 0) == 0);
    CountOptions bad;
    bad.T = QQ(-1);
    REQUIRE_THROWS_AS(count_matrices(P1, bad), invalid_input);
}

TEST_CASE("node budget exhaustion raises budget_exceeded") {
    IntPolynomial Pc(zpoly{-1, -1, 0, 1});
    CountOptions o;
    o.T = QQ(8);
    o.node_budget = 10;
    REQUIRE_THROWS_AS(count_matrices(Pc, o), budget_exceeded);
    REQUIRE_THROWS_AS(enumerate_matrices(Pc, ZZ(64), [](const ZMat &) {}, 10), budget_exceeded);
}

TEST_CASE("multithreaded counts agree with single-threaded counts") {
    IntPolynomial P3(zpoly{3, 0, 1});
    REQUIRE(count_at(P3, 50, false, 4) == count_at(P3, 50, false, 1));
    REQUIRE(count_at(P3, 50, false, 4, true) == count_at(P3, 50, false, 1, true));
    IntPolynomial Pc(zpoly{-1, -1, 0, 1});
    REQUIRE(count_at(Pc, 8, false, 4) == 7608);
    REQUIRE(count_at(Pc, 8, false, 1) == 7608);
}

TEST_CASE("orbit-restricted counts split the full census") {
    CountOptions o;
    o.T = QQ(12);
    IntPolynomial P5(zpoly{5, 0, 1});
    CountResult principal = count_orbit_in_ball(companion(P5), o);
    CountResult other = count_orbit_in_ball(mat2(1, -3, 2, -1), o);
    REQUIRE(principal.count == 28);
    REQUIRE(other.count == 28);
    REQUIRE(principal.count + other.count == count_matrices(P5, o).count);
}
