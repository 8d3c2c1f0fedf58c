#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "charpoly/lattice.hpp"
#include "charpoly/numfield.hpp"
#include "support.hpp"

using namespace charpoly;

namespace {

bool same_lattice(const LatticeHNF &a, const LatticeHNF &b) { return !(a < b) && !(b < a); }

/* All ideals of Z[alpha] with index (= norm) <= bound, by filtering HNF
 * sublattices for alpha-stability. */
std::vector<LatticeHNF> ideals_up_to(const FieldPtr &F, long bound) {
    auto alpha = FieldElement::alpha(F);
    std::vector<LatticeHNF> out;
    for (long m = 1; m <= bound; m++) {
        for (const ZZ &az : divisors(ZZ(m))) {
            long a = az.get_si();
            long d = m / a;
            for (long b = 0; b < d; b++) {
                std::vector<std::vector<QQ>> gens = {{QQ(a), QQ(b)}, {QQ(0), QQ(d)}};
                LatticeHNF M(F, gens);
                bool stable = true;
                for (const auto &g : M.generators())
                    if (!M.contains(alpha * g)) {
                        stable = false;
                        break;
                    }
                if (stable) out.push_back(M);
            }
        }
    }
    return out;
}

/* Product lattice M*N spanned by all pairwise generator products. */
LatticeHNF product(const LatticeHNF &M, const LatticeHNF &N) {
    std::vector<FieldElement> gens;
    for (const auto &x : M.generators())
        for (const auto &y : N.generators()) gens.push_back(x * y);
    return LatticeHNF(M.generators()[0].field(), gens);
}

} // namespace

TEST_CASE("multiplicator ring is a class invariant", "[lattice]") {
    auto F = NumberField::create(IntPolynomial::from_leading({1, 0, 5}));
    auto alpha = FieldElement::alpha(F);
    auto one = FieldElement::one(F);
    std::vector<LatticeHNF> lats = {
        LatticeHNF::power_lattice(F),
        LatticeHNF(F, std::vector<FieldElement>{QQ(2) * one, one + alpha}),
        LatticeHNF(F, std::vector<FieldElement>{QQ(3) * one, one + alpha}),
        LatticeHNF(F, std::vector<FieldElement>{QQ(6) * one, QQ(2) * alpha}),
    };
    std::vector<FieldElement> scalars = {
        QQ(7) * one, QQ(1, 3) * one, QQ(-5, 2) * one, alpha, one + QQ(2) * alpha, alpha.inverse()};
    for (const auto &M : lats) {
        LatticeHNF ring = multiplicator_ring(M);
        for (const auto &c : scalars) {
            LatticeHNF scaled = M.scaled(c);
            REQUIRE(same_lattice(multiplicator_ring(scaled), ring));
        }
    }
}

TEST_CASE("multiplicator ring contains 1 and Z[alpha] for ideals", "[lattice]") {
    for (auto poly : {std::vector<long>{1, 0, 5}, {1, 0, 3}, {1, -1, -1}, {1, 0, -1, -1}}) {
        auto F = NumberField::create(IntPolynomial::from_leading(poly));
        LatticeHNF O = LatticeHNF::power_lattice(F);
        auto one = FieldElement::one(F);
        auto alpha = FieldElement::alpha(F);
        // the power lattice is its own multiplicator ring or smaller than it
        LatticeHNF ring = multiplicator_ring(O);
        REQUIRE(ring.contains(one));
        REQUIRE(ring.contains_lattice(O));
        if (F->degree() == 2) {
            // principal ideal (2 + alpha) and a couple of small ideals
            std::vector<LatticeHNF> ideals = {
                O.scaled(QQ(2) * one + alpha),
                LatticeHNF(F, std::vector<FieldElement>{QQ(2) * one, one + alpha}),
            };
            for (const auto &I : ideals) {
                // alpha-stability makes these Z[alpha]-modules; the ring must contain Z[alpha]
                LatticeHNF r = multiplicator_ring(I);
                bool stable = true;
                for (const auto &g : I.generators())
                    if (!I.contains(alpha * g)) stable = false;
                if (!stable) continue; // (2, 1+alpha) need not be an ideal for every poly
                REQUIRE(r.contains(one));
                REQUIRE(r.contains(alpha));
                REQUIRE(r.contains_lattice(O));
            }
        }
    }
}

TEST_CASE("equivalence is reflexive, symmetric, transitive on ideals of Z[sqrt-5]", "[lattice]") {
    auto F = NumberField::create(IntPolynomial::from_leading({1, 0, 5}));
    std::vector<LatticeHNF> ideals = ideals_up_to(F, 20);
    REQUIRE(ideals.size() >= 10);

    size_t k = ideals.size();
    std::vector<std::vector<int>> eq(k, std::vector<int>(k, 0));
    for (size_t i = 0; i < k; i++)
        for (size_t j = 0; j < k; j++) {
            auto r = equivalent(ideals[i], ideals[j]);
            REQUIRE(r.status != EquivResult::Status::inconclusive);
            eq[i][j] = (r.status == EquivResult::Status::yes) ? 1 : 0;
            if (eq[i][j]) {
                // witness really maps one lattice onto the other
                REQUIRE(r.witness.has_value());
                REQUIRE(same_lattice(ideals[i].scaled(*r.witness), ideals[j]));
            }
        }
    for (size_t i = 0; i < k; i++) {
        REQUIRE(eq[i][i] == 1);
        for (size_t j = 0; j < k; j++) {
            REQUIRE(eq[i][j] == eq[j][i]);
            for (size_t l = 0; l < k; l++)
                if (eq[i][j] && eq[j][l]) REQUIRE(eq[i][l] == 1);
        }
    }
    // h(-20) = 2: the proper ideals fall into exactly two classes
    std::vector<size_t> reps;
    for (size_t i = 0; i < k; i++) {
        bool found = false;
        for (size_t r : reps)
            if (eq[r][i]) found = true;
        if (!found) reps.push_back(i);
    }
    REQUIRE(reps.size() == 2);
}

TEST_CASE("index is multiplicative over nested triples", "[lattice]") {
    auto F = NumberField::create(IntPolynomial::from_leading({1, -1, -1}));
    auto one = FieldElement::one(F);
    auto alpha = FieldElement::alpha(F);
    LatticeHNF L = LatticeHNF::power_lattice(F);
    LatticeHNF M(F, std::vector<FieldElement>{QQ(2) * one, one + alpha});
    LatticeHNF N(F, std::vector<FieldElement>{QQ(6) * one, QQ(3) * one + QQ(3) * alpha});
    REQUIRE(L.contains_lattice(M));
    REQUIRE(M.contains_lattice(N));
    REQUIRE(lattice_index(L, M) == QQ(2));
    REQUIRE(lattice_index(L, N) == lattice_index(L, M) * lattice_index(M, N));

    // also across a non-nested rational scaling
    LatticeHNF half = L.scaled(QQ(1, 2) * one);
    REQUIRE(lattice_index(half, L) == QQ(4));
}

TEST_CASE("colon lattice inverts invertible ideals", "[lattice]") {
    auto F = NumberField::create(IntPolynomial::from_leading({1, 0, 5}));
    LatticeHNF O = LatticeHNF::power_lattice(F);
    auto one = FieldElement::one(F);
    auto alpha = FieldElement::alpha(F);
    // the nonprincipal ideal (2, 1+alpha) of Z[sqrt-5] is invertible
    LatticeHNF I(F, std::vector<FieldElement>{QQ(2) * one, one + alpha});
    LatticeHNF Iinv = colon_lattice(O, I);
    REQUIRE(same_lattice(product(I, Iinv), O));
    // and I * I is principal (class group has order 2): (2, 1+alpha)^2 = (2)
    LatticeHNF I2 = product(I, I);
    auto r = equivalent(I2, O);
    REQUIRE(r.status == EquivResult::Status::yes);
    REQUIRE(same_lattice(I2, O.scaled(QQ(2) * one)));
}
