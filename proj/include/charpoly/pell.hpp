#ifndef CHARPOLY_PELL_HPP
#define CHARPOLY_PELL_HPP

/* Fundamental solution of x^2 - D y^2 = +-4 for a positive non-square
 * discriminant D (= 0 or 1 mod 4), by the PQa continued-fraction algorithm
 * applied to (P0 + sqrt(D))/Q0. The unit (x + y sqrt(D))/2 generates the
 * unit group of the quadratic order of discriminant D modulo +-1. */

#include "charpoly/prelude.hpp"

namespace charpoly {

struct PellSolution {
    ZZ x, y;       // minimal x, y > 0 with x^2 - D y^2 = 4 * norm_sign
    int norm_sign; // +1 or -1: the norm of the fundamental unit
};

inline PellSolution fundamental_pell4(const ZZ &D) {
    if (sgn(D) <= 0) throw invalid_input("fundamental_pell4: D must be positive");
    ZZ r = D % 4;
    if (r != 0 && r != 1) throw invalid_input("fundamental_pell4: D must be 0 or 1 mod 4");
    if (is_square(D)) throw invalid_input("fundamental_pell4: D must not be a square");

    bool even = (r == 0);
    ZZ N = even ? D / 4 : D; // expand (P0 + sqrt(N))/Q0
    ZZ P = even ? ZZ(0) : ZZ(1);
    ZZ Q = even ? ZZ(1) : ZZ(2);
    const ZZ Q0 = Q, P0 = P;
    ZZ s = isqrt(N);

    ZZ Aprev = 1, Bprev = 0; // convergent numerators/denominators A_{i-1}, B_{i-1}
    ZZ A = 0, B = 1;         // seeded so the first step produces A_0 = a_0, B_0 = 1
    std::swap(Aprev, A);     // A_{-2} = 0, A_{-1} = 1 convention
    std::swap(Bprev, B);     // B_{-2} = 1, B_{-1} = 0

    for (long i = 0;; i++) {
        if (i > 10000000) throw error("fundamental_pell4: period not found");
        ZZ a;
        mpz_fdiv_q(a.get_mpz_t(), ZZ(P + s).get_mpz_t(), Q.get_mpz_t());
        ZZ An = a * A + Aprev, Bn = a * B + Bprev;
        Aprev = A;
        Bprev = B;
        A = An;
        B = Bn;
        ZZ Pn = a * Q - P;
        ZZ Qn = divexact(N - Pn * Pn, Q);
        P = Pn;
        Q = Qn;
        if (i >= 0 && Q == Q0) {
            // G^2 - N B^2 = (-1)^(i+1) Q_{i+1} Q_0 with G = Q0 A - P0 B
            ZZ G = Q0 * A - P0 * B;
            int sign = (i % 2 == 0) ? -1 : 1;
            if (even) {
                // G = A here; x^2 - D y^2 = 4 (A^2 - N B^2)
                return {2 * A, B, sign};
            }
            return {G, B, sign};
        }
    }
}

} // namespace charpoly

#endif
