#ifndef CHARPOLY_COUNTER_HPP
#define CHARPOLY_COUNTER_HPP

/* Exact enumeration of integer matrices with a prescribed characteristic
 * polynomial inside a Frobenius ball ||X||_F <= T.
 *
 * The enumeration fixes the diagonal (last entry forced by the trace), then
 * the off-diagonal transpose pairs; the product of the final pair is forced
 * by the second elementary symmetric condition and resolved by a divisor
 * scan. Remaining coefficient conditions are checked exactly at each leaf.
 * For n = 2 the same scheme runs in machine integers (128-bit products)
 * with optional threading; the generic path is exact mpz arithmetic. */

#include "charpoly/lmd.hpp"
#include "charpoly/polynomial.hpp"
#include "charpoly/qmat.hpp"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>

namespace charpoly {

struct CountOptions {
    QQ T;                                          // ball radius, exact
    bool strict = false;                           // true: ||X|| < T, false: <=
    int threads = 1;
    unsigned long long node_budget = 5'000'000'000ULL;
    bool force_generic = false;                    // disable the n=2 fast path
};

struct CountResult {
    ZZ count;     // matrices satisfying the chosen norm rule
    ZZ boundary;  // matrices with ||X||^2 == T^2 exactly (0 unless T^2 integral)
    ZZ S;         // enumerated bound: floor(T^2)
    bool fast_path = false;
    unsigned long long nodes = 0;
};

using MatrixSink = std::function<void(const ZMat &)>;

namespace detail {

inline long isqrt_long(long v) {
    if (v < 0) return -1;
    long r = static_cast<long>(std::sqrt(static_cast<double>(v)));
    while (r > 0 && r * r > v) r--;
    while ((r + 1) * (r + 1) <= v) r++;
    return r;
}

struct NodeBudget {
    std::atomic<unsigned long long> used{0};
    unsigned long long limit;
    explicit NodeBudget(unsigned long long l) : limit(l) {}
    void spend(unsigned long long k) {
        if (used.fetch_add(k, std::memory_order_relaxed) + k > limit)
            throw budget_exceeded("count_matrices: node budget exhausted");
    }
};

/* Machine-integer n=2 counter for one stretch of diagonal values.
 * S <= 4e18 so all intermediates fit in __int128. */
struct FastN2 {
    long tr, dt; // trace and determinant targets
    long S;      // Frobenius bound (floor T^2)
    bool has_eq; // whether T^2 is exactly the integer S
    unsigned long long count = 0, boundary = 0, nodes = 0;

    void run(long a_lo, long a_hi, long a_step) {
        for (long a = a_lo; a <= a_hi; a += a_step) {
            long e = tr - a;
            __int128 diag = static_cast<__int128>(a) * a + static_cast<__int128>(e) * e;
            if (diag > S) continue;
            __int128 R = S - diag;
            __int128 k = static_cast<__int128>(a) * e - dt;
            nodes++;
            if (k == 0) {
                long r = isqrt_long(static_cast<long>(R));
                // b = 0: c in [-r, r]; c = 0, b != 0: 2r values
                count += static_cast<unsigned long long>(4 * r + 1);
                if (has_eq) {
                    if (R == 0)
                        boundary += 1;
                    else if (static_cast<__int128>(r) * r == R)
                        boundary += 4;
                }
                continue;
            }
            __int128 ak = k < 0 ? -k : k;
            if (2 * ak > R) continue; // b^2 + c^2 >= 2|bc|
            long dmax = isqrt_long(static_cast<long>(ak));
            for (long d = 1; d <= dmax; d++) {
                if (ak % d != 0) continue;
                long d2 = static_cast<long>(ak / d);
                __int128 nrm = static_cast<__int128>(d) * d + static_cast<__int128>(d2) * d2;
                unsigned long long mult = (d == d2) ? 2 : 4;
                if (nrm <= R) {
                    count += mult;
                    if (has_eq && nrm == R) boundary += mult;
                }
            }
            nodes += static_cast<unsigned long long>(dmax);
        }
    }
};

/* Generic exact enumerator. */
class GenericCounter {
  public:
    GenericCounter(const IntPolynomial &P, ZZ S, NodeBudget &budget, MatrixSink sink)
        : P_(P), n_(static_cast<size_t>(P.degree())), S_(std::move(S)), budget_(&budget),
          sink_(std::move(sink)) {
        const zpoly &c = P.coeffs();
        tr_ = -c[n_ - 1];
        m2_ = c[n_ - 2];
        for (size_t i = 0; i < n_; i++)
            for (size_t j = i + 1; j < n_; j++) pairs_.emplace_back(i, j);
        X_ = ZMat(n_, n_);
    }

    /* Restrict the top diagonal entry to value == v (for thread splitting);
     * no restriction when unset. */
    std::optional<ZZ> d0_only;

    void run() {
        used_ = 0;
        diag(0);
    }

    ZZ count = 0, boundary = 0;

  private:
    void spend() {
        local_nodes_++;
        if (local_nodes_ % 4096 == 0) budget_->spend(4096);
    }

    void diag(size_t k) {
        ZZ rem = S_ - used_;
        if (sgn(rem) < 0) return;
        if (k == n_ - 1) {
            ZZ dsum = 0;
            for (size_t i = 0; i < k; i++) dsum += X_(i, i);
            ZZ last = tr_ - dsum;
            if (last * last > rem) return;
            X_(k, k) = last;
            used_ += last * last;
            offdiag();
            used_ -= last * last;
            return;
        }
        ZZ r = isqrt(rem);
        ZZ lo = -r, hi = r;
        if (k == 0 && d0_only) lo = hi = *d0_only;
        for (ZZ v = lo; v <= hi; v++) {
            spend();
            if (v * v > rem) continue;
            X_(k, k) = v;
            used_ += v * v;
            diag(k + 1);
            used_ -= v * v;
        }
    }

    void offdiag() {
        // target sum of products over transpose pairs
        ZZ dd = 0;
        for (size_t i = 0; i < n_; i++)
            for (size_t j = i + 1; j < n_; j++) dd += X_(i, i) * X_(j, j);
        q_target_ = dd - m2_;
        qsum_ = 0;
        pair_level(0);
    }

    void pair_level(size_t p) {
        if (p + 1 == pairs_.size()) {
            last_pair();
            return;
        }
        auto [i, j] = pairs_[p];
        ZZ rem = S_ - used_;
        ZZ r = isqrt(rem);
        for (ZZ b = -r; b <= r; b++) {
            ZZ bb = b * b;
            if (bb > rem) continue;
            ZZ rem2 = rem - bb;
            ZZ r2 = isqrt(rem2);
            X_(i, j) = b;
            for (ZZ c = -r2; c <= r2; c++) {
                spend();
                if (c * c > rem2) continue;
                X_(j, i) = c;
                used_ += bb + c * c;
                qsum_ += b * c;
                pair_level(p + 1);
                qsum_ -= b * c;
                used_ -= bb + c * c;
            }
        }
        X_(i, j) = 0;
        X_(j, i) = 0;
    }

    void last_pair() {
        auto [i, j] = pairs_.back();
        ZZ q = q_target_ - qsum_;
        ZZ rem = S_ - used_;
        if (sgn(q) == 0) {
            ZZ r = isqrt(rem);
            X_(i, j) = 0;
            for (ZZ c = -r; c <= r; c++) {
                spend();
                if (c * c > rem) continue;
                X_(j, i) = c;
                used_ += c * c;
                leaf();
                used_ -= c * c;
            }
            X_(j, i) = 0;
            for (ZZ b = -r; b <= r; b++) {
                spend();
                if (sgn(b) == 0 || b * b > rem) continue;
                X_(i, j) = b;
                used_ += b * b;
                leaf();
                used_ -= b * b;
            }
            X_(i, j) = 0;
            return;
        }
        ZZ aq = abs(q);
        if (2 * aq > rem) return;
        ZZ dmax = isqrt(aq);
        for (ZZ d = 1; d <= dmax; d++) {
            spend();
            if (aq % d != 0) continue;
            ZZ d2 = divexact(aq, d);
            ZZ nrm = d * d + d2 * d2;
            if (nrm > rem) continue;
            // orientations (|b|,|c|) = (d, d2) and (d2, d); both signs of b
            for (int ori = 0; ori < (d == d2 ? 1 : 2); ori++) {
                ZZ bmag = ori ? d2 : d;
                for (int sb = -1; sb <= 1; sb += 2) {
                    ZZ b = sb * bmag;
                    ZZ c = divexact(q, b);
                    X_(i, j) = b;
                    X_(j, i) = c;
                    used_ += nrm;
                    leaf();
                    used_ -= nrm;
                }
            }
        }
        X_(i, j) = 0;
        X_(j, i) = 0;
    }

    void leaf() {
        spend();
        if (!(char_poly(X_) == P_.coeffs())) return;
        count += 1;
        if (used_ == S_ && t2_is_S_) boundary += 1;
        if (sink_) sink_(X_);
    }

  public:
    bool t2_is_S_ = false; // set when T^2 equals the integer S exactly

  private:
    const IntPolynomial &P_;
    size_t n_;
    ZZ S_;
    NodeBudget *budget_;
    MatrixSink sink_;
    ZZ tr_, m2_, q_target_, qsum_, used_;
    std::vector<std::pair<size_t, size_t>> pairs_;
    ZMat X_;
    unsigned long long local_nodes_ = 0;
};

/* Same enumeration as GenericCounter, specialized to native 64-bit
 * arithmetic for the ranges where nothing can overflow (n <= 4 and
 * S small enough that Faddeev-LeVerrier stays within long).  The DFS
 * order, budget accounting, and conventions match the big-integer
 * version exactly; only the scalar type differs.
 */
class GenericCounterSmall {
  public:
    GenericCounterSmall(const IntPolynomial &P, long S, NodeBudget &budget, MatrixSink sink)
        : n_(static_cast<size_t>(P.degree())), S_(S), budget_(&budget), sink_(std::move(sink)) {
        const zpoly &c = P.coeffs();
        for (size_t i = 0; i < n_; i++) target_[i] = c[i].get_si();
        tr_ = -target_[n_ - 1];
        m2_ = target_[n_ - 2];
        for (size_t i = 0; i < n_; i++)
            for (size_t j = i + 1; j < n_; j++) pairs_.emplace_back(i, j);
        for (auto &row : X_)
            for (auto &v : row) v = 0;
    }

    static bool applicable(const IntPolynomial &P, const ZZ &S) {
        if (P.degree() > 4) return false;
        if (S > ZZ(200000000)) return false;
        for (const ZZ &ci : P.coeffs())
            if (abs(ci) > ZZ(1000000000)) return false;
        return true;
    }

    std::optional<long> d0_only;

    void run() {
        used_ = 0;
        diag(0);
    }

    unsigned long long count = 0, boundary = 0;
    bool t2_is_S_ = false;

  private:
    void spend() {
        local_nodes_++;
        if (local_nodes_ % 4096 == 0) budget_->spend(4096);
    }

    void diag(size_t k) {
        if (k >= 4) return; // unreachable (n_ <= 4); bounds the subscripts for the optimizer
        long rem = S_ - used_;
        if (rem < 0) return;
        if (k == n_ - 1) {
            long dsum = 0;
            for (size_t i = 0; i < k; i++) dsum += X_[i][i];
            long last = tr_ - dsum;
            if (last * last > rem) return;
            X_[k][k] = last;
            used_ += last * last;
            offdiag();
            used_ -= last * last;
            return;
        }
        long r = isqrt_long(rem);
        long lo = -r, hi = r;
        if (k == 0 && d0_only) lo = hi = *d0_only;
        for (long v = lo; v <= hi; v++) {
            spend();
            if (v * v > rem) continue;
            X_[k][k] = v;
            used_ += v * v;
            diag(k + 1);
            used_ -= v * v;
        }
    }

    void offdiag() {
        long dd = 0;
        for (size_t i = 0; i < n_; i++)
            for (size_t j = i + 1; j < n_; j++) dd += X_[i][i] * X_[j][j];
        q_target_ = dd - m2_;
        qsum_ = 0;
        pair_level(0);
    }

    void pair_level(size_t p) {
        if (p + 1 == pairs_.size()) {
            last_pair();
            return;
        }
        auto [i, j] = pairs_[p];
        long rem = S_ - used_;
        long r = isqrt_long(rem);
        for (long b = -r; b <= r; b++) {
            long bb = b * b;
            if (bb > rem) continue;
            long rem2 = rem - bb;
            long r2 = isqrt_long(rem2);
            X_[i][j] = b;
            for (long c = -r2; c <= r2; c++) {
                spend();
                if (c * c > rem2) continue;
                X_[j][i] = c;
                used_ += bb + c * c;
                qsum_ += b * c;
                pair_level(p + 1);
                qsum_ -= b * c;
                used_ -= bb + c * c;
            }
        }
        X_[i][j] = 0;
        X_[j][i] = 0;
    }

    void last_pair() {
        auto [i, j] = pairs_.back();
        long q = q_target_ - qsum_;
        long rem = S_ - used_;
        if (q == 0) {
            long r = isqrt_long(rem);
            X_[i][j] = 0;
            for (long c = -r; c <= r; c++) {
                spend();
                if (c * c > rem) continue;
                X_[j][i] = c;
                used_ += c * c;
                leaf();
                used_ -= c * c;
            }
            X_[j][i] = 0;
            for (long b = -r; b <= r; b++) {
                spend();
                if (b == 0 || b * b > rem) continue;
                X_[i][j] = b;
                used_ += b * b;
                leaf();
                used_ -= b * b;
            }
            X_[i][j] = 0;
            return;
        }
        long aq = std::abs(q);
        if (2 * aq > rem) return;
        long dmax = isqrt_long(aq);
        for (long d = 1; d <= dmax; d++) {
            spend();
            if (aq % d != 0) continue;
            long d2 = aq / d;
            long nrm = d * d + d2 * d2;
            if (nrm > rem) continue;
            for (int ori = 0; ori < (d == d2 ? 1 : 2); ori++) {
                long bmag = ori ? d2 : d;
                for (int sb = -1; sb <= 1; sb += 2) {
                    long b = sb * bmag;
                    long c = q / b;
                    X_[i][j] = b;
                    X_[j][i] = c;
                    used_ += nrm;
                    leaf();
                    used_ -= nrm;
                }
            }
        }
        X_[i][j] = 0;
        X_[j][i] = 0;
    }

    /* Exact char poly comparison by Faddeev-LeVerrier over long; the
     * applicability bound keeps every intermediate below overflow. */
    bool char_poly_matches() const {
        long n = static_cast<long>(n_);
        long M[4][4], tmp[4][4];
        for (long i = 0; i < n; i++)
            for (long j = 0; j < n; j++) M[i][j] = X_[static_cast<size_t>(i)][static_cast<size_t>(j)];
        long ck = 0;
        for (long k = 1; k <= n; k++) {
            if (k > 1) {
                // M <- X * (M + ck I)
                for (long i = 0; i < n; i++) M[i][i] += ck;
                for (long i = 0; i < n; i++)
                    for (long j = 0; j < n; j++) {
                        long s = 0;
                        for (long l = 0; l < n; l++)
                            s += X_[static_cast<size_t>(i)][static_cast<size_t>(l)] * M[l][j];
                        tmp[i][j] = s;
                    }
                for (long i = 0; i < n; i++)
                    for (long j = 0; j < n; j++) M[i][j] = tmp[i][j];
            }
            long tr = 0;
            for (long i = 0; i < n; i++) tr += M[i][i];
            ck = -tr / k; // exact by Newton's identities
            if (ck * k != -tr) return false;
            if (ck != target_[static_cast<size_t>(n - k)]) return false;
        }
        return true;
    }

    void leaf() {
        spend();
        if (!char_poly_matches()) return;
        count += 1;
        if (used_ == S_ && t2_is_S_) boundary += 1;
        if (sink_) {
            ZMat M(n_, n_);
            for (size_t i = 0; i < n_; i++)
                for (size_t j = 0; j < n_; j++) M(i, j) = X_[i][j];
            sink_(M);
        }
    }

    size_t n_;
    long S_;
    NodeBudget *budget_;
    MatrixSink sink_;
    long target_[5];
    long tr_ = 0, m2_ = 0, q_target_ = 0, qsum_ = 0, used_ = 0;
    std::vector<std::pair<size_t, size_t>> pairs_;
    long X_[5][5];
    unsigned long long local_nodes_ = 0;
};

} // namespace detail

inline CountResult count_matrices(const IntPolynomial &P, const CountOptions &opt) {
    if (sgn(opt.T) < 0) throw invalid_input("count_matrices: negative radius");
    QQ T2 = opt.T * opt.T;
    ZZ S = floor_q(T2);
    bool t2_integral = is_integer(T2);
    CountResult out;
    out.S = S;
    long n = P.degree();
    detail::NodeBudget budget(opt.node_budget);

    bool fast_ok = !opt.force_generic && n == 2 && S <= ZZ("4000000000000000000");
    const zpoly &c = P.coeffs();
    if (fast_ok)
        for (const ZZ &ci : c)
            if (abs(ci) > ZZ(1) << 40) fast_ok = false;

    if (fast_ok) {
        long tr = -c[1].get_si(), dt = c[0].get_si(), Sl = S.get_si();
        // 2a^2 - 2 tr a + tr^2 - S <= 0 bounds the diagonal range
        long amax = detail::isqrt_long(Sl); // coarse, the loop re-checks exactly
        long lo = tr / 2 - amax - 2, hi = tr / 2 + amax + 2;
        int nt = std::max(1, opt.threads);
        std::vector<detail::FastN2> work(static_cast<size_t>(nt));
        std::vector<std::thread> th;
        for (int t = 0; t < nt; t++) {
            work[static_cast<size_t>(t)] = {tr, dt, Sl, t2_integral, 0, 0, 0};
            th.emplace_back([&work, t, lo, hi, nt] {
                work[static_cast<size_t>(t)].run(lo + t, hi, nt);
            });
        }
        for (auto &x : th) x.join();
        unsigned long long cnt = 0, bnd = 0, nodes = 0;
        for (auto &w : work) {
            cnt += w.count;
            bnd += w.boundary;
            nodes += w.nodes;
        }
        budget.spend(nodes);
        out.count = ZZ(static_cast<unsigned long>(cnt));
        out.boundary = t2_integral ? ZZ(static_cast<unsigned long>(bnd)) : ZZ(0);
        out.fast_path = true;
        out.nodes = nodes;
        if (opt.strict) out.count -= out.boundary;
        return out;
    }

    int nt = std::max(1, opt.threads);
    if (detail::GenericCounterSmall::applicable(P, S)) {
        long Sl = S.get_si();
        if (nt == 1) {
            detail::GenericCounterSmall g(P, Sl, budget, nullptr);
            g.t2_is_S_ = t2_integral;
            g.run();
            out.count = ZZ(static_cast<unsigned long>(g.count));
            out.boundary = ZZ(static_cast<unsigned long>(g.boundary));
        } else {
            long r = detail::isqrt_long(Sl);
            std::vector<unsigned long long> cnts(static_cast<size_t>(nt)), bnds(static_cast<size_t>(nt));
            std::vector<std::thread> th;
            std::exception_ptr eptr;
            std::mutex emu;
            for (int t = 0; t < nt; t++) {
                th.emplace_back([&, t] {
                    try {
                        unsigned long long c0 = 0, b0 = 0;
                        for (long v = -r + t; v <= r; v += nt) {
                            detail::GenericCounterSmall g(P, Sl, budget, nullptr);
                            g.t2_is_S_ = t2_integral;
                            g.d0_only = v;
                            g.run();
                            c0 += g.count;
                            b0 += g.boundary;
                        }
                        cnts[static_cast<size_t>(t)] = c0;
                        bnds[static_cast<size_t>(t)] = b0;
                    } catch (...) {
                        std::lock_guard<std::mutex> lk(emu);
                        if (!eptr) eptr = std::current_exception();
                    }
                });
            }
            for (auto &x : th) x.join();
            if (eptr) std::rethrow_exception(eptr);
            unsigned long long cnt = 0, bnd = 0;
            for (int t = 0; t < nt; t++) {
                cnt += cnts[static_cast<size_t>(t)];
                bnd += bnds[static_cast<size_t>(t)];
            }
            out.count = ZZ(static_cast<unsigned long>(cnt));
            out.boundary = ZZ(static_cast<unsigned long>(bnd));
        }
        out.nodes = budget.used.load();
        if (!t2_integral) out.boundary = 0;
        if (opt.strict) out.count -= out.boundary;
        return out;
    }
    if (nt == 1) {
        detail::GenericCounter g(P, S, budget, nullptr);
        g.t2_is_S_ = t2_integral;
        g.run();
        out.count = g.count;
        out.boundary = g.boundary;
    } else {
        ZZ r = isqrt(S);
        std::vector<ZZ> d0s;
        for (ZZ v = -r; v <= r; v++) d0s.push_back(v);
        std::vector<ZZ> cnts(static_cast<size_t>(nt)), bnds(static_cast<size_t>(nt));
        std::vector<std::thread> th;
        std::exception_ptr eptr;
        std::mutex emu;
        for (int t = 0; t < nt; t++) {
            th.emplace_back([&, t] {
                try {
                    ZZ c0 = 0, b0 = 0;
                    for (size_t i = static_cast<size_t>(t); i < d0s.size(); i += static_cast<size_t>(nt)) {
                        detail::GenericCounter g(P, S, budget, nullptr);
                        g.t2_is_S_ = t2_integral;
                        g.d0_only = d0s[i];
                        g.run();
                        c0 += g.count;
                        b0 += g.boundary;
                    }
                    cnts[static_cast<size_t>(t)] = c0;
                    bnds[static_cast<size_t>(t)] = b0;
                } catch (...) {
                    std::lock_guard<std::mutex> lk(emu);
                    if (!eptr) eptr = std::current_exception();
                }
            });
        }
        for (auto &x : th) x.join();
        if (eptr) std::rethrow_exception(eptr);
        for (int t = 0; t < nt; t++) {
            out.count += cnts[static_cast<size_t>(t)];
            out.boundary += bnds[static_cast<size_t>(t)];
        }
    }
    out.nodes = budget.used.load();
    if (!t2_integral) out.boundary = 0;
    if (opt.strict) out.count -= out.boundary;
    return out;
}

/* Stream every matrix with char poly P and ||X||_F^2 <= S through the sink,
 * in a deterministic enumeration order. */
inline void enumerate_matrices(const IntPolynomial &P, const ZZ &S, const MatrixSink &sink,
                               unsigned long long node_budget = 5'000'000'000ULL) {
    detail::NodeBudget budget(node_budget);
    if (detail::GenericCounterSmall::applicable(P, S)) {
        detail::GenericCounterSmall g(P, S.get_si(), budget, sink);
        g.run();
        return;
    }
    detail::GenericCounter g(P, S, budget, sink);
    g.run();
}

/* Exact traces p_k = tr(X^k) shared by all X with char poly P, from
 * Newton's identities on the coefficients. */
inline std::vector<ZZ> power_sum_targets(const IntPolynomial &P) {
    size_t n = P.degree();
    std::vector<ZZ> e(n + 1);
    e[0] = 1;
    for (size_t i = 1; i <= n; i++) {
        e[i] = P.coeff(n - i);
        if (i % 2 == 1) e[i] = -e[i];
    }
    std::vector<ZZ> p(n + 1);
    for (size_t k = 1; k <= n; k++) {
        ZZ acc(0);
        for (size_t i = 1; i < k; i++) {
            ZZ term = e[i] * p[k - i];
            if (i % 2 == 0) acc -= term;
            else acc += term;
        }
        ZZ last = ZZ(static_cast<unsigned long>(k)) * e[k];
        if (k % 2 == 0) acc -= last;
        else acc += last;
        p[k] = acc;
    }
    return std::vector<ZZ>(p.begin() + 1, p.end());
}

/* Census restricted to the GL_n(Z)-orbit of X0: enumerate the full ball
 * and keep matrices whose orbit invariant matches orbit_invariant(X0). */
inline CountResult count_orbit_in_ball(const ZMat &X0, const CountOptions &opt) {
    if (sgn(opt.T) < 0) throw invalid_input("count_orbit_in_ball: negative radius");
    IntPolynomial P{zpoly(char_poly(X0))};
    FieldPtr F = NumberField::create(P);
    OrbitInvariant inv0 = orbit_invariant(X0, F);
    QQ t2 = opt.T * opt.T;
    bool t2_integral = is_integer(t2);
    CountResult out;
    out.S = floor_q(t2);
    ZZ cnt(0), bdry(0);
    enumerate_matrices(
        P, out.S,
        [&](const ZMat &X) {
            if (!(orbit_invariant(X, F) == inv0)) return;
            cnt += 1;
            if (t2_integral) {
                ZZ n2(0);
                for (const ZZ &v : X.a) n2 += v * v;
                if (QQ(n2) == t2) bdry += 1;
            }
        },
        opt.node_budget);
    out.count = cnt;
    out.boundary = bdry;
    if (opt.strict) out.count -= out.boundary;
    return out;
}

/* Companion matrix of P: sub-diagonal ones, last column -c_0..-c_{n-1}.
 * The characteristic polynomial is re-derived exactly as a guard. */
inline ZMat companion(const IntPolynomial &P) {
    size_t n = P.degree();
    ZMat C(n, n);
    for (size_t i = 0; i + 1 < n; i++) C(i + 1, i) = 1;
    for (size_t i = 0; i < n; i++) C(i, n - 1) = -P.coeff(i);
    std::vector<ZZ> cp = char_poly(C);
    for (size_t i = 0; i <= n; i++)
        if (cp[i] != P.coeff(i)) throw error("companion: characteristic polynomial mismatch");
    return C;
}

} // namespace charpoly

#endif
