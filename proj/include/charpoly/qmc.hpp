#ifndef CHARPOLY_QMC_HPP
#define CHARPOLY_QMC_HPP

/* Randomized quasi-Monte Carlo integration over the unit cube: a rank-1
 * Kronecker lattice with generator frac(sqrt(p_i)) over the first primes,
 * randomized by independent uniform shifts.  The shift means give an
 * unbiased estimate and an empirical standard error.  Everything is a
 * pure function of (dimension, sample count, shift count, seed), so
 * results are reproducible byte for byte.
 */

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "charpoly/prelude.hpp"

namespace charpoly {

namespace qmc_detail {

inline std::vector<long> first_primes(int count) {
    std::vector<long> out;
    for (long c = 2; static_cast<int>(out.size()) < count; ++c) {
        bool prime = true;
        for (long d = 2; d * d <= c; ++d)
            if (c % d == 0) { prime = false; break; }
        if (prime) out.push_back(c);
    }
    return out;
}

inline double frac(double x) { return x - std::floor(x); }

} // namespace qmc_detail

/* Inverse of the standard normal CDF (Acklam's rational approximation,
 * relative error below 1.15e-9 over (0,1)).
 */
inline double inv_normal_cdf(double p) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425, phigh = 1.0 - plow;
    const double eps = 1e-300;
    if (p < eps) p = eps;
    if (p > 1.0 - 1e-16) p = 1.0 - 1e-16;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > phigh) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = p - 0.5, r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

/* Map dim+1 cube coordinates to a uniform point of the unit ball in R^dim
 * (Gaussian direction, radius u^(1/dim)).
 */
inline void ball_point(const double *u, int dim, double *out) {
    double norm2 = 0.0;
    for (int i = 0; i < dim; ++i) {
        out[i] = inv_normal_cdf(u[i]);
        norm2 += out[i] * out[i];
    }
    double norm = std::sqrt(norm2);
    if (norm < 1e-300) norm = 1e-300;
    double radius = std::pow(u[dim], 1.0 / static_cast<double>(dim));
    for (int i = 0; i < dim; ++i) out[i] *= radius / norm;
}

struct QmcResult {
    double mean = 0.0;
    double std_error = 0.0;
    std::vector<double> shift_means;
    long samples_per_shift = 0;
    int shifts = 0;
};

/* Integrate f over [0,1)^dim.  `samples` is the total budget, split evenly
 * across `shifts` randomized copies of the lattice stream.
 */
inline QmcResult qmc_integrate(int dim, long samples, int shifts, std::uint64_t seed,
                               const std::function<double(const double *)> &f) {
    if (dim < 1 || dim > 64) throw invalid_input("qmc_integrate: bad dimension");
    if (shifts < 2) throw invalid_input("qmc_integrate: need at least 2 shifts");
    long per_shift = samples / shifts;
    if (per_shift < 1) throw invalid_input("qmc_integrate: too few samples");

    std::vector<long> primes = qmc_detail::first_primes(dim);
    std::vector<double> gamma(dim);
    for (int i = 0; i < dim; ++i)
        gamma[i] = qmc_detail::frac(std::sqrt(static_cast<double>(primes[i])));

    std::mt19937_64 rng(seed);
    auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };

    QmcResult res;
    res.shifts = shifts;
    res.samples_per_shift = per_shift;
    std::vector<double> x(dim), point(dim);
    for (int j = 0; j < shifts; ++j) {
        for (int i = 0; i < dim; ++i) x[i] = unit();
        double acc = 0.0;
        for (long k = 0; k < per_shift; ++k) {
            for (int i = 0; i < dim; ++i) {
                point[i] = x[i];
                x[i] = qmc_detail::frac(x[i] + gamma[i]);
            }
            acc += f(point.data());
        }
        res.shift_means.push_back(acc / static_cast<double>(per_shift));
    }
    double mean = 0.0;
    for (double v : res.shift_means) mean += v;
    mean /= shifts;
    double var = 0.0;
    for (double v : res.shift_means) var += (v - mean) * (v - mean);
    var /= static_cast<double>(shifts) * (shifts - 1);
    res.mean = mean;
    res.std_error = std::sqrt(var);
    return res;
}

} // namespace charpoly

#endif
