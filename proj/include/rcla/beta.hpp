#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace rcla {

namespace detail {

inline double log_beta_fn(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// x^a (1-x)^b / B(a,b)
inline double ibeta_prefactor(double a, double b, double x) {
    return std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta_fn(a, b));
}

// Modified Lentz evaluation of the continued fraction for I_x(a,b).
// Returns NaN if it fails to converge.
inline double ibeta_cf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const int max_iter = 20000 + static_cast<int>(20.0 * std::sqrt(std::max(a, b)));

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) return h;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

// Hypergeometric series sum_n (a+b)_n / (a+1)_n x^n; converges for x < 1.
inline double ibeta_series(double a, double b, double x) {
    double term = 1.0;
    double sum = 1.0;
    for (int n = 1; n < 1000000; ++n) {
        term *= (a + b + n - 1.0) / (a + n) * x;
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return sum;
}

inline double ibeta_lower(double a, double b, double x) {
    const double pre = ibeta_prefactor(a, b, x);
    const double cf = ibeta_cf(a, b, x);
    if (std::isfinite(cf)) return pre * cf / a;
    return pre * ibeta_series(a, b, x) / a;
}

} // namespace detail

/// Regularized incomplete beta function I_x(a, b).
inline double ibeta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("beta parameters must be positive");
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("ibeta argument outside [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    if (x < (a + 1.0) / (a + b + 2.0)) return detail::ibeta_lower(a, b, x);
    return 1.0 - detail::ibeta_lower(b, a, 1.0 - x);
}

/// x with I_x(a, b) = gamma, found by bisection down to floating-point resolution.
inline double beta_quantile(double a, double b, double gamma) {
    if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("beta parameters must be positive");
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("quantile level must lie in (0, 1)");
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 2000; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double v = ibeta(a, b, mid);
        if (v == gamma) return mid;
        if (v < gamma)
            lo = mid;
        else
            hi = mid;
    }
    // pick whichever bracket end is closer in probability
    const double flo = lo > 0.0 ? ibeta(a, b, lo) : 0.0;
    const double fhi = ibeta(a, b, hi);
    return (gamma - flo <= fhi - gamma && lo > 0.0) ? lo : hi;
}

/// Credible upper bound on the per-cube noise mean from the empty-cube count:
/// p_L = gamma-quantile of Beta(Z0 + 1/2, M - Z0 + 1/2), mu_U = -ln p_L.
inline double mu_upper(std::uint64_t z0, std::uint64_t m, double gamma) {
    if (m < 1) throw std::invalid_argument("cell count M must be >= 1");
    if (z0 > m) throw std::invalid_argument("empty-cell count exceeds M");
    const double a = static_cast<double>(z0) + 0.5;
    const double b = static_cast<double>(m - z0) + 0.5;
    const double p_lower = beta_quantile(a, b, gamma);
    return std::max(0.0, -std::log(p_lower));
}

} // namespace rcla
