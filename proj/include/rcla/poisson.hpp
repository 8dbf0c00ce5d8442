#pragma once

#include <rcla/grid.hpp>
#include <rcla/point_cloud.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rcla {

struct NoiseModel {
    double lambda = 0.0; ///< HPPP intensity per unit volume
    double mu = 0.0;     ///< expected noise points per cube, lambda * delta^m

    static NoiseModel from_intensity(double lambda, double delta, std::size_t m) {
        if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
        if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
        return {lambda, lambda * std::pow(delta, static_cast<double>(m))};
    }
};

namespace detail {

inline void check_mu(double mu) {
    if (!(mu >= 0.0) || std::isinf(mu)) throw std::invalid_argument("poisson mean must be a nonnegative finite number");
}

inline double log_pois_pmf(double mu, std::int64_t j) {
    if (mu == 0.0) return j == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    const double x = static_cast<double>(j);
    return -mu + x * std::log(mu) - std::lgamma(x + 1.0);
}

// sum_{j >= k} pmf(j); only used when the upper tail is the smaller side
inline double pois_upper_sum(double mu, std::int64_t k) {
    double term = std::exp(log_pois_pmf(mu, k));
    double sum = 0.0;
    for (std::int64_t j = k; term > 0.0; ++j) {
        sum += term;
        if (term <= sum * 1e-18) break;
        term *= mu / static_cast<double>(j + 1);
    }
    return sum;
}

} // namespace detail

/// P(Pois(mu) <= r); zero for r < 0.
inline double pois_cdf(double mu, std::int64_t r) {
    detail::check_mu(mu);
    if (r < 0) return 0.0;
    if (mu == 0.0) return 1.0;

    const double start = std::exp(-mu);
    if (start > std::numeric_limits<double>::min() * 1e10) {
        double term = start;
        double sum = term;
        for (std::int64_t j = 0; j < r; ++j) {
            term *= mu / static_cast<double>(j + 1);
            sum += term;
            if (static_cast<double>(j) > mu && term <= sum * 1e-18) break;
        }
        return std::min(sum, 1.0);
    }

    // e^{-mu} underflows: accumulate log-terms relative to the largest one
    const double peak = detail::log_pois_pmf(mu, std::min<std::int64_t>(r, static_cast<std::int64_t>(mu)));
    double sum = 0.0;
    for (std::int64_t j = r; j >= 0; --j) {
        const double lt = detail::log_pois_pmf(mu, j) - peak;
        if (lt < -745.0 && static_cast<double>(j) < mu) break;
        sum += std::exp(lt);
    }
    return std::min(std::exp(peak + std::log(sum)), 1.0);
}

/// P(Pois(mu) >= k) = 1 - F(k - 1).
inline double pois_tail(double mu, std::int64_t k) {
    detail::check_mu(mu);
    if (k <= 0) return 1.0;
    if (mu == 0.0) return 0.0;
    if (static_cast<double>(k) > mu) return std::min(detail::pois_upper_sum(mu, k), 1.0);
    return std::max(0.0, 1.0 - pois_cdf(mu, k - 1));
}

/// Probability that no cube without shape points collects k or more noise points.
inline double prob_no_noise_cubes(double mu, std::int64_t k, std::uint64_t num_zero_shape_cells) {
    detail::check_mu(mu);
    if (k < 1) throw std::invalid_argument("threshold k must be >= 1");
    if (num_zero_shape_cells == 0) return 1.0;
    const double tail = pois_tail(mu, k);
    if (tail >= 1.0) return 0.0;
    return std::exp(static_cast<double>(num_zero_shape_cells) * std::log1p(-tail));
}

/// Probability that every cube holding shape points reaches the threshold k.
inline double prob_no_outshape_cubes(double mu, std::int64_t k, const std::vector<std::int64_t>& shape_counts) {
    detail::check_mu(mu);
    if (k < 1) throw std::invalid_argument("threshold k must be >= 1");
    double log_p = 0.0;
    for (auto n : shape_counts) {
        if (n <= 0) throw std::invalid_argument("shape counts must be positive");
        const std::int64_t r = std::max<std::int64_t>(0, k - n);
        const double factor = pois_tail(mu, r);
        if (factor <= 0.0) return 0.0;
        log_p += std::log(factor);
    }
    return std::exp(log_p);
}

/// N_shape(C) for every cube of the grid, zeros included.
struct ShapeOccupancy {
    std::vector<std::int64_t> shape_counts;
    std::uint64_t num_zero = 0;

    static ShapeOccupancy from_counts(std::vector<std::int64_t> counts) {
        ShapeOccupancy occ{std::move(counts), 0};
        for (auto c : occ.shape_counts) {
            if (c < 0) throw std::invalid_argument("shape counts must be nonnegative");
            if (c == 0) ++occ.num_zero;
        }
        return occ;
    }

    std::vector<std::int64_t> positive_counts() const {
        std::vector<std::int64_t> out;
        for (auto c : shape_counts)
            if (c > 0) out.push_back(c);
        return out;
    }
};

/// Counts of the shape cloud over every cube of `grid`, in row-major key order.
inline ShapeOccupancy shape_occupancy(const PointCloud& shape, const GridSpec& grid) {
    const CellHistogram h = histogram(shape, grid);
    const std::uint64_t total = grid.total_cells();
    std::vector<std::int64_t> counts(total, 0);
    for (const auto& [key, stats] : h.cells) {
        std::uint64_t flat = 0;
        for (std::size_t i = 0; i < key.dim(); ++i)
            flat = flat * static_cast<std::uint64_t>(grid.extent[i]) + static_cast<std::uint64_t>(key.index[i]);
        counts[flat] = static_cast<std::int64_t>(stats.count);
    }
    return ShapeOccupancy::from_counts(std::move(counts));
}

struct StabilityCertificate {
    double alpha = 0.0;
    double beta = 0.0;
    double confidence = 1.0; ///< 1 - (alpha + beta); negative values are reported unchanged
    double bound = 0.0;      ///< sqrt(m) * delta
    double mu = 0.0;
};

inline StabilityCertificate stability_certificate(const ShapeOccupancy& occ, double lambda, double delta,
                                                  std::int64_t k, std::size_t m) {
    if (k < 1) throw std::invalid_argument("threshold k must be >= 1");
    if (m < 1) throw std::invalid_argument("dimension must be >= 1");
    const NoiseModel noise = NoiseModel::from_intensity(lambda, delta, m);
    StabilityCertificate cert;
    cert.mu = noise.mu;
    cert.alpha = 1.0 - prob_no_noise_cubes(noise.mu, k, occ.num_zero);
    cert.beta = 1.0 - prob_no_outshape_cubes(noise.mu, k, occ.positive_counts());
    cert.confidence = 1.0 - (cert.alpha + cert.beta);
    cert.bound = std::sqrt(static_cast<double>(m)) * delta;
    return cert;
}

} // namespace rcla
