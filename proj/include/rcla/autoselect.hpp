#pragma once

#include <rcla/beta.hpp>
#include <rcla/grid.hpp>
#include <rcla/neighbors.hpp>
#include <rcla/point_cloud.hpp>
#include <rcla/poisson.hpp>
#include <rcla/reduction.hpp>
#include <rcla/stats.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace rcla {

/// Knobs of the automatic (delta, k) search.
struct AutoSelectConfig {
    std::vector<std::size_t> orders{5, 8, 16}; ///< neighbour orders pooled for delta candidates
    double q_lo = 0.01;
    double q_hi = 0.70;
    std::size_t n_candidates = 20;
    double gamma = 0.05;    ///< Beta posterior tail level
    double alpha_fp = 1.0;  ///< max expected noise-only cubes retained
    double eta = 1.0;       ///< weight on the component penalty in J
    double c_r = 1.5;       ///< radius-graph radius in units of delta
    std::size_t n_min = 50; ///< minimum number of representatives

    void validate() const {
        if (orders.empty()) throw std::invalid_argument("neighbour order set is empty");
        if (!(q_lo > 0.0 && q_lo < q_hi && q_hi <= 1.0)) throw std::invalid_argument("need 0 < q_lo < q_hi <= 1");
        if (n_candidates < 2) throw std::invalid_argument("need at least two delta candidates");
        if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must lie in (0, 1)");
        if (!(alpha_fp > 0.0)) throw std::invalid_argument("alpha_fp must be positive");
        if (!(eta >= 0.0)) throw std::invalid_argument("eta must be nonnegative");
        if (!(c_r > 0.0)) throw std::invalid_argument("c_r must be positive");
        if (n_min < 1) throw std::invalid_argument("n_min must be >= 1");
    }
};

struct CandidateReport {
    double delta = 0.0;
    std::uint64_t M = 0;
    std::uint64_t Z0 = 0;
    double p_L = 0.0;
    double mu_U = 0.0;
    std::int64_t k = 0;
    std::size_t n_reps = 0;
    double nn_mean = 0.0;
    double nn_sd = 0.0;
    std::size_t beta0 = 0;
    double J = std::numeric_limits<double>::infinity();
    bool rejected = false;
    std::string reason;
};

struct AutoSelectResult {
    double delta_star = 0.0;
    std::int64_t k_star = 0;
    std::size_t best_index = 0;
    std::vector<CandidateReport> reports;
};

class NoFeasibleCandidate : public std::runtime_error {
public:
    explicit NoFeasibleCandidate(std::vector<CandidateReport> reports)
        : std::runtime_error("no feasible candidate"), reports_(std::move(reports)) {}
    const std::vector<CandidateReport>& reports() const { return reports_; }

private:
    std::vector<CandidateReport> reports_;
};

/// n values a, a*r, ..., b spaced evenly in log scale, endpoints included.
inline std::vector<double> geometric_grid(double a, double b, std::size_t n) {
    if (!(a > 0.0) || !(b >= a) || n < 2) throw std::invalid_argument("invalid geometric grid");
    std::vector<double> out(n);
    const double la = std::log(a);
    const double lb = std::log(b);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::exp(la + (lb - la) * static_cast<double>(i) / static_cast<double>(n - 1));
    out.front() = a;
    out.back() = b;
    for (std::size_t i = 1; i < n; ++i) out[i] = std::max(out[i], out[i - 1]);
    return out;
}

inline std::vector<double> delta_candidates(const PointCloud& cloud, const AutoSelectConfig& config) {
    config.validate();
    const auto per_order = knn_distances(cloud, config.orders);
    std::vector<double> pooled;
    pooled.reserve(per_order.size() * cloud.size());
    for (const auto& v : per_order) pooled.insert(pooled.end(), v.begin(), v.end());
    std::sort(pooled.begin(), pooled.end());
    if (pooled.empty() || pooled.back() <= 0.0) throw std::invalid_argument("degenerate cloud");

    double a = quantile_sorted(pooled, config.q_lo);
    double b = quantile_sorted(pooled, config.q_hi);
    if (a <= 0.0) a = *std::upper_bound(pooled.begin(), pooled.end(), 0.0);
    b = std::max(a, b);
    return geometric_grid(a, b, config.n_candidates);
}

/// Smallest k >= 1 with M * P(Pois(mu_U) >= k) <= alpha_fp.
inline std::int64_t select_k(std::uint64_t M, double mu_U, double alpha_fp) {
    if (M < 1) throw std::invalid_argument("cell count M must be >= 1");
    if (!(alpha_fp > 0.0)) throw std::invalid_argument("alpha_fp must be positive");
    const double m = static_cast<double>(M);
    std::int64_t k = 1;
    while (m * pois_tail(mu_U, k) > alpha_fp) ++k;
    return k;
}

struct QualityTerms {
    double J = 0.0;
    double nn_mean = 0.0;
    double nn_sd = 0.0;
    std::size_t beta0 = 0;
};

/// J = sd(d_NN) * mean(d_NN) + eta * (beta0 - 1), population sd, radius graph at c_r * delta.
inline QualityTerms quality_terms(const PointCloud& reps, double delta, const AutoSelectConfig& config) {
    const std::size_t n = reps.size();
    if (n < 2) throw std::invalid_argument("need at least two representatives");
    std::vector<double> nn(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d2 = squared_distance(reps[i], reps[j]);
            nn[i] = std::min(nn[i], d2);
            nn[j] = std::min(nn[j], d2);
        }
    double mean = 0.0;
    for (auto& d : nn) {
        d = std::sqrt(d);
        mean += d;
    }
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double d : nn) var += (d - mean) * (d - mean);
    var /= static_cast<double>(n);

    QualityTerms t;
    t.nn_mean = mean;
    t.nn_sd = std::sqrt(var);
    t.beta0 = betti0_radius_graph(reps, config.c_r * delta);
    t.J = t.nn_sd * t.nn_mean + config.eta * (static_cast<double>(t.beta0) - 1.0);
    return t;
}

inline double quality_J(const PointCloud& reps, double delta, const AutoSelectConfig& config) {
    return quality_terms(reps, delta, config).J;
}

inline CandidateReport evaluate_candidate(const PointCloud& cloud, double delta, const AutoSelectConfig& config) {
    CandidateReport rep;
    rep.delta = delta;
    const GridSpec grid = build_grid(cloud, delta);
    const CellHistogram h = histogram(cloud, grid);
    rep.M = grid.total_cells();
    rep.Z0 = rep.M - h.occupied();
    rep.p_L = beta_quantile(static_cast<double>(rep.Z0) + 0.5, static_cast<double>(rep.M - rep.Z0) + 0.5, config.gamma);
    rep.mu_U = std::max(0.0, -std::log(rep.p_L));
    rep.k = select_k(rep.M, rep.mu_U, config.alpha_fp);

    const ReducedCloud reduced =
        rcla_reduce(cloud, ReductionParams{delta, static_cast<std::size_t>(rep.k), Representative::center}, grid);
    rep.n_reps = reduced.points.size();
    if (rep.n_reps < config.n_min || rep.n_reps < 2) {
        rep.rejected = true;
        rep.reason = "fewer than n_min representatives";
        return rep;
    }
    const QualityTerms q = quality_terms(reduced.points, delta, config);
    rep.nn_mean = q.nn_mean;
    rep.nn_sd = q.nn_sd;
    rep.beta0 = q.beta0;
    rep.J = q.J;
    return rep;
}

/// Automatic (delta, k) selection; the minimal-J candidate wins, ties go to the smaller delta.
inline AutoSelectResult auto_select(const PointCloud& cloud, const AutoSelectConfig& config = {}) {
    config.validate();
    const std::vector<double> deltas = delta_candidates(cloud, config);

    AutoSelectResult result;
    result.reports.reserve(deltas.size());
    bool found = false;
    for (double delta : deltas) {
        result.reports.push_back(evaluate_candidate(cloud, delta, config));
        const CandidateReport& r = result.reports.back();
        if (r.rejected) continue;
        if (!found || r.J < result.reports[result.best_index].J) {
            result.best_index = result.reports.size() - 1;
            found = true;
        }
    }
    if (!found) throw NoFeasibleCandidate(std::move(result.reports));
    result.delta_star = result.reports[result.best_index].delta;
    result.k_star = result.reports[result.best_index].k;
    return result;
}

} // namespace rcla
