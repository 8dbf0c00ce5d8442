#pragma once

#include <rcla/point_cloud.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace rcla {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Stable seed for (master, a, b); adding new a/b values never perturbs existing ones.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(splitmix64(master) ^ a) ^ (b * 0xd1b54a32d192ed03ULL));
}

/// Deterministic generator for one (seed, stream) pair.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(derive_seed(seed, stream)) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }

    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }

    /// Inversion for small means; libstdc++'s rejection sampler above 30.
    std::uint64_t poisson(double mean) {
        if (!(mean >= 0.0)) throw std::invalid_argument("poisson mean must be nonnegative");
        if (mean == 0.0) return 0;
        if (mean > 30.0) return static_cast<std::uint64_t>(std::poisson_distribution<std::int64_t>(mean)(engine_));
        const double u = uniform(0.0, 1.0);
        double term = std::exp(-mean);
        double cdf = term;
        std::uint64_t k = 0;
        while (u > cdf) {
            ++k;
            term *= mean / static_cast<double>(k);
            cdf += term;
            if (term < 1e-300 && cdf >= 1.0 - 1e-15) break;
        }
        return k;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

struct Box {
    std::vector<double> lo;
    std::vector<double> hi;

    static Box unit(std::size_t m) { return {std::vector<double>(m, 0.0), std::vector<double>(m, 1.0)}; }

    std::size_t dim() const { return lo.size(); }

    double volume() const {
        double v = 1.0;
        for (std::size_t i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i];
        return v;
    }

    void validate() const {
        if (lo.empty() || lo.size() != hi.size()) throw std::invalid_argument("box dimension mismatch");
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (!(lo[i] < hi[i])) throw std::invalid_argument("box must have positive volume");
    }

    bool contains(std::span<const double> p) const {
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (p[i] < lo[i] || p[i] > hi[i]) return false;
        return true;
    }
};

struct Circle {
    std::array<double, 2> center{0.5, 0.5};
    double radius = 0.4;
};

/// Two disjoint circles in the unit square; 85% of the points go to the larger one.
struct TwoCircleGeometry {
    Circle large{{0.5, 0.55}, 0.3};
    Circle small{{0.25, 0.2}, 0.1};
    double large_fraction = 0.85;
};

inline PointCloud sample_circle(std::size_t n, const Circle& circle, Rng& rng) {
    if (!(circle.radius > 0.0)) throw std::invalid_argument("radius must be positive");
    PointCloud out(2);
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double p[2] = {circle.center[0] + circle.radius * std::cos(t), circle.center[1] + circle.radius * std::sin(t)};
        out.push_back(p);
    }
    return out;
}

inline PointCloud sample_two_circles(std::size_t n, Rng& rng, const TwoCircleGeometry& geometry = {}) {
    const auto n_large = static_cast<std::size_t>(std::llround(geometry.large_fraction * static_cast<double>(n)));
    PointCloud out = sample_circle(n_large, geometry.large, rng);
    out.append(sample_circle(n - n_large, geometry.small, rng));
    return out;
}

inline PointCloud uniform_in_box(std::size_t count, const Box& box, Rng& rng) {
    box.validate();
    PointCloud out(box.dim());
    out.reserve(count);
    std::vector<double> p(box.dim());
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t d = 0; d < box.dim(); ++d) p[d] = rng.uniform(box.lo[d], box.hi[d]);
        out.push_back(p);
    }
    return out;
}

/// Homogeneous Poisson point process of intensity lambda restricted to `box`.
inline PointCloud hppp_box(double lambda, const Box& box, Rng& rng) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("lambda must be nonnegative");
    box.validate();
    const std::uint64_t count = rng.poisson(lambda * box.volume());
    return uniform_in_box(count, box, rng);
}

enum class PointLabel : std::uint8_t { shape = 0, noise = 1 };

struct LabeledCloud {
    PointCloud points;
    std::vector<PointLabel> labels;

    std::size_t count(PointLabel l) const {
        std::size_t c = 0;
        for (auto x : labels) c += (x == l);
        return c;
    }
};

/// Shape plus round(r * |shape|) i.i.d. uniform points in `box`.
inline LabeledCloud make_noisy_dataset(const PointCloud& shape, double r, const Box& box, Rng& rng) {
    if (shape.empty()) throw std::invalid_argument("empty input");
    if (!(r >= 0.0)) throw std::invalid_argument("noise ratio must be nonnegative");
    if (box.dim() != shape.dim()) throw std::invalid_argument("box dimension mismatch");
    const auto n_noise = static_cast<std::size_t>(std::llround(r * static_cast<double>(shape.size())));
    LabeledCloud out{shape, std::vector<PointLabel>(shape.size(), PointLabel::shape)};
    out.points.append(uniform_in_box(n_noise, box, rng));
    out.labels.resize(out.points.size(), PointLabel::noise);
    return out;
}

} // namespace rcla
