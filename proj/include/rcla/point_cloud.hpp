#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace rcla {

/// Finite list of points in R^m stored row-major. Duplicates are allowed.
class PointCloud {
public:
    PointCloud() = default;

    explicit PointCloud(std::size_t dim) : dim_(dim) {
        if (dim == 0) throw std::invalid_argument("point dimension must be >= 1");
    }

    PointCloud(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
        if (dim == 0) throw std::invalid_argument("point dimension must be >= 1");
        if (coords_.size() % dim != 0)
            throw std::invalid_argument("coordinate count is not a multiple of the dimension");
        for (double c : coords_)
            if (!std::isfinite(c)) throw std::invalid_argument("non-finite coordinate");
    }

    PointCloud(std::initializer_list<std::initializer_list<double>> rows) {
        for (const auto& r : rows) {
            if (dim_ == 0) {
                if (r.size() == 0) throw std::invalid_argument("point dimension must be >= 1");
                dim_ = r.size();
            }
            push_back(std::span<const double>(r.begin(), r.size()));
        }
    }

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
    bool empty() const { return size() == 0; }

    std::span<const double> operator[](std::size_t i) const {
        return {coords_.data() + i * dim_, dim_};
    }

    void push_back(std::span<const double> p) {
        if (dim_ == 0) {
            if (p.empty()) throw std::invalid_argument("point dimension must be >= 1");
            dim_ = p.size();
        }
        if (p.size() != dim_) throw std::invalid_argument("point dimension mismatch");
        for (double c : p)
            if (!std::isfinite(c)) throw std::invalid_argument("non-finite coordinate");
        coords_.insert(coords_.end(), p.begin(), p.end());
    }

    void append(const PointCloud& other) {
        for (std::size_t i = 0; i < other.size(); ++i) push_back(other[i]);
    }

    void reserve(std::size_t n) { coords_.reserve(n * dim_); }

    const std::vector<double>& coords() const { return coords_; }

    friend bool operator==(const PointCloud&, const PointCloud&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> coords_;
};

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

inline double distance(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(squared_distance(a, b));
}

} // namespace rcla
