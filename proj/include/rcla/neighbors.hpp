#pragma once

#include <rcla/point_cloud.hpp>
#include <rcla/union_find.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rcla {

/// q-th nearest-neighbour distance (self excluded) for every point, for each order in `orders`.
/// result[o][i] is the orders[o]-th neighbour distance of point i.
inline std::vector<std::vector<double>> knn_distances(const PointCloud& cloud, const std::vector<std::size_t>& orders) {
    const std::size_t n = cloud.size();
    std::size_t qmax = 0;
    for (auto q : orders) {
        if (q < 1) throw std::invalid_argument("neighbour order must be >= 1");
        qmax = std::max(qmax, q);
    }
    if (n <= qmax) throw std::invalid_argument("not enough points");

    std::vector<std::vector<double>> out(orders.size(), std::vector<double>(n));
    std::vector<double> d2(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t w = 0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) d2[w++] = squared_distance(cloud[i], cloud[j]);
        std::partial_sort(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(qmax), d2.end());
        for (std::size_t o = 0; o < orders.size(); ++o) out[o][i] = std::sqrt(d2[orders[o] - 1]);
    }
    return out;
}

inline std::vector<double> knn_distance(const PointCloud& cloud, std::size_t q) {
    return knn_distances(cloud, {q}).front();
}

/// Connected components of the graph joining points at distance <= radius.
inline std::size_t betti0_radius_graph(const PointCloud& points, double radius) {
    if (points.empty()) throw std::invalid_argument("empty input");
    const std::size_t n = points.size();
    const double r2 = radius * radius;
    UnionFind uf(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (squared_distance(points[i], points[j]) <= r2) uf.unite(i, j);
    return uf.components();
}

} // namespace rcla
