#pragma once

#include <rcla/grid.hpp>
#include <rcla/point_cloud.hpp>

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace rcla {

enum class Representative {
    center, ///< cube center c(C)
    sample  ///< first input point that fell into the cube
};

struct ReductionParams {
    double delta = 0.0;
    std::size_t k = 1;
    Representative mode = Representative::center;
};

struct ReducedCloud {
    PointCloud points;
    std::vector<CellKey> kept_cells;
    std::size_t dropped_count = 0;
    GridSpec grid;
};

/// Keeps one representative for every cube with |C ∩ X| >= k on the given lattice.
inline ReducedCloud rcla_reduce(const PointCloud& cloud, const ReductionParams& params, const GridSpec& grid) {
    if (cloud.empty()) throw std::invalid_argument("empty input");
    if (params.k < 1) throw std::invalid_argument("threshold k must be >= 1");
    const CellHistogram h = histogram(cloud, grid);

    ReducedCloud out{PointCloud(cloud.dim()), {}, 0, grid};
    for (const auto& [key, stats] : h.cells) {
        if (stats.count < params.k) {
            out.dropped_count += stats.count;
            continue;
        }
        if (params.mode == Representative::center)
            out.points.push_back(cell_center(key, grid));
        else
            out.points.push_back(cloud[stats.first_index]);
        out.kept_cells.push_back(key);
    }
    return out;
}

inline ReducedCloud rcla_reduce(const PointCloud& cloud, const ReductionParams& params) {
    if (cloud.empty()) throw std::invalid_argument("empty input");
    return rcla_reduce(cloud, params, build_grid(cloud, params.delta));
}

inline ReducedCloud cla_reduce(const PointCloud& cloud, double delta, Representative mode = Representative::center) {
    return rcla_reduce(cloud, ReductionParams{delta, 1, mode});
}

} // namespace rcla
