#pragma once

#include <rcla/point_cloud.hpp>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

namespace rcla {

/// Integer coordinates (j_1, ..., j_m) of a half-open cube
/// [origin + j*delta, origin + (j+1)*delta).
struct CellKey {
    std::vector<std::int64_t> index;

    std::size_t dim() const { return index.size(); }
    friend auto operator<=>(const CellKey&, const CellKey&) = default;
    friend bool operator==(const CellKey&, const CellKey&) = default;
};

struct GridSpec {
    std::vector<double> origin;
    double delta = 0.0;
    std::vector<std::int64_t> extent;

    std::size_t dim() const { return origin.size(); }

    /// M = prod extent_i.
    std::uint64_t total_cells() const {
        std::uint64_t m = 1;
        for (auto e : extent) {
            const auto ue = static_cast<std::uint64_t>(e);
            if (ue != 0 && m > std::numeric_limits<std::uint64_t>::max() / ue)
                throw std::overflow_error("grid cell count overflows 64 bits");
            m *= ue;
        }
        return m;
    }

    bool contains(const CellKey& key) const {
        if (key.dim() != extent.size()) return false;
        for (std::size_t i = 0; i < extent.size(); ++i)
            if (key.index[i] < 0 || key.index[i] >= extent[i]) return false;
        return true;
    }
};

inline void validate(const GridSpec& grid) {
    if (!(grid.delta > 0.0) || !std::isfinite(grid.delta))
        throw std::invalid_argument("grid delta must be positive");
    if (grid.origin.empty() || grid.origin.size() != grid.extent.size())
        throw std::invalid_argument("grid origin/extent dimension mismatch");
    for (auto e : grid.extent)
        if (e < 1) throw std::invalid_argument("grid extent must be >= 1");
}

inline CellKey cell_of(std::span<const double> p, const GridSpec& grid) {
    if (!(grid.delta > 0.0)) throw std::invalid_argument("grid delta must be positive");
    if (p.size() != grid.origin.size()) throw std::invalid_argument("point dimension mismatch");
    CellKey key;
    key.index.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        key.index[i] = static_cast<std::int64_t>(std::floor((p[i] - grid.origin[i]) / grid.delta));
    return key;
}

inline std::vector<double> cell_center(const CellKey& key, const GridSpec& grid) {
    std::vector<double> c(key.dim());
    for (std::size_t i = 0; i < key.dim(); ++i)
        c[i] = grid.origin[i] + (static_cast<double>(key.index[i]) + 0.5) * grid.delta;
    return c;
}

/// Anchors the lattice at the coordinate-wise minimum of the cloud.
inline GridSpec build_grid(const PointCloud& cloud, double delta) {
    if (cloud.empty()) throw std::invalid_argument("empty input");
    if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("grid delta must be positive");
    const std::size_t m = cloud.dim();
    std::vector<double> lo(cloud[0].begin(), cloud[0].end());
    std::vector<double> hi = lo;
    for (std::size_t i = 1; i < cloud.size(); ++i) {
        auto p = cloud[i];
        for (std::size_t d = 0; d < m; ++d) {
            lo[d] = std::min(lo[d], p[d]);
            hi[d] = std::max(hi[d], p[d]);
        }
    }
    GridSpec grid{lo, delta, std::vector<std::int64_t>(m)};
    for (std::size_t d = 0; d < m; ++d)
        grid.extent[d] = static_cast<std::int64_t>(std::floor((hi[d] - lo[d]) / delta)) + 1;
    return grid;
}

struct CellStats {
    std::size_t count = 0;
    std::size_t first_index = 0;
};

/// Realizes N(C) = |C ∩ X| for every occupied cube, ordered lexicographically by key.
struct CellHistogram {
    std::map<CellKey, CellStats> cells;

    std::size_t occupied() const { return cells.size(); }

    std::size_t count(const CellKey& key) const {
        auto it = cells.find(key);
        return it == cells.end() ? 0 : it->second.count;
    }

    std::size_t total() const {
        std::size_t s = 0;
        for (const auto& [k, c] : cells) s += c.count;
        return s;
    }
};

inline CellHistogram histogram(const PointCloud& cloud, const GridSpec& grid) {
    validate(grid);
    if (!cloud.empty() && cloud.dim() != grid.dim()) throw std::invalid_argument("point dimension mismatch");
    CellHistogram h;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        CellKey key = cell_of(cloud[i], grid);
        if (!grid.contains(key)) throw std::out_of_range("point outside grid");
        auto [it, inserted] = h.cells.try_emplace(std::move(key), CellStats{0, i});
        ++it->second.count;
    }
    return h;
}

} // namespace rcla
