#pragma once

#include <rcla/point_cloud.hpp>
#include <rcla/union_find.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace rcla {

inline constexpr double infinity = std::numeric_limits<double>::infinity();

/// Dense symmetric matrix of pairwise distances.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }

    void set(std::size_t i, std::size_t j, double v) {
        if (!(v >= 0.0)) throw std::invalid_argument("distances must be nonnegative");
        if (i == j && v != 0.0) throw std::invalid_argument("diagonal must be zero");
        d_[i * n_ + j] = v;
        d_[j * n_ + i] = v;
    }

    double max_entry() const {
        double m = 0.0;
        for (double v : d_) m = std::max(m, v);
        return m;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
};

inline DistanceMatrix distance_matrix(const PointCloud& cloud) {
    if (cloud.empty()) throw std::invalid_argument("empty input");
    DistanceMatrix dm(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i)
        for (std::size_t j = i + 1; j < cloud.size(); ++j) dm.set(i, j, distance(cloud[i], cloud[j]));
    return dm;
}

struct PersistencePair {
    double birth = 0.0;
    double death = infinity;

    bool essential() const { return std::isinf(death); }
    double persistence() const { return death - birth; }
    friend auto operator<=>(const PersistencePair&, const PersistencePair&) = default;
};

struct PersistenceDiagram {
    int degree = 0;
    std::vector<PersistencePair> pairs;

    std::size_t essential_count() const {
        return static_cast<std::size_t>(std::count_if(pairs.begin(), pairs.end(), [](const auto& p) { return p.essential(); }));
    }
    void sort() { std::sort(pairs.begin(), pairs.end()); }
};

/// eps: a simplex enters once all pairwise distances are <= 2 eps (edge value d/2).
/// dist: the common software convention, edge value d.
enum class FiltrationScale { eps, dist };

inline double scale_factor(FiltrationScale s) { return s == FiltrationScale::eps ? 0.5 : 1.0; }

struct PersistenceOptions {
    int max_degree = 1;
    /// Largest filtration value admitted, in the units of `scale`. Infinity keeps every simplex.
    double max_scale = infinity;
    FiltrationScale scale = FiltrationScale::eps;
};

namespace detail {

class Binomial {
public:
    explicit Binomial(std::size_t n) : table_(n + 1) {
        for (std::size_t v = 0; v <= n; ++v) {
            const auto x = static_cast<std::int64_t>(v);
            table_[v] = {1, x, x * (x - 1) / 2, x * (x - 1) * (x - 2) / 6};
        }
    }
    std::int64_t operator()(std::size_t n, int k) const { return table_[n][static_cast<std::size_t>(k)]; }

private:
    std::vector<std::array<std::int64_t, 4>> table_;
};

struct Edge {
    double value;
    std::int64_t index; // C(i,2) + j with i > j
    std::uint32_t i;
    std::uint32_t j;
};

struct Entry {
    double value;
    std::int64_t index;
};

// min-heap in filtration order: value ascending, then index ascending
struct EntryAfter {
    bool operator()(const Entry& a, const Entry& b) const {
        return a.value > b.value || (a.value == b.value && a.index > b.index);
    }
};

using WorkingColumn = std::priority_queue<Entry, std::vector<Entry>, EntryAfter>;

inline bool pop_pivot(WorkingColumn& col, Entry& pivot) {
    while (!col.empty()) {
        pivot = col.top();
        col.pop();
        if (col.empty() || col.top().index != pivot.index) return true;
        col.pop(); // two copies cancel over F2
    }
    return false;
}

class RipsComplex {
public:
    RipsComplex(const DistanceMatrix& dm, double factor, double threshold)
        : n_(dm.size()), binom_(dm.size()), f_(dm.size() * dm.size()), threshold_(threshold) {
        for (std::size_t a = 0; a < n_; ++a)
            for (std::size_t b = 0; b < n_; ++b) f_[a * n_ + b] = factor * dm(a, b);
    }

    std::size_t size() const { return n_; }
    double value(std::size_t a, std::size_t b) const { return f_[a * n_ + b]; }

    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        for (std::uint32_t i = 1; i < n_; ++i)
            for (std::uint32_t j = 0; j < i; ++j) {
                const double v = value(i, j);
                if (v <= threshold_) out.push_back({v, binom_(i, 2) + j, i, j});
            }
        std::sort(out.begin(), out.end(), [](const Edge& a, const Edge& b) {
            return a.value < b.value || (a.value == b.value && a.index < b.index);
        });
        return out;
    }

    std::int64_t triangle_index(std::size_t a, std::size_t b, std::size_t c) const {
        if (a < b) std::swap(a, b);
        if (b < c) std::swap(b, c);
        if (a < b) std::swap(a, b);
        return binom_(a, 3) + binom_(b, 2) + static_cast<std::int64_t>(c);
    }

    // Cofacets are visited with strictly increasing triangle index.
    template <typename Visit>
    void for_each_cofacet(const Edge& e, Visit&& visit) const {
        for (std::size_t v = 0; v < n_; ++v) {
            if (v == e.i || v == e.j) continue;
            const double tv = std::max({e.value, value(e.i, v), value(e.j, v)});
            if (tv > threshold_) continue;
            if (!visit(Entry{tv, triangle_index(e.i, e.j, v)})) return;
        }
    }

private:
    std::size_t n_;
    Binomial binom_;
    std::vector<double> f_;
    double threshold_;
};

// A cocycle stored as a bit per edge, with triangles scanned in filtration order to find the
// smallest one on which its coboundary is nonzero. Used for columns whose heap grows large.
class CocycleScanner {
public:
    static constexpr std::uint32_t none = std::numeric_limits<std::uint32_t>::max();

    CocycleScanner(const RipsComplex& c, const std::vector<Edge>& edges)
        : c_(&c), edges_(&edges), n_(c.size()), pos_(n_ * n_, none), order_(n_ * n_), bits_(edges.size() / 64 + 1, 0) {
        for (std::size_t p = 0; p < edges.size(); ++p) {
            pos_[edges[p].i * n_ + edges[p].j] = static_cast<std::uint32_t>(p);
            pos_[edges[p].j * n_ + edges[p].i] = static_cast<std::uint32_t>(p);
        }
        for (std::size_t a = 0; a < n_; ++a) {
            auto* row = order_.data() + a * n_;
            for (std::size_t b = 0; b < n_; ++b) row[b] = static_cast<std::uint32_t>(b);
            std::sort(row, row + n_, [&](std::uint32_t x, std::uint32_t y) { return c.value(a, x) < c.value(a, y); });
        }
    }

    void flip(std::uint32_t p) { bits_[p / 64] ^= std::uint64_t{1} << (p % 64); }
    void reset(std::uint32_t p) { bits_[p / 64] &= ~(std::uint64_t{1} << (p % 64)); }

    // Smallest triangle at or after value `from` with nonzero coboundary; false if none.
    bool pivot(double from, Entry& out) const {
        const auto& edges = *edges_;
        auto g0 = static_cast<std::size_t>(
            std::lower_bound(edges.begin(), edges.end(), from, [](const Edge& e, double v) { return e.value < v; }) -
            edges.begin());
        while (g0 < edges.size()) {
            std::size_t g1 = g0 + 1;
            while (g1 < edges.size() && edges[g1].value == edges[g0].value) ++g1;
            std::int64_t best = -1;
            for (std::size_t p = g0; p < g1; ++p) {
                const Edge& e = edges[p];
                const bool own = bit(static_cast<std::uint32_t>(p));
                const auto* near = order_.data() + e.i * n_;
                const auto* pi = pos_.data() + e.i * n_;
                const auto* pj = pos_.data() + e.j * n_;
                for (std::size_t t = 0; t < n_; ++t) {
                    const std::uint32_t v = near[t];
                    if (c_->value(e.i, v) > e.value) break;
                    const std::uint32_t a = pi[v], b = pj[v];
                    // the triangle belongs to the group of its last edge
                    if (a >= p || b >= p) continue;
                    if (own == (bit(a) != bit(b))) continue;
                    const std::int64_t idx = c_->triangle_index(e.i, e.j, v);
                    if (best < 0 || idx < best) best = idx;
                }
            }
            if (best >= 0) {
                out = {edges[g0].value, best};
                return true;
            }
            g0 = g1;
        }
        return false;
    }

private:
    bool bit(std::uint32_t p) const { return (bits_[p / 64] >> (p % 64)) & 1u; }

    const RipsComplex* c_;
    const std::vector<Edge>* edges_;
    std::size_t n_;
    std::vector<std::uint32_t> pos_;
    std::vector<std::uint32_t> order_;
    std::vector<std::uint64_t> bits_;
};

} // namespace detail

/// Vietoris-Rips persistence in degrees 0 and 1 over F2.
/// Degree 0 pairs come from a union-find sweep over the sorted edges; degree 1 pairs come
/// from reducing the coboundary matrix of the edges that the sweep left unpaired.
inline std::vector<PersistenceDiagram> vr_persistence(const DistanceMatrix& dm, const PersistenceOptions& options = {}) {
    using namespace detail;
    const std::size_t n = dm.size();
    if (n == 0) throw std::invalid_argument("empty input");
    if (options.max_degree < 0 || options.max_degree > 1) throw std::invalid_argument("max degree must be 0 or 1");
    if (!(options.max_scale > 0.0)) throw std::invalid_argument("max scale must be positive");

    // Past the enclosing radius the complex is a cone, so nothing changes beyond it.
    double enclosing = infinity;
    for (std::size_t i = 0; i < n; ++i) {
        double far = 0.0;
        for (std::size_t j = 0; j < n; ++j) far = std::max(far, dm(i, j));
        enclosing = std::min(enclosing, far);
    }
    const double factor = scale_factor(options.scale);
    const RipsComplex complex(dm, factor, std::min(options.max_scale, factor * enclosing));
    const std::vector<Edge> edges = complex.edges();

    std::vector<PersistenceDiagram> out;
    PersistenceDiagram h0{0, {}};
    std::vector<char> paired_in_h0(edges.size(), 0);
    {
        UnionFind uf(n);
        for (std::size_t e = 0; e < edges.size(); ++e) {
            if (!uf.unite(edges[e].i, edges[e].j)) continue;
            paired_in_h0[e] = 1;
            if (edges[e].value > 0.0) h0.pairs.push_back({0.0, edges[e].value});
        }
        for (std::size_t c = 0; c < uf.components(); ++c) h0.pairs.push_back({0.0, infinity});
    }
    h0.sort();
    out.push_back(std::move(h0));
    if (options.max_degree < 1) return out;

    PersistenceDiagram h1{1, {}};
    struct Owner {
        std::uint32_t edge;
        std::int32_t reduction; // -1: column was never modified
    };
    std::unordered_map<std::int64_t, Owner> pivot_owner;
    pivot_owner.reserve(edges.size());
    std::vector<std::vector<std::uint32_t>> reductions;
    std::optional<CocycleScanner> scanner;
    const std::size_t heap_limit = 64 * n + 4096;

    WorkingColumn working;
    std::vector<std::uint32_t> reduction;

    // Clearing: edges that killed a component cannot create a cycle class.
    for (std::size_t pos = edges.size(); pos-- > 0;) {
        if (paired_in_h0[pos]) continue;
        const auto col = static_cast<std::uint32_t>(pos);
        const Edge& e = edges[pos];

        // An untouched column whose smallest cofacet is still unclaimed is already reduced.
        Entry first{};
        bool has_first = false;
        complex.for_each_cofacet(e, [&](const Entry& t) {
            if (t.value != e.value) return true;
            first = t;
            has_first = true;
            return false;
        });
        if (has_first && pivot_owner.emplace(first.index, Owner{col, -1}).second) continue;

        working = WorkingColumn{};
        reduction.assign(1, col);
        bool scanning = false;
        auto add = [&](std::uint32_t r) {
            reduction.push_back(r);
            if (scanning)
                scanner->flip(r);
            else
                complex.for_each_cofacet(edges[r], [&](const Entry& t) {
                    working.push(t);
                    return true;
                });
        };
        complex.for_each_cofacet(e, [&](const Entry& t) {
            working.push(t);
            return true;
        });

        Entry pivot{};
        bool alive = pop_pivot(working, pivot);
        while (alive) {
            auto it = pivot_owner.find(pivot.index);
            if (it == pivot_owner.end()) break;
            const Owner owner = it->second;
            if (!scanning && working.size() > heap_limit) {
                if (!scanner) scanner.emplace(complex, edges);
                for (auto r : reduction) scanner->flip(r);
                working = WorkingColumn{};
                scanning = true;
            }
            if (!scanning) working.push(pivot);
            if (owner.reduction < 0) {
                add(owner.edge);
            } else {
                for (auto r : reductions[static_cast<std::size_t>(owner.reduction)]) add(r);
            }
            alive = scanning ? scanner->pivot(pivot.value, pivot) : pop_pivot(working, pivot);
        }
        if (scanning)
            for (auto r : reduction) scanner->reset(r);

        if (!alive) {
            h1.pairs.push_back({e.value, infinity});
            continue;
        }
        if (pivot.value > e.value) h1.pairs.push_back({e.value, pivot.value});

        std::sort(reduction.begin(), reduction.end());
        std::vector<std::uint32_t> compact;
        for (std::size_t a = 0; a < reduction.size();) {
            std::size_t b = a;
            while (b < reduction.size() && reduction[b] == reduction[a]) ++b;
            if ((b - a) % 2 == 1) compact.push_back(reduction[a]);
            a = b;
        }
        if (compact.size() == 1 && compact.front() == col) {
            pivot_owner.emplace(pivot.index, Owner{col, -1});
        } else {
            pivot_owner.emplace(pivot.index, Owner{col, static_cast<std::int32_t>(reductions.size())});
            reductions.push_back(std::move(compact));
        }
    }
    h1.sort();
    out.push_back(std::move(h1));
    return out;
}

inline std::vector<PersistenceDiagram> vr_persistence(const DistanceMatrix& dm, int max_degree, double max_scale) {
    return vr_persistence(dm, PersistenceOptions{max_degree, max_scale, FiltrationScale::eps});
}

inline std::vector<PersistenceDiagram> vr_persistence(const PointCloud& cloud, const PersistenceOptions& options = {}) {
    return vr_persistence(distance_matrix(cloud), options);
}

} // namespace rcla
