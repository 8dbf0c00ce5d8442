#pragma once

#include <rcla/persistence.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rcla {

/// d_inf between two bars: max(|b1 - b2|, |d1 - d2|); infinite deaths only match each other.
inline double interval_inf_dist(const PersistencePair& a, const PersistencePair& b) {
    if (a.essential() != b.essential()) return infinity;
    if (a.essential()) return std::fabs(a.birth - b.birth);
    return std::max(std::fabs(a.birth - b.birth), std::fabs(a.death - b.death));
}

/// d_inf between a bar and the empty interval: half its persistence.
inline double interval_inf_dist(const PersistencePair& a, std::nullopt_t) {
    if (a.essential()) return infinity;
    return (a.death - a.birth) / 2.0;
}

/// Partial bijection between the bars of two diagrams; anything unlisted goes to the diagonal.
struct Matching {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::size_t> unmatched_a;
    std::vector<std::size_t> unmatched_b;
};

struct BottleneckResult {
    double distance = 0.0;
    Matching matching;
};

namespace detail {

// Hopcroft-Karp on a dense bipartite graph given as adjacency lists.
class BipartiteMatcher {
public:
    BipartiteMatcher(std::size_t left, std::size_t right)
        : adj_(left), match_l_(left, none), match_r_(right, none), dist_(left) {}

    void add_edge(std::size_t l, std::size_t r) { adj_[l].push_back(r); }

    std::size_t max_matching() {
        std::size_t size = 0;
        while (bfs())
            for (std::size_t l = 0; l < adj_.size(); ++l)
                if (match_l_[l] == none && dfs(l)) ++size;
        return size;
    }

    std::size_t partner_of_left(std::size_t l) const { return match_l_[l]; }

    static constexpr std::size_t none = static_cast<std::size_t>(-1);

private:
    bool bfs() {
        std::queue<std::size_t> q;
        bool reachable_free = false;
        for (std::size_t l = 0; l < adj_.size(); ++l) {
            if (match_l_[l] == none) {
                dist_[l] = 0;
                q.push(l);
            } else {
                dist_[l] = inf_dist;
            }
        }
        while (!q.empty()) {
            const std::size_t l = q.front();
            q.pop();
            for (std::size_t r : adj_[l]) {
                const std::size_t next = match_r_[r];
                if (next == none) {
                    reachable_free = true;
                } else if (dist_[next] == inf_dist) {
                    dist_[next] = dist_[l] + 1;
                    q.push(next);
                }
            }
        }
        return reachable_free;
    }

    bool dfs(std::size_t l) {
        for (std::size_t r : adj_[l]) {
            const std::size_t next = match_r_[r];
            if (next == none || (dist_[next] == dist_[l] + 1 && dfs(next))) {
                match_l_[l] = r;
                match_r_[r] = l;
                return true;
            }
        }
        dist_[l] = inf_dist;
        return false;
    }

    static constexpr std::size_t inf_dist = static_cast<std::size_t>(-1);
    std::vector<std::vector<std::size_t>> adj_;
    std::vector<std::size_t> match_l_;
    std::vector<std::size_t> match_r_;
    std::vector<std::size_t> dist_;
};

// Left side: bars of A, then diagonal projections of B. Right side: bars of B, then
// diagonal projections of A. A perfect matching at threshold t exists iff d_B <= t.
inline std::optional<Matching> match_within(const std::vector<PersistencePair>& a,
                                            const std::vector<PersistencePair>& b, double t) {
    const std::size_t na = a.size();
    const std::size_t nb = b.size();
    BipartiteMatcher m(na + nb, nb + na);
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j)
            if (interval_inf_dist(a[i], b[j]) <= t) m.add_edge(i, j);
        if (interval_inf_dist(a[i], std::nullopt) <= t) m.add_edge(i, nb + i);
    }
    for (std::size_t j = 0; j < nb; ++j) {
        if (interval_inf_dist(b[j], std::nullopt) <= t) m.add_edge(na + j, j);
        for (std::size_t i = 0; i < na; ++i) m.add_edge(na + j, nb + i);
    }
    if (m.max_matching() != na + nb) return std::nullopt;

    Matching out;
    std::vector<char> b_used(nb, 0);
    for (std::size_t i = 0; i < na; ++i) {
        const std::size_t r = m.partner_of_left(i);
        if (r < nb) {
            out.pairs.emplace_back(i, r);
            b_used[r] = 1;
        } else {
            out.unmatched_a.push_back(i);
        }
    }
    for (std::size_t j = 0; j < nb; ++j)
        if (!b_used[j]) out.unmatched_b.push_back(j);
    return out;
}

} // namespace detail

/// Exact bottleneck distance. Essential bars are matched among themselves by sorted birth;
/// finite bars by binary search over the candidate costs with a bipartite feasibility test.
inline BottleneckResult bottleneck_matching(const PersistenceDiagram& d1, const PersistenceDiagram& d2) {
    if (d1.degree != d2.degree) throw std::invalid_argument("diagram degree mismatch");

    std::vector<PersistencePair> fa, fb;
    std::vector<std::pair<double, std::size_t>> ea, eb;
    std::vector<std::size_t> fa_idx, fb_idx;
    for (std::size_t i = 0; i < d1.pairs.size(); ++i) {
        if (d1.pairs[i].essential()) {
            ea.emplace_back(d1.pairs[i].birth, i);
        } else {
            fa.push_back(d1.pairs[i]);
            fa_idx.push_back(i);
        }
    }
    for (std::size_t j = 0; j < d2.pairs.size(); ++j) {
        if (d2.pairs[j].essential()) {
            eb.emplace_back(d2.pairs[j].birth, j);
        } else {
            fb.push_back(d2.pairs[j]);
            fb_idx.push_back(j);
        }
    }

    BottleneckResult result;
    if (ea.size() != eb.size()) {
        result.distance = infinity;
        return result;
    }
    std::sort(ea.begin(), ea.end());
    std::sort(eb.begin(), eb.end());
    double essential_cost = 0.0;
    for (std::size_t i = 0; i < ea.size(); ++i) {
        essential_cost = std::max(essential_cost, std::fabs(ea[i].first - eb[i].first));
        result.matching.pairs.emplace_back(ea[i].second, eb[i].second);
    }

    std::vector<double> candidates{0.0};
    for (const auto& p : fa) candidates.push_back(interval_inf_dist(p, std::nullopt));
    for (const auto& q : fb) candidates.push_back(interval_inf_dist(q, std::nullopt));
    for (const auto& p : fa)
        for (const auto& q : fb) candidates.push_back(interval_inf_dist(p, q));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    // the largest candidate (matching everything to the diagonal) is always feasible
    std::size_t lo = 0;
    std::size_t hi = candidates.size() - 1;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (detail::match_within(fa, fb, candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    const Matching finite = *detail::match_within(fa, fb, candidates[lo]);
    for (auto [i, j] : finite.pairs) result.matching.pairs.emplace_back(fa_idx[i], fb_idx[j]);
    for (auto i : finite.unmatched_a) result.matching.unmatched_a.push_back(fa_idx[i]);
    for (auto j : finite.unmatched_b) result.matching.unmatched_b.push_back(fb_idx[j]);
    result.distance = std::max(essential_cost, candidates[lo]);
    return result;
}

inline double bottleneck_distance(const PersistenceDiagram& d1, const PersistenceDiagram& d2) {
    return bottleneck_matching(d1, d2).distance;
}

} // namespace rcla
