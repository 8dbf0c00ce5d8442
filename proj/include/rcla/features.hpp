#pragma once

#include <rcla/persistence.hpp>
#include <rcla/stats.hpp>

#include <algorithm>
#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rcla {

struct FeatureLabel {
    int degree = 0;
    std::string statistic;

    std::string name() const { return "h" + std::to_string(degree) + "_" + statistic; }
    friend bool operator==(const FeatureLabel&, const FeatureLabel&) = default;
};

struct FeatureVector {
    std::vector<double> values;
    std::vector<FeatureLabel> schema;
};

inline constexpr std::array<std::string_view, 3> feature_quantities{"birth", "death", "lifetime"};
inline constexpr std::array<std::string_view, 7> feature_statistics{"mean", "sd", "min", "max", "q25", "q50", "q75"};

/// Statistic names of one degree block, in output order (23 entries).
inline std::vector<std::string> per_degree_statistics() {
    std::vector<std::string> out;
    for (auto q : feature_quantities)
        for (auto s : feature_statistics) out.push_back(std::string(q) + "_" + std::string(s));
    out.emplace_back("count");
    out.emplace_back("total_persistence");
    return out;
}

namespace detail {

inline std::array<double, 7> summary(std::vector<double> v) {
    if (v.empty()) return {};
    std::sort(v.begin(), v.end());
    return {mean_of(v), sample_sd(v), v.front(), v.back(), quantile_sorted(v, 0.25), quantile_sorted(v, 0.50),
            quantile_sorted(v, 0.75)};
}

} // namespace detail

/// Descriptive statistics of birth, death and lifetime for degrees 0 and 1.
/// Infinite deaths are replaced by `cap`; an empty diagram contributes zeros.
inline FeatureVector diagram_features(const std::vector<PersistenceDiagram>& diagrams, double cap) {
    if (!(cap > 0.0)) throw std::invalid_argument("cap must be positive");
    FeatureVector out;
    const auto names = per_degree_statistics();
    for (int degree = 0; degree <= 1; ++degree) {
        std::vector<double> b, d, l;
        for (const auto& dg : diagrams) {
            if (dg.degree != degree) continue;
            for (const auto& p : dg.pairs) {
                const double death = p.essential() ? std::max(cap, p.birth) : p.death;
                b.push_back(p.birth);
                d.push_back(death);
                l.push_back(death - p.birth);
            }
        }
        std::vector<double> block;
        for (const auto* v : {&b, &d, &l}) {
            const auto s = detail::summary(*v);
            block.insert(block.end(), s.begin(), s.end());
        }
        block.push_back(static_cast<double>(b.size()));
        double total = 0.0;
        for (double x : l) total += x;
        block.push_back(total);

        for (std::size_t i = 0; i < names.size(); ++i) {
            out.values.push_back(block[i]);
            out.schema.push_back({degree, names[i]});
        }
    }
    return out;
}

/// Removes a per-degree statistic (e.g. "total_persistence") from both degree blocks.
inline FeatureVector drop_statistic(const FeatureVector& fv, std::string_view statistic) {
    const auto names = per_degree_statistics();
    if (std::find(names.begin(), names.end(), statistic) == names.end())
        throw std::invalid_argument("unknown statistic: " + std::string(statistic));
    FeatureVector out;
    for (std::size_t i = 0; i < fv.values.size(); ++i) {
        if (fv.schema[i].statistic == statistic) continue;
        out.values.push_back(fv.values[i]);
        out.schema.push_back(fv.schema[i]);
    }
    return out;
}

} // namespace rcla
