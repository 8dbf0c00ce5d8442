#include <rcla/bottleneck.hpp>
#include <rcla/synth.hpp>

#include "oracles/exhaustive_bottleneck.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <optional>

using namespace rcla;

namespace {

PersistenceDiagram diagram(std::vector<PersistencePair> pairs, int degree = 1) { return {degree, std::move(pairs)}; }

PersistenceDiagram random_diagram(Rng& rng, std::size_t max_bars, bool quantized) {
    PersistenceDiagram d{1, {}};
    const std::size_t n = rng.index(max_bars + 1);
    for (std::size_t i = 0; i < n; ++i) {
        double b = rng.uniform(0.0, 1.0), e = b + rng.uniform(0.0, 1.0);
        if (quantized) {
            b = static_cast<double>(rng.index(4)) / 4.0;
            e = b + static_cast<double>(1 + rng.index(4)) / 4.0;
        }
        d.pairs.push_back({b, e});
    }
    return d;
}

std::vector<oracle::Point> points(const PersistenceDiagram& d) {
    std::vector<oracle::Point> out;
    for (const auto& p : d.pairs) out.push_back({p.birth, p.death});
    return out;
}

} // namespace

TEST(IntervalInfDist, Examples) {
    EXPECT_EQ(interval_inf_dist({0, 2}, PersistencePair{0, 2}), 0.0);
    EXPECT_EQ(interval_inf_dist({0, 2}, std::nullopt), 1.0);
    EXPECT_EQ(interval_inf_dist({0, 1}, PersistencePair{0.5, 2}), 1.0);
    EXPECT_EQ(interval_inf_dist({0, infinity}, PersistencePair{0.25, infinity}), 0.25);
    EXPECT_TRUE(std::isinf(interval_inf_dist({0, infinity}, PersistencePair{0, 1})));
    EXPECT_TRUE(std::isinf(interval_inf_dist({0, infinity}, std::nullopt)));
}

TEST(BottleneckDistance, Examples) {
    const PersistenceDiagram d = diagram({{0, 2}, {0.3, 0.7}, {1, 4}});
    EXPECT_EQ(bottleneck_distance(d, d), 0.0);
    EXPECT_EQ(bottleneck_distance(diagram({{0, 2}}), diagram({})), 1.0);
    EXPECT_NEAR(bottleneck_distance(diagram({{0, 2}, {0, 1}}), diagram({{0.1, 1.9}})), 0.5, 1e-15);
    EXPECT_EQ(bottleneck_distance(diagram({}), diagram({})), 0.0);
}

TEST(BottleneckDistance, EssentialBars) {
    EXPECT_EQ(bottleneck_distance(diagram({{0, infinity}}, 0), diagram({{0, infinity}}, 0)), 0.0);
    EXPECT_EQ(bottleneck_distance(diagram({{0, infinity}, {0, 1}}, 0), diagram({{0.2, infinity}}, 0)), 0.5);
    EXPECT_TRUE(std::isinf(bottleneck_distance(diagram({{0, infinity}}, 0), diagram({{0, 1}}, 0))));
    EXPECT_TRUE(std::isinf(
        bottleneck_distance(diagram({{0, infinity}, {0, infinity}}, 0), diagram({{0, infinity}}, 0))));
}

TEST(BottleneckDistance, DegreeMismatchThrows) {
    EXPECT_THROW(bottleneck_distance(diagram({}, 0), diagram({}, 1)), std::invalid_argument);
}

TEST(BottleneckDistance, MatchesExhaustiveEnumeration) {
    Rng rng(50);
    for (int t = 0; t < 300; ++t) {
        const bool quantized = t % 3 == 0;
        const PersistenceDiagram a = random_diagram(rng, 6, quantized), b = random_diagram(rng, 6, quantized);
        EXPECT_NEAR(bottleneck_distance(a, b), oracle::exhaustive_bottleneck(points(a), points(b)), 1e-12)
            << "trial " << t;
    }
}

TEST(BottleneckDistance, MetricProperties) {
    Rng rng(51);
    for (int t = 0; t < 200; ++t) {
        const PersistenceDiagram a = random_diagram(rng, 15, t % 2 == 0);
        const PersistenceDiagram b = random_diagram(rng, 15, t % 2 == 0);
        const PersistenceDiagram c = random_diagram(rng, 15, t % 2 == 0);
        const double ab = bottleneck_distance(a, b), ba = bottleneck_distance(b, a);
        EXPECT_EQ(ab, ba);
        EXPECT_GE(ab, 0.0);
        EXPECT_LE(ab, bottleneck_distance(a, c) + bottleneck_distance(c, b) + 1e-12);
        PersistenceDiagram shuffled = a;
        std::shuffle(shuffled.pairs.begin(), shuffled.pairs.end(), rng.engine());
        EXPECT_EQ(bottleneck_distance(shuffled, b), ab);
    }
}

TEST(BottleneckDistance, DiagonalPointsAndSmallPerturbations) {
    Rng rng(52);
    for (int t = 0; t < 100; ++t) {
        const PersistenceDiagram a = random_diagram(rng, 20, false);
        PersistenceDiagram with_diag = a;
        with_diag.pairs.push_back({0.4, 0.4});
        EXPECT_EQ(bottleneck_distance(a, with_diag), 0.0);

        const double eps = rng.uniform(0.0, 0.01);
        PersistenceDiagram moved = a;
        for (auto& p : moved.pairs) {
            p.birth += rng.uniform(-eps, eps);
            p.death += rng.uniform(-eps, eps);
        }
        EXPECT_LE(bottleneck_distance(a, moved), eps + 1e-15);
    }
}

TEST(BottleneckMatching, WitnessAchievesDistance) {
    Rng rng(53);
    for (int t = 0; t < 100; ++t) {
        const PersistenceDiagram a = random_diagram(rng, 12, t % 2 == 0), b = random_diagram(rng, 12, t % 2 == 0);
        const BottleneckResult r = bottleneck_matching(a, b);
        EXPECT_EQ(r.distance, bottleneck_distance(a, b));
        std::vector<int> seen_a(a.pairs.size()), seen_b(b.pairs.size());
        double worst = 0.0;
        for (auto [i, j] : r.matching.pairs) {
            ++seen_a[i];
            ++seen_b[j];
            worst = std::max(worst, interval_inf_dist(a.pairs[i], b.pairs[j]));
        }
        for (auto i : r.matching.unmatched_a) {
            ++seen_a[i];
            worst = std::max(worst, interval_inf_dist(a.pairs[i], std::nullopt));
        }
        for (auto j : r.matching.unmatched_b) {
            ++seen_b[j];
            worst = std::max(worst, interval_inf_dist(b.pairs[j], std::nullopt));
        }
        for (int s : seen_a) EXPECT_EQ(s, 1);
        for (int s : seen_b) EXPECT_EQ(s, 1);
        EXPECT_NEAR(worst, r.distance, 1e-15);
    }
}
