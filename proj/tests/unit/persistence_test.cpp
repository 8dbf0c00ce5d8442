#include <rcla/persistence.hpp>
#include <rcla/synth.hpp>
#include <rcla/union_find.hpp>

#include "oracles/naive_persistence.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace rcla;

namespace {

PointCloud random_cloud(Rng& rng, std::size_t n, std::size_t m) {
    PointCloud c(m);
    std::vector<double> p(m);
    for (std::size_t i = 0; i < n; ++i) {
        for (auto& x : p) x = rng.uniform(0.0, 1.0);
        c.push_back(p);
    }
    return c;
}

std::vector<oracle::Bar> bars(const PersistenceDiagram& d) {
    std::vector<oracle::Bar> out;
    for (const auto& p : d.pairs) out.push_back({p.birth, p.death});
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<double>> dense(const DistanceMatrix& dm) {
    std::vector<std::vector<double>> d(dm.size(), std::vector<double>(dm.size()));
    for (std::size_t i = 0; i < dm.size(); ++i)
        for (std::size_t j = 0; j < dm.size(); ++j) d[i][j] = dm(i, j);
    return d;
}

} // namespace

TEST(DistanceMatrix, Basics) {
    const DistanceMatrix dm = distance_matrix(PointCloud{{0.0, 0.0}, {3.0, 4.0}});
    EXPECT_EQ(dm(0, 1), 5.0);
    EXPECT_EQ(dm(1, 0), 5.0);
    EXPECT_EQ(dm(0, 0), 0.0);
    EXPECT_THROW(distance_matrix(PointCloud(2)), std::invalid_argument);
    DistanceMatrix m(2);
    EXPECT_THROW(m.set(0, 1, -1.0), std::invalid_argument);
    EXPECT_THROW(m.set(1, 1, 1.0), std::invalid_argument);
}

TEST(VrPersistence, TwoPoints) {
    DistanceMatrix dm(2);
    dm.set(0, 1, 2.0);
    const auto ds = vr_persistence(dm, 1, infinity);
    ASSERT_EQ(ds.size(), 2u);
    EXPECT_EQ(bars(ds[0]), (std::vector<oracle::Bar>{{0, 1}, {0, infinity}}));
    EXPECT_TRUE(ds[1].pairs.empty());
    EXPECT_EQ(ds[0].degree, 0);
    EXPECT_EQ(ds[1].degree, 1);

    const auto dist = vr_persistence(dm, PersistenceOptions{1, infinity, FiltrationScale::dist});
    EXPECT_EQ(bars(dist[0]), (std::vector<oracle::Bar>{{0, 2}, {0, infinity}}));
}

TEST(VrPersistence, SinglePoint) {
    const auto ds = vr_persistence(PointCloud{{0.4, 0.1}});
    EXPECT_EQ(bars(ds[0]), (std::vector<oracle::Bar>{{0, infinity}}));
    EXPECT_TRUE(ds[1].pairs.empty());
}

TEST(VrPersistence, UnitSquare) {
    const auto ds = vr_persistence(PointCloud{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}});
    ASSERT_EQ(ds[1].pairs.size(), 1u);
    EXPECT_DOUBLE_EQ(ds[1].pairs[0].birth, 0.5);
    EXPECT_DOUBLE_EQ(ds[1].pairs[0].death, std::sqrt(2.0) / 2.0);
    EXPECT_EQ(ds[0].pairs.size(), 4u);
    EXPECT_EQ(ds[0].essential_count(), 1u);
}

TEST(VrPersistence, Errors) {
    EXPECT_THROW(vr_persistence(DistanceMatrix(0)), std::invalid_argument);
    DistanceMatrix dm(2);
    EXPECT_THROW(vr_persistence(dm, 2, infinity), std::invalid_argument);
    EXPECT_THROW(vr_persistence(dm, 1, 0.0), std::invalid_argument);
}

TEST(VrPersistence, MaxDegreeZeroOmitsH1) {
    Rng rng(40);
    const auto ds = vr_persistence(distance_matrix(random_cloud(rng, 30, 2)), 0, infinity);
    ASSERT_EQ(ds.size(), 1u);
    EXPECT_EQ(ds[0].pairs.size(), 30u);
}

TEST(VrPersistence, MatchesNaiveBoundaryReduction) {
    Rng rng(41);
    for (int t = 0; t < 150; ++t) {
        const std::size_t n = 1 + rng.index(12);
        const std::size_t m = 1 + rng.index(3);
        PointCloud c(m);
        std::vector<double> p(m);
        for (std::size_t i = 0; i < n; ++i) {
            for (auto& x : p) x = t % 3 == 0 ? static_cast<double>(rng.index(3)) : rng.uniform(0.0, 1.0);
            c.push_back(p);
        }
        const DistanceMatrix dm = distance_matrix(c);
        for (auto scale : {FiltrationScale::eps, FiltrationScale::dist}) {
            const auto got = vr_persistence(dm, PersistenceOptions{1, infinity, scale});
            const auto want = oracle::naive_rips_bars(dense(dm), scale_factor(scale));
            EXPECT_EQ(bars(got[0]), want[0]) << "trial " << t;
            EXPECT_EQ(bars(got[1]), want[1]) << "trial " << t;
        }
    }
}

TEST(VrPersistence, H0DeathsAreHalvedMinimumSpanningTreeEdges) {
    Rng rng(42);
    for (int t = 0; t < 20; ++t) {
        const PointCloud c = random_cloud(rng, 40, 2);
        const DistanceMatrix dm = distance_matrix(c);
        const std::size_t n = c.size();
        std::vector<std::tuple<double, std::size_t, std::size_t>> edges;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(dm(i, j), i, j);
        std::sort(edges.begin(), edges.end());
        UnionFind uf(n);
        std::vector<double> mst;
        for (auto [w, i, j] : edges)
            if (uf.unite(i, j)) mst.push_back(w / 2.0);
        std::vector<double> deaths;
        const auto ds = vr_persistence(dm, 0, infinity);
        for (const auto& p : ds[0].pairs)
            if (!p.essential()) deaths.push_back(p.death);
        std::sort(deaths.begin(), deaths.end());
        EXPECT_EQ(deaths, mst);
    }
}

TEST(VrPersistence, InvariantUnderRelabelingAndScaling) {
    Rng rng(43);
    for (int t = 0; t < 15; ++t) {
        const PointCloud c = random_cloud(rng, 25, 2);
        std::vector<std::size_t> perm(c.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng.engine());
        PointCloud shuffled(2), scaled(2);
        for (auto i : perm) shuffled.push_back(c[i]);
        for (std::size_t i = 0; i < c.size(); ++i) {
            const double p[2] = {4.0 * c[i][0], 4.0 * c[i][1]};
            scaled.push_back(p);
        }
        const auto a = vr_persistence(c), b = vr_persistence(shuffled), s = vr_persistence(scaled);
        for (int d = 0; d <= 1; ++d) {
            EXPECT_EQ(bars(a[d]), bars(b[d]));
            auto want = bars(a[d]);
            auto got = bars(s[d]);
            ASSERT_EQ(got.size(), want.size());
            for (std::size_t i = 0; i < got.size(); ++i) {
                EXPECT_NEAR(got[i].birth, 4.0 * want[i].birth, 1e-12);
                if (std::isinf(want[i].death))
                    EXPECT_TRUE(std::isinf(got[i].death));
                else
                    EXPECT_NEAR(got[i].death, 4.0 * want[i].death, 1e-12);
            }
        }
    }
}

TEST(VrPersistence, MaxScaleTruncatesToEssentialBars) {
    const PointCloud square{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    const auto cut = vr_persistence(distance_matrix(square), 1, 0.6);
    ASSERT_EQ(cut[1].pairs.size(), 1u);
    EXPECT_DOUBLE_EQ(cut[1].pairs[0].birth, 0.5);
    EXPECT_TRUE(cut[1].pairs[0].essential());
    EXPECT_EQ(bars(cut[0]), (std::vector<oracle::Bar>{{0, 0.5}, {0, 0.5}, {0, 0.5}, {0, infinity}}));

    const auto tiny = vr_persistence(distance_matrix(square), 1, 0.1);
    EXPECT_EQ(tiny[0].essential_count(), 4u);
    EXPECT_TRUE(tiny[1].pairs.empty());
}

TEST(VrPersistence, PairsAreWellFormed) {
    Rng rng(44);
    const auto ds = vr_persistence(random_cloud(rng, 120, 2));
    EXPECT_EQ(ds[0].essential_count(), 1u);
    EXPECT_EQ(ds[0].pairs.size(), 120u);
    for (const auto& d : ds)
        for (const auto& p : d.pairs) EXPECT_LT(p.birth, p.death);
    for (const auto& p : ds[0].pairs) EXPECT_EQ(p.birth, 0.0);
}

TEST(VrPersistence, LargeCircleHasOneDominantLoop) {
    // enough points that the reduction switches to its bitset cocycle mode
    Rng rng(45);
    const Circle circle{{0.5, 0.5}, 0.4};
    const auto ds = vr_persistence(sample_circle(700, circle, rng));
    std::vector<double> life;
    for (const auto& p : ds[1].pairs) life.push_back(p.persistence());
    std::sort(life.rbegin(), life.rend());
    ASSERT_FALSE(life.empty());
    EXPECT_GT(life[0], circle.radius / 2.0);
    if (life.size() > 1) EXPECT_LT(life[1], 0.02);
    const double birth = std::max_element(ds[1].pairs.begin(), ds[1].pairs.end(), [](auto& a, auto& b) {
                             return a.persistence() < b.persistence();
                         })->birth;
    EXPECT_LT(birth, 0.03);
}

TEST(VrPersistence, NoisyCircleAgreesWithNaiveOracle) {
    Rng rng(46);
    PointCloud c = sample_circle(40, Circle{}, rng);
    c.append(uniform_in_box(10, Box::unit(2), rng));
    const DistanceMatrix dm = distance_matrix(c);
    const auto got = vr_persistence(dm);
    const auto want = oracle::naive_rips_bars(dense(dm), 0.5);
    EXPECT_EQ(bars(got[0]), want[0]);
    EXPECT_EQ(bars(got[1]), want[1]);
}
