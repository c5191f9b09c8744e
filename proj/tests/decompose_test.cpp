#include <gtest/gtest.h>

#include <cmath>

#include "breach/decompose.hpp"
#include "test_support.hpp"

namespace breach {
namespace {

using testing::line_dataset;

std::vector<Index> all_indices(const Dataset& ds) {
  std::vector<Index> v(ds.size());
  std::iota(v.begin(), v.end(), Index{0});
  return v;
}

TEST(ComputeAlpha, FourColors) {
  auto p = compute_alpha(4);
  EXPECT_NEAR(p.alpha, std::sqrt(std::log(4.0)) / 4.0, 1e-15);
  EXPECT_NEAR(p.alpha, 0.2943, 1e-4);
  EXPECT_EQ(p.delta1, 1u);
  EXPECT_EQ(p.delta2, 1u);
}

TEST(ComputeAlpha, TwoColors) {
  auto p = compute_alpha(2);
  EXPECT_NEAR(p.alpha, 0.4163, 1e-4);
  EXPECT_EQ(p.delta1, 1u);
  EXPECT_EQ(p.delta2, 1u);
}

TEST(ComputeAlpha, HundredColors) {
  auto p = compute_alpha(100);
  EXPECT_NEAR(p.alpha, 0.02146, 1e-5);
  EXPECT_EQ(p.delta1, 11u);
  EXPECT_EQ(p.delta2, 23u);
}

TEST(ComputeAlpha, RadiiOrderedForAllM) {
  for (std::size_t m = 2; m < 5000; ++m) {
    auto p = compute_alpha(m);
    ASSERT_GE(p.delta2, 1u);
    ASSERT_LE(p.delta1, p.delta2);
    ASSERT_LE(2.0 * p.delta2 * p.alpha, 1.0);
  }
  EXPECT_THROW(compute_alpha(1), InvalidInput);
}

TEST(ThresholdGraph, BelowMinimumDistanceIsEdgeless) {
  auto ds = line_dataset({0, 1, 3}, {0, 0, 0}, 1);
  auto all = all_indices(ds);
  EXPECT_EQ(build_threshold_graph(ds, all, 1.0).num_edges(), 0u);
}

TEST(ThresholdGraph, AboveMaximumDistanceIsComplete) {
  auto ds = line_dataset({0, 1, 3}, {0, 0, 0}, 1);
  auto all = all_indices(ds);
  EXPECT_EQ(build_threshold_graph(ds, all, 3.5).num_edges(), 3u);
}

TEST(ThresholdGraph, StrictThreshold) {
  auto ds = line_dataset({0, 1, 3}, {0, 0, 0}, 1);
  auto all = all_indices(ds);
  auto g = build_threshold_graph(ds, all, 1.5);
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_EQ(build_threshold_graph(ds, all, 2.0).num_edges(), 1u);  // d = 2 is not < 2
}

TEST(Ckr, EdgelessGraphGivesSingletons) {
  auto ds = line_dataset({0, 10, 20, 30}, {0, 1, 0, 1}, 2);
  auto all = all_indices(ds);
  Rng rng(1);
  auto dec = ckr_decompose(ds, all, 1.0, 2, rng);
  EXPECT_TRUE(dec.guards.empty());
  std::size_t nonempty = 0;
  for (const auto& c : dec.clusters) {
    EXPECT_LE(c.size(), 1u);
    nonempty += c.size();
  }
  EXPECT_EQ(nonempty, 4u);
  // cluster j is exactly the j-th center
  for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(dec.clusters[j], std::vector<Index>{dec.permutation[j]});
}

TEST(Ckr, LargeRadiusSwallowsComponent) {
  auto ds = line_dataset({0, 1, 2, 3}, {0, 0, 0, 0}, 1);
  auto all = all_indices(ds);
  auto g = build_threshold_graph(ds, all, 1.5);  // path, diameter 3
  std::vector<std::uint32_t> order{2, 0, 1, 3};
  auto dec = ckr_partition(g, order, 4);
  EXPECT_EQ(dec.clusters[0], (std::vector<Index>{0, 1, 2, 3}));
  for (std::size_t j = 1; j < 4; ++j) EXPECT_TRUE(dec.clusters[j].empty());
  EXPECT_TRUE(dec.guards.empty());
}

TEST(Ckr, PathHandTrace) {
  // a=0, b=1, c=2 on a line, theta 1.5: path a-b-c; centers a, c, b; R = 1
  auto ds = line_dataset({0, 1, 2}, {0, 1, 0}, 2);
  auto all = all_indices(ds);
  auto g = build_threshold_graph(ds, all, 1.5);
  std::vector<std::uint32_t> order{0, 2, 1};
  auto dec = ckr_partition(g, order, 1);
  EXPECT_EQ(dec.clusters[0], (std::vector<Index>{0}));
  EXPECT_EQ(dec.clusters[1], (std::vector<Index>{2}));
  EXPECT_TRUE(dec.clusters[2].empty());
  EXPECT_EQ(dec.guards, (std::vector<Index>{1}));
}

TEST(Ckr, MatchesTextbookPartition) {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t n = 2 + rng.below(40);
    auto ds = testing::random_dataset(rng, n, 3);
    auto all = all_indices(ds);
    auto g = build_threshold_graph(ds, all, rng.uniform(0.5, 4.0));
    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    rng.shuffle(std::span<std::uint32_t>(order));
    std::size_t radius = 1 + rng.below(5);
    auto fast = ckr_partition(g, order, radius);
    auto slow = testing::naive_ckr(g, order, radius);
    ASSERT_EQ(fast.clusters, slow.clusters);
    ASSERT_EQ(fast.guards, slow.guards);
  }
}

TEST(Ckr, RadiusWithinBoundsAndPermutationComplete) {
  Rng data_rng(4);
  auto ds = testing::random_dataset(data_rng, 60, 100);
  auto all = all_indices(ds);
  auto params = compute_alpha(100);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    auto dec = ckr_decompose(ds, all, 30.0, 100, rng);
    EXPECT_GE(dec.radius, params.delta1);
    EXPECT_LE(dec.radius, params.delta2);
    auto perm = dec.permutation;
    std::sort(perm.begin(), perm.end());
    EXPECT_EQ(perm, all);
  }
}

TEST(Ckr, SameSeedSameDecomposition) {
  Rng data_rng(9);
  auto ds = testing::random_dataset(data_rng, 50, 5);
  auto all = all_indices(ds);
  Rng a(77), b(77);
  auto da = ckr_decompose(ds, all, 4.0, 5, a);
  auto db = ckr_decompose(ds, all, 4.0, 5, b);
  EXPECT_EQ(da.clusters, db.clusters);
  EXPECT_EQ(da.permutation, db.permutation);
  EXPECT_EQ(da.radius, db.radius);
}

TEST(SeparationCheck, DetectsCloseClusters) {
  auto ds = line_dataset({0.0, 0.05, 5.0}, {0, 1, 0}, 2);
  double gamma_alpha = 0.1;
  Decomposition bad;
  bad.clusters = {{0}, {1}, {2}};
  EXPECT_FALSE(cluster_separation_check(ds, bad, gamma_alpha));
  Decomposition good;
  good.clusters = {{0, 1}, {2}};
  EXPECT_TRUE(cluster_separation_check(ds, good, gamma_alpha));
}

TEST(SeparationCheck, SingletonsFromEdgelessGraph) {
  auto ds = line_dataset({0, 1, 2, 3}, {0, 1, 0, 1}, 2);
  auto all = all_indices(ds);
  Rng rng(3);
  double gamma = 0.99 / compute_alpha(2).alpha;  // threshold just below 1
  auto dec = ckr_decompose(ds, all, gamma, 2, rng);
  EXPECT_TRUE(dec.guards.empty());
  EXPECT_TRUE(cluster_separation_check(ds, dec, gamma * compute_alpha(2).alpha));
}

TEST(Ckr, PartitionSeparationAndDiameter) {
  Rng rng(55);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + rng.below(80);
    std::size_t m = 2 + rng.below(30);
    auto ds = testing::random_dataset(rng, n, m);
    auto all = all_indices(ds);
    double gamma = rng.uniform(0.5, 40.0);
    auto dec = ckr_decompose(ds, all, gamma, m, rng);
    double ga = gamma * compute_alpha(m).alpha;

    std::vector<Index> cover = dec.guards;
    for (const auto& c : dec.clusters) cover.insert(cover.end(), c.begin(), c.end());
    std::sort(cover.begin(), cover.end());
    ASSERT_EQ(cover, all);

    ASSERT_TRUE(cluster_separation_check(ds, dec, ga));
    for (const auto& c : dec.clusters)
      for (std::size_t a = 0; a < c.size(); ++a)
        for (std::size_t b = a + 1; b < c.size(); ++b) ASSERT_LT(ds.distance(c[a], c[b]), gamma);
  }
}

}  // namespace
}  // namespace breach
