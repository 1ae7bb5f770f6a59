#include <gtest/gtest.h>

#include <map>
#include <numeric>

#include <topkgraphs/walk.hpp>

#include "oracles.hpp"

namespace topk {
namespace {

void expect_permutation(const ExtendedRanking& r) {
  std::vector<std::uint32_t> sorted = r.rank;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) ASSERT_EQ(sorted[i], i + 1);
  EXPECT_EQ(r.rank[r.start], 1u);
}

TEST(WalkTest, KernelOnPath) {
  const auto k = build_kernel(oracle::path3(), 0, 0.01);
  ASSERT_EQ(k.weights.size(), 3u);
  EXPECT_DOUBLE_EQ(k.weights[0], 1.01);
  EXPECT_DOUBLE_EQ(k.weights[1], 0.01);
  EXPECT_DOUBLE_EQ(k.weights[2], 1.01);
}

TEST(WalkTest, KernelOfIsolatedStartIsEpsilon) {
  const Graph g = Graph::from_edge_list(std::vector<NodePair>{{0, 1}, {1, 2}}, 4);
  const auto k = build_kernel(g, 3, 0.25);
  for (double w : k.weights) EXPECT_DOUBLE_EQ(w, 0.25);
}

TEST(WalkTest, KernelOnTriangle) {
  const auto k = build_kernel(oracle::triangle(), 0, 0.5);
  EXPECT_DOUBLE_EQ(k.weights[0], 1.5);
  EXPECT_DOUBLE_EQ(k.weights[1], 1.0 / 3.0 + 0.5);
  EXPECT_DOUBLE_EQ(k.weights[2], 1.0 / 3.0 + 0.5);
}

TEST(WalkTest, KernelRejectsNonPositiveEpsilon) {
  EXPECT_THROW(build_kernel(oracle::path3(), 0, 0.0), std::invalid_argument);
  EXPECT_THROW(build_kernel(oracle::path3(), 0, -1.0), std::invalid_argument);
}

TEST(WalkTest, TransitionOnPathIsUniform) {
  const Graph g = oracle::path3();
  const auto p = transition_distribution(g, build_kernel(g, 0, 0.01), 1);
  ASSERT_EQ(p.size(), 2u);
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
}

TEST(WalkTest, TransitionFromStarCenterWithZeroJaccardIsUniform) {
  // Star with center 0 and leaves 1..4; anchor at leaf 1: J_1(leaf) = 1 for
  // other leaves, but from a leaf's perspective we look at center 0's move.
  // Anchor at the center: every leaf has J_0 = 0.
  std::vector<NodePair> edges{{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  const Graph g = Graph::from_edge_list(edges, 5);
  const auto p = transition_distribution(g, build_kernel(g, 0, 0.01), 0);
  for (double x : p) EXPECT_DOUBLE_EQ(x, 0.25);
}

TEST(WalkTest, TransitionOnTriangleMatchesHandRatio) {
  const Graph g = oracle::triangle();
  const auto p = transition_distribution(g, build_kernel(g, 0, 1e-6), 1);
  // Neighbors of 1 are {0, 2}; weights 1 and 1/3 in the epsilon -> 0 limit.
  EXPECT_NEAR(p[0], 0.75, 1e-5);
  EXPECT_NEAR(p[1], 0.25, 1e-5);
}

TEST(WalkTest, TransitionSumsToOne) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const Graph g = oracle::random_graph(12, 0.4, rng);
    for (NodeId s = 0; s < 12; ++s) {
      const auto k = build_kernel(g, s, 0.01);
      for (NodeId u = 0; u < 12; ++u) {
        if (g.degree(u) == 0) {
          EXPECT_THROW(transition_distribution(g, k, u), std::domain_error);
          continue;
        }
        const auto p = transition_distribution(g, k, u);
        EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-12);
        for (double x : p) EXPECT_GT(x, 0.0);
      }
    }
  }
}

TEST(WalkTest, PathWalkOfLengthTwoHasForcedRanking) {
  const Graph g = oracle::path3();
  WalkConfig cfg;
  cfg.walk_length = 2;
  const auto k = build_kernel(g, 0, cfg.epsilon);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto r = run_walk(g, k, cfg, rng);
    EXPECT_EQ(r.rank, (std::vector<std::uint32_t>{1, 2, 3}));
  }
}

TEST(WalkTest, SingleStepWalkOnEdge) {
  const Graph g = Graph::from_edge_list(std::vector<NodePair>{{0, 1}}, 4);
  WalkConfig cfg;
  cfg.walk_length = 1;
  const auto k = build_kernel(g, 0, cfg.epsilon);
  Rng rng(1);
  const auto r = run_walk(g, k, cfg, rng);
  EXPECT_EQ(r.rank[0], 1u);
  EXPECT_EQ(r.rank[1], 2u);
  EXPECT_EQ(r.num_visited, 2u);
  expect_permutation(r);
}

TEST(WalkTest, IsolatedStartGetsUniformTail) {
  const Graph g = Graph::from_edge_list({}, 3);
  WalkConfig cfg;
  cfg.walk_length = 5;
  const auto k = build_kernel(g, 0, cfg.epsilon);
  const int trials = 4000;
  int node1_second = 0;
  for (int seed = 0; seed < trials; ++seed) {
    Rng rng(static_cast<std::uint64_t>(seed));
    const auto r = run_walk(g, k, cfg, rng);
    EXPECT_EQ(r.rank[0], 1u);
    expect_permutation(r);
    node1_second += r.rank[1] == 2;
  }
  const double sigma = std::sqrt(trials * 0.25);
  EXPECT_NEAR(node1_second, trials / 2.0, 3 * sigma);
}

TEST(WalkTest, RunWalksIsDeterministic) {
  Rng graph_rng(4);
  const Graph g = oracle::random_graph(15, 0.3, graph_rng);
  WalkConfig cfg;
  cfg.num_walks = 2;
  cfg.seed = 77;
  const auto a = run_walks(g, 3, cfg);
  const auto b = run_walks(g, 3, cfg);
  ASSERT_EQ(a.size(), 2u);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].rank, b[k].rank);
  cfg.seed = 78;
  const auto c = run_walks(g, 3, cfg);
  EXPECT_NE(a[0].rank, c[0].rank);
}

TEST(WalkTest, StartRankedFirstOnCompleteGraph) {
  const Graph g = oracle::complete(4);
  WalkConfig cfg;
  cfg.walk_length = 3;
  cfg.num_walks = 30;
  for (NodeId s = 0; s < 4; ++s)
    for (const auto& r : run_walks(g, s, cfg)) {
      EXPECT_EQ(r.rank[s], 1u);
      expect_permutation(r);
    }
}

TEST(WalkTest, FirstStepFrequencyOnTriangle) {
  const Graph g = oracle::triangle();
  WalkConfig cfg;
  cfg.walk_length = 5;
  cfg.num_walks = 100;
  cfg.seed = 2024;
  const auto p = transition_distribution(g, build_kernel(g, 0, cfg.epsilon), 0);
  const auto rankings = run_walks(g, 0, cfg);
  int node1_second = 0;
  for (const auto& r : rankings) node1_second += r.rank[1] == 2;
  const double sigma = std::sqrt(100 * p[0] * (1 - p[0]));
  EXPECT_NEAR(node1_second, 100 * p[0], 3 * sigma);
}

TEST(WalkTest, RankingsArePermutationsOnRandomGraphs) {
  Rng rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t n = 2 + rng.below(25);
    const Graph g = oracle::random_graph(n, 0.2, rng);
    WalkConfig cfg;
    cfg.walk_length = 1 + rng.below(30);
    cfg.num_walks = 5;
    cfg.seed = rng.next();
    for (NodeId s = 0; s < n; ++s)
      for (const auto& r : run_walks(g, s, cfg)) expect_permutation(r);
  }
}

TEST(WalkTest, VisitedOrderFollowsFirstVisitTimes) {
  Rng graph_rng(8);
  const Graph g = oracle::random_graph(20, 0.2, graph_rng);
  const auto k = build_kernel(g, 0, 0.01);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto path = sample_trajectory(g, k, 15, rng);
    std::map<NodeId, std::size_t> first;
    for (std::size_t t = 0; t < path.size(); ++t) first.emplace(path[t], t);
    Rng tail_rng(seed + 1000);
    const auto r = ranking_from_trajectory(g.num_nodes(), path, tail_rng);
    EXPECT_EQ(r.num_visited, first.size());
    for (const auto& [u, tu] : first)
      for (const auto& [v, tv] : first) EXPECT_EQ(tu < tv, r.rank[u] < r.rank[v]);
    for (NodeId v = 0; v < g.num_nodes(); ++v)
      if (!first.count(v)) { EXPECT_GT(r.rank[v], first.size()); }
  }
}

TEST(WalkTest, ReplayedWalkMatchesRunWalk) {
  Rng graph_rng(12);
  const Graph g = oracle::random_graph(18, 0.25, graph_rng);
  WalkConfig cfg;
  cfg.walk_length = 12;
  const auto k = build_kernel(g, 5, cfg.epsilon);
  Rng a(99);
  Rng b(99);
  const auto r = run_walk(g, k, cfg, a);
  const auto path = sample_trajectory(g, k, cfg.walk_length, b);
  EXPECT_EQ(ranking_from_trajectory(g.num_nodes(), path, b).rank, r.rank);
}

// Chi-square goodness of fit of sampled steps against the kernel.
double chi_square(const Graph& g, const AnchoredKernel& k, NodeId u, std::size_t draws, std::uint64_t seed) {
  const auto p = transition_distribution(g, k, u);
  const auto nb = g.neighbors(u);
  std::vector<double> counts(nb.size(), 0.0);
  Rng rng(seed);
  for (std::size_t i = 0; i < draws; ++i) {
    const NodeId v = sample_step(g, k, u, rng);
    counts[static_cast<std::size_t>(std::find(nb.begin(), nb.end(), v) - nb.begin())] += 1.0;
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    const double expected = p[i] * static_cast<double>(draws);
    stat += (counts[i] - expected) * (counts[i] - expected) / expected;
  }
  return stat;
}

TEST(WalkTest, StepFrequenciesPassChiSquare) {
  const Graph g = Graph::from_edge_list(
      std::vector<NodePair>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}, {3, 4}}, 5);
  for (NodeId s = 0; s < 5; ++s) {
    const auto k = build_kernel(g, s, 0.01);
    for (NodeId u = 0; u < 5; ++u) {
      if (g.degree(u) < 2) continue;
      const double stat = chi_square(g, k, u, 10000, 1000 + 10 * s + u);
      EXPECT_LT(stat, oracle::chi_square_critical_001(g.degree(u) - 1)) << "s=" << s << " u=" << u;
    }
  }
}

TEST(WalkTest, HugeEpsilonIsAnUnbiasedWalk) {
  const Graph g = Graph::from_edge_list(
      std::vector<NodePair>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {2, 3}, {3, 4}}, 5);
  const auto k = build_kernel(g, 4, 1e6);
  const NodeId u = 2;  // neighbors 0, 1, 3 with very different Jaccard to 4
  const auto p = transition_distribution(g, k, u);
  for (double x : p) EXPECT_NEAR(x, 1.0 / 3.0, 1e-6);
  const std::size_t draws = 10000;
  std::vector<int> counts(3, 0);
  Rng rng(5);
  const auto nb = g.neighbors(u);
  for (std::size_t i = 0; i < draws; ++i) {
    const NodeId v = sample_step(g, k, u, rng);
    ++counts[static_cast<std::size_t>(std::find(nb.begin(), nb.end(), v) - nb.begin())];
  }
  const double sigma = std::sqrt(draws * (1.0 / 3) * (2.0 / 3));
  for (int c : counts) EXPECT_NEAR(c, draws / 3.0, 4 * sigma);
}

}  // namespace
}  // namespace topk
