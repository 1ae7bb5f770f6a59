#include <gtest/gtest.h>

#include <topkgraphs/graph.hpp>

#include "oracles.hpp"

namespace topk {
namespace {

TEST(GraphTest, NeighborsOfPath) {
  const Graph g = oracle::path3();
  EXPECT_EQ(std::vector<NodeId>(g.neighbors(1).begin(), g.neighbors(1).end()), (std::vector<NodeId>{0, 2}));
  EXPECT_EQ(std::vector<NodeId>(g.neighbors(0).begin(), g.neighbors(0).end()), (std::vector<NodeId>{1}));
}

TEST(GraphTest, IsolatedNodeHasNoNeighbors) {
  const Graph g = Graph::from_edge_list(std::vector<NodePair>{{0, 1}}, 3);
  EXPECT_TRUE(neighbors(g, 2).empty());
}

TEST(GraphTest, OutOfRangeNodeIsRejected) {
  const Graph g = oracle::path3();
  EXPECT_THROW(g.neighbors(3), std::invalid_argument);
  EXPECT_THROW(jaccard(g, 0, 7), std::invalid_argument);
}

TEST(GraphTest, FromEdgeListDedupsAndDropsSelfLoops) {
  const std::vector<NodePair> edges{{0, 1}, {1, 0}, {1, 1}, {1, 2}};
  const Graph g = Graph::from_edge_list(edges, 3);
  EXPECT_EQ(g, oracle::path3());
  EXPECT_EQ(g.num_edges(), 2u);
}

TEST(GraphTest, FromEdgeListEmptyAndSingleEdge) {
  const Graph empty = Graph::from_edge_list({}, 3);
  EXPECT_EQ(empty.num_nodes(), 3u);
  EXPECT_EQ(empty.num_edges(), 0u);

  const Graph one = Graph::from_edge_list(std::vector<NodePair>{{0, 1}}, 2);
  EXPECT_EQ(one.degree(0), 1u);
  EXPECT_EQ(one.degree(1), 1u);
}

TEST(GraphTest, FromEdgeListRejectsOutOfRangeIds) {
  EXPECT_THROW(Graph::from_edge_list(std::vector<NodePair>{{0, 3}}, 3), std::invalid_argument);
}

TEST(GraphTest, JaccardExamples) {
  const Graph path = oracle::path3();
  EXPECT_DOUBLE_EQ(jaccard(path, 0, 2), oracle::set_jaccard(path, 0, 2));
  EXPECT_DOUBLE_EQ(jaccard(path, 0, 2), 1.0);
  EXPECT_DOUBLE_EQ(jaccard(path, 0, 1), 0.0);
  const Graph tri = oracle::triangle();
  EXPECT_DOUBLE_EQ(jaccard(tri, 0, 1), oracle::set_jaccard(tri, 0, 1));
  EXPECT_DOUBLE_EQ(jaccard(tri, 0, 1), 1.0 / 3.0);
}

TEST(GraphTest, DiceExamples) {
  const Graph tri = oracle::triangle();
  EXPECT_DOUBLE_EQ(dice(tri, 0, 1), oracle::set_dice(tri, 0, 1));
  EXPECT_DOUBLE_EQ(dice(tri, 0, 1), 0.5);
  const Graph path = oracle::path3();
  EXPECT_DOUBLE_EQ(dice(path, 0, 2), 1.0);  // identical neighborhoods
  EXPECT_DOUBLE_EQ(dice(path, 0, 1), 0.0);  // disjoint
}

TEST(GraphTest, SelfSimilarityConvention) {
  const Graph g = Graph::from_edge_list(std::vector<NodePair>{{0, 1}}, 3);
  EXPECT_DOUBLE_EQ(jaccard(g, 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(jaccard(g, 2, 2), 0.0);
  EXPECT_DOUBLE_EQ(dice(g, 2, 2), 0.0);
}

TEST(GraphTest, OverlapPropertiesOnRandomGraphs) {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + rng.below(11);
    const Graph g = oracle::random_graph(n, 0.1 + 0.6 * rng.uniform(), rng);
    const auto row_cache = [&](NodeId s) { return jaccard_row(g, s); };
    for (NodeId s = 0; s < n; ++s) {
      const auto row = row_cache(s);
      for (NodeId v = 0; v < n; ++v) {
        const double j = jaccard(g, s, v);
        EXPECT_DOUBLE_EQ(j, oracle::set_jaccard(g, s, v));
        EXPECT_DOUBLE_EQ(j, jaccard(g, v, s));
        EXPECT_DOUBLE_EQ(row[v], j);
        EXPECT_DOUBLE_EQ(dice(g, s, v), dice(g, v, s));
        EXPECT_GE(dice(g, s, v), j);
      }
      EXPECT_DOUBLE_EQ(jaccard(g, s, s), g.degree(s) > 0 ? 1.0 : 0.0);
    }
  }
}

TEST(GraphTest, CanonicalInvariantsAndEdgeListRoundTrip) {
  Rng rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng.below(20);
    const Graph g = oracle::random_graph(n, 0.3, rng);
    std::size_t degree_sum = 0;
    for (NodeId v = 0; v < n; ++v) {
      const auto nb = g.neighbors(v);
      degree_sum += nb.size();
      for (std::size_t i = 0; i < nb.size(); ++i) {
        EXPECT_NE(nb[i], v);
        if (i > 0) { EXPECT_LT(nb[i - 1], nb[i]); }
        EXPECT_TRUE(g.has_edge(nb[i], v));
      }
    }
    EXPECT_EQ(g.num_edges() * 2, degree_sum);
    const auto edges = g.edge_list();
    EXPECT_EQ(Graph::from_edge_list(edges, n), g);
  }
}

TEST(GraphTest, LargestComponentTieGoesToSmallestId) {
  // Two triangles {0,1,2}, {3,4,5} and isolated node 6.
  const Graph g = Graph::from_edge_list(
      std::vector<NodePair>{{3, 4}, {4, 5}, {3, 5}, {0, 1}, {1, 2}, {0, 2}}, 7);
  const auto lcc = largest_connected_component(g);
  EXPECT_EQ(lcc.original_ids, (std::vector<NodeId>{0, 1, 2}));
  EXPECT_EQ(lcc.original_ids, oracle::bfs_reach(g, 0));
  EXPECT_EQ(lcc.graph.num_edges(), 3u);
}

TEST(GraphTest, LargestComponentOfConnectedGraphIsIdentity) {
  const Graph g = oracle::cycle(6);
  const auto lcc = largest_connected_component(g);
  EXPECT_EQ(lcc.graph, g);
}

TEST(GraphTest, LargestComponentDropsIsolatedNode) {
  const Graph g = Graph::from_edge_list(std::vector<NodePair>{{0, 1}, {1, 2}}, 4);
  const auto lcc = largest_connected_component(g);
  EXPECT_EQ(lcc.graph.num_nodes(), 3u);
  EXPECT_EQ(lcc.graph, oracle::path3());
}

TEST(GraphTest, LargestComponentOfEmptyGraphThrows) {
  EXPECT_THROW(largest_connected_component(Graph{}), std::invalid_argument);
}

TEST(GraphTest, ComponentsAgreeWithBfs) {
  Rng rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const Graph g = oracle::random_graph(15, 0.12, rng);
    const auto comp = connected_components(g);
    for (NodeId v = 0; v < 15; ++v) {
      for (NodeId w : oracle::bfs_reach(g, v)) EXPECT_EQ(comp[v], comp[w]);
    }
    EXPECT_EQ(is_connected(g), oracle::connected(g));
  }
}

}  // namespace
}  // namespace topk
