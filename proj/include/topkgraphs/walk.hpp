#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"
#include "rng.hpp"

namespace topk {

struct WalkConfig {
  std::size_t walk_length = 20;  // T, steps per walk
  std::size_t num_walks = 50;    // K, walks per start node
  double epsilon = 0.01;
  std::uint64_t seed = 0;

  void validate() const {
    if (walk_length < 1) throw std::invalid_argument("walk_length must be >= 1");
    if (num_walks < 1) throw std::invalid_argument("num_walks must be >= 1");
    if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be > 0");
  }
};

// Transition weights anchored at `start`: weights[v] = J_start(v) + epsilon.
// Fixed for every walk from `start`.
struct AnchoredKernel {
  NodeId start = 0;
  std::vector<double> weights;
};

inline AnchoredKernel build_kernel(const Graph& g, NodeId s, double epsilon) {
  g.check_node(s);
  if (!(epsilon > 0.0)) throw std::invalid_argument("build_kernel: epsilon must be > 0");
  AnchoredKernel k{s, jaccard_row(g, s)};
  for (double& w : k.weights) w += epsilon;
  return k;
}

// Probabilities of moving from u to each of neighbors(u), in neighbor order.
inline std::vector<double> transition_distribution(const Graph& g, const AnchoredKernel& k,
                                                   NodeId u) {
  const auto nb = g.neighbors(u);
  if (nb.empty()) {
    throw std::domain_error("transition_distribution: node " + std::to_string(u) +
                            " is a dead end");
  }
  std::vector<double> p;
  p.reserve(nb.size());
  double total = 0.0;
  for (NodeId v : nb) {
    p.push_back(k.weights[v]);
    total += k.weights[v];
  }
  for (double& x : p) x /= total;
  return p;
}

// Draws the successor of u. Precondition: u has at least one neighbor.
inline NodeId sample_step(const Graph& g, const AnchoredKernel& k, NodeId u, Rng& rng) {
  const auto nb = g.neighbors(u);
  double total = 0.0;
  for (NodeId v : nb) total += k.weights[v];
  const double target = rng.uniform() * total;
  double acc = 0.0;
  for (NodeId v : nb) {
    acc += k.weights[v];
    if (target < acc) return v;
  }
  return nb.back();  // rounding guard
}

// X_0 = start, X_1, ..., X_T. Shorter if the walk hits a dead end.
inline std::vector<NodeId> sample_trajectory(const Graph& g, const AnchoredKernel& k,
                                             std::size_t walk_length, Rng& rng) {
  std::vector<NodeId> path;
  path.reserve(walk_length + 1);
  path.push_back(k.start);
  for (std::size_t t = 0; t < walk_length; ++t) {
    const NodeId u = path.back();
    if (g.degree(u) == 0) break;
    path.push_back(sample_step(g, k, u, rng));
  }
  return path;
}

// Total ranking over all nodes: rank[v] in 1..n, 1 = earliest first visit.
struct ExtendedRanking {
  NodeId start = 0;
  std::vector<std::uint32_t> rank;
  std::size_t num_visited = 0;
};

// Visited nodes ranked by first-visit time; the unvisited ones follow in a
// uniformly random order drawn from `rng`.
inline ExtendedRanking ranking_from_trajectory(std::size_t n, const std::vector<NodeId>& path,
                                               Rng& rng) {
  ExtendedRanking r;
  r.start = path.front();
  r.rank.assign(n, 0);
  std::uint32_t next = 1;
  for (NodeId v : path) {
    if (r.rank[v] == 0) r.rank[v] = next++;
  }
  r.num_visited = next - 1;

  std::vector<NodeId> tail;
  tail.reserve(n - r.num_visited);
  for (NodeId v = 0; v < n; ++v) {
    if (r.rank[v] == 0) tail.push_back(v);
  }
  rng.shuffle(std::span<NodeId>(tail));
  for (NodeId v : tail) r.rank[v] = next++;
  return r;
}

// One anchored walk. The trajectory is sampled first, then the tail
// permutation, both from `rng`.
inline ExtendedRanking run_walk(const Graph& g, const AnchoredKernel& k, const WalkConfig& cfg,
                                Rng& rng) {
  const auto path = sample_trajectory(g, k, cfg.walk_length, rng);
  return ranking_from_trajectory(g.num_nodes(), path, rng);
}

inline Rng walk_rng(const WalkConfig& cfg, NodeId s, std::size_t walk_index) {
  return Rng(walk_stream_seed(cfg.seed, s, walk_index));
}

// K independent walks from s; walk k uses the stream keyed by (seed, s, k).
inline std::vector<ExtendedRanking> run_walks(const Graph& g, NodeId s, const WalkConfig& cfg) {
  cfg.validate();
  const auto kernel = build_kernel(g, s, cfg.epsilon);
  std::vector<ExtendedRanking> out;
  out.reserve(cfg.num_walks);
  for (std::size_t k = 0; k < cfg.num_walks; ++k) {
    Rng rng = walk_rng(cfg, s, k);
    out.push_back(run_walk(g, kernel, cfg, rng));
  }
  return out;
}

}  // namespace topk
