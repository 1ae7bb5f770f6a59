#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace topk {

using NodeId = std::uint32_t;

struct NodePair {
  NodeId u;
  NodeId v;

  friend bool operator==(const NodePair&, const NodePair&) = default;
};

// Immutable undirected, unweighted graph on nodes 0..n-1.
//
// Adjacency is stored CSR-style: neighbors of v are
// targets_[offsets_[v] .. offsets_[v+1]), strictly ascending, no self-loops.
class Graph {
 public:
  Graph() : offsets_(1, 0) {}

  std::size_t num_nodes() const noexcept { return offsets_.size() - 1; }
  std::size_t num_edges() const noexcept { return targets_.size() / 2; }

  std::size_t degree(NodeId v) const {
    check_node(v);
    return offsets_[v + 1] - offsets_[v];
  }

  std::span<const NodeId> neighbors(NodeId v) const {
    check_node(v);
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }

  bool has_edge(NodeId u, NodeId v) const {
    const auto nb = neighbors(u);
    check_node(v);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  void check_node(NodeId v) const {
    if (v >= num_nodes()) {
      throw std::invalid_argument("node id " + std::to_string(v) + " out of range (n = " +
                                  std::to_string(num_nodes()) + ")");
    }
  }

  // Deduplicates, drops self-loops, symmetrizes and sorts.
  static Graph from_edge_list(std::span<const NodePair> edges, std::size_t n) {
    std::vector<std::vector<NodeId>> adj(n);
    for (const auto& e : edges) {
      if (e.u >= n || e.v >= n) {
        throw std::invalid_argument("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                                    ") references a node >= n = " + std::to_string(n));
      }
      if (e.u == e.v) continue;
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
    Graph g;
    g.offsets_.assign(n + 1, 0);
    for (std::size_t v = 0; v < n; ++v) {
      auto& list = adj[v];
      std::sort(list.begin(), list.end());
      list.erase(std::unique(list.begin(), list.end()), list.end());
      g.offsets_[v + 1] = g.offsets_[v] + list.size();
    }
    g.targets_.reserve(g.offsets_[n]);
    for (const auto& list : adj) g.targets_.insert(g.targets_.end(), list.begin(), list.end());
    return g;
  }

  // Canonical edge list: u < v, lexicographic order.
  std::vector<NodePair> edge_list() const {
    std::vector<NodePair> out;
    out.reserve(num_edges());
    for (NodeId u = 0; u < num_nodes(); ++u) {
      for (NodeId v : neighbors(u)) {
        if (u < v) out.push_back({u, v});
      }
    }
    return out;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
};

inline std::span<const NodeId> neighbors(const Graph& g, NodeId v) { return g.neighbors(v); }

// |N(a) ∩ N(b)| by merging the sorted lists.
inline std::size_t common_neighbors(const Graph& g, NodeId a, NodeId b) {
  const auto na = g.neighbors(a);
  const auto nb = g.neighbors(b);
  std::size_t count = 0;
  auto i = na.begin();
  auto j = nb.begin();
  while (i != na.end() && j != nb.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

// |N(s) ∩ N(v)| / |N(s) ∪ N(v)|, or 0 when the union is empty.
inline double jaccard(const Graph& g, NodeId s, NodeId v) {
  const std::size_t inter = common_neighbors(g, s, v);
  const std::size_t uni = g.degree(s) + g.degree(v) - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

// 2|N(s) ∩ N(v)| / (|N(s)| + |N(v)|), or 0 when both are empty.
inline double dice(const Graph& g, NodeId s, NodeId v) {
  const std::size_t denom = g.degree(s) + g.degree(v);
  if (denom == 0) return 0.0;
  return 2.0 * static_cast<double>(common_neighbors(g, s, v)) / static_cast<double>(denom);
}

// Jaccard of s against every node, in O(sum of degrees of N(s)).
inline std::vector<double> jaccard_row(const Graph& g, NodeId s) {
  const std::size_t n = g.num_nodes();
  std::vector<std::size_t> inter(n, 0);
  for (NodeId u : g.neighbors(s)) {
    for (NodeId w : g.neighbors(u)) ++inter[w];
  }
  const std::size_t ds = g.degree(s);
  std::vector<double> row(n, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    const std::size_t uni = ds + g.degree(v) - inter[v];
    row[v] = uni == 0 ? 0.0 : static_cast<double>(inter[v]) / static_cast<double>(uni);
  }
  return row;
}

// Component index per node; components numbered in order of their smallest
// node id.
inline std::vector<std::size_t> connected_components(const Graph& g) {
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> comp(g.num_nodes(), unset);
  std::size_t next = 0;
  std::vector<NodeId> stack;
  for (NodeId root = 0; root < g.num_nodes(); ++root) {
    if (comp[root] != unset) continue;
    comp[root] = next;
    stack.push_back(root);
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (NodeId w : g.neighbors(u)) {
        if (comp[w] == unset) {
          comp[w] = next;
          stack.push_back(w);
        }
      }
    }
    ++next;
  }
  return comp;
}

inline bool is_connected(const Graph& g) {
  const auto comp = connected_components(g);
  return std::all_of(comp.begin(), comp.end(), [](std::size_t c) { return c == 0; });
}

// Subgraph induced by `nodes`; node i of the result is nodes[i].
inline Graph induced_subgraph(const Graph& g, std::span<const NodeId> nodes) {
  constexpr auto absent = static_cast<NodeId>(-1);
  std::vector<NodeId> new_id(g.num_nodes(), absent);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    g.check_node(nodes[i]);
    new_id[nodes[i]] = static_cast<NodeId>(i);
  }
  std::vector<NodePair> edges;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (NodeId w : g.neighbors(nodes[i])) {
      if (new_id[w] != absent && new_id[w] > i) edges.push_back({static_cast<NodeId>(i), new_id[w]});
    }
  }
  return Graph::from_edge_list(edges, nodes.size());
}

struct Subgraph {
  Graph graph;
  std::vector<NodeId> original_ids;  // new id -> original id
};

// Largest component; ties go to the component with the smallest node id.
// Nodes keep their relative order.
inline Subgraph largest_connected_component(const Graph& g) {
  if (g.num_nodes() == 0) throw std::invalid_argument("largest_connected_component: empty graph");
  const auto comp = connected_components(g);
  const std::size_t num_comp = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<std::size_t> sizes(num_comp, 0);
  for (auto c : comp) ++sizes[c];
  const auto best = static_cast<std::size_t>(
      std::distance(sizes.begin(), std::max_element(sizes.begin(), sizes.end())));
  Subgraph out;
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    if (comp[v] == best) out.original_ids.push_back(v);
  }
  out.graph = induced_subgraph(g, out.original_ids);
  return out;
}

}  // namespace topk
