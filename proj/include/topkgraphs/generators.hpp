#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "matrix.hpp"
#include "partition.hpp"
#include "rng.hpp"

namespace topk {

struct GeneratedGraph {
  Graph graph;
  Partition communities;
};

// ---------------------------------------------------------------------------
// Stochastic block model

struct SbmConfig {
  std::vector<std::size_t> block_sizes{10, 10, 10};
  double p_intra = 0.5;
  double p_inter = 0.05;
  std::uint64_t seed = 0;

  void validate() const {
    if (block_sizes.empty()) throw std::invalid_argument("sbm: no blocks");
    for (auto s : block_sizes)
      if (s < 1) throw std::invalid_argument("sbm: block sizes must be >= 1");
    if (p_intra < 0.0 || p_intra > 1.0 || p_inter < 0.0 || p_inter > 1.0)
      throw std::invalid_argument("sbm: probabilities must lie in [0, 1]");
  }
};

// One Bernoulli draw per node pair, pairs in lexicographic order.
inline GeneratedGraph sbm(const SbmConfig& cfg) {
  cfg.validate();
  Partition blocks;
  for (std::size_t b = 0; b < cfg.block_sizes.size(); ++b)
    blocks.labels.insert(blocks.labels.end(), cfg.block_sizes[b], b);
  const std::size_t n = blocks.size();
  Rng rng(cfg.seed);
  std::vector<NodePair> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const double p = blocks.labels[u] == blocks.labels[v] ? cfg.p_intra : cfg.p_inter;
      if (rng.bernoulli(p)) edges.push_back({u, v});
    }
  }
  return {Graph::from_edge_list(edges, n), std::move(blocks)};
}

// ---------------------------------------------------------------------------
// Latent-graph perturbation: keep each edge with keep_prob, add each non-edge
// with add_prob.

struct PerturbConfig {
  double keep_prob = 1.0;
  double add_prob = 0.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(keep_prob > 0.0 && keep_prob <= 1.0))
      throw std::invalid_argument("perturb: keep_prob must lie in (0, 1]");
    if (!(add_prob >= 0.0 && add_prob <= 1.0))
      throw std::invalid_argument("perturb: add_prob must lie in [0, 1]");
  }
};

inline Graph perturb(const Graph& latent, const PerturbConfig& cfg) {
  cfg.validate();
  const std::size_t n = latent.num_nodes();
  Rng rng(cfg.seed);
  std::vector<NodePair> edges;
  for (NodeId u = 0; u < n; ++u) {
    const auto nb = latent.neighbors(u);
    auto it = nb.begin();
    for (NodeId v = u + 1; v < n; ++v) {
      while (it != nb.end() && *it < v) ++it;
      const bool present = it != nb.end() && *it == v;
      if (rng.bernoulli(present ? cfg.keep_prob : cfg.add_prob)) edges.push_back({u, v});
    }
  }
  return Graph::from_edge_list(edges, n);
}

// ---------------------------------------------------------------------------
// LFR benchmark

struct LfrConfig {
  std::size_t n = 100;
  double avg_degree = 5.0;
  std::size_t max_degree = 10;
  double mu = 0.05;
  double tau1 = 2.0;
  double tau2 = 1.1;
  std::size_t min_community = 5;
  std::size_t max_community = 50;
  std::uint64_t seed = 0;
  std::size_t max_attempts = 50;
  std::size_t rewiring_sweeps = 100;

  void validate() const {
    if (n < 2) throw std::invalid_argument("lfr: n must be >= 2");
    if (!(avg_degree >= 1.0)) throw std::invalid_argument("lfr: avg_degree must be >= 1");
    if (!(avg_degree <= static_cast<double>(max_degree)) || max_degree >= n)
      throw std::invalid_argument("lfr: need avg_degree <= max_degree < n");
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("lfr: mu must lie in (0, 1)");
    if (!(tau1 > 0.0) || !(tau2 > 0.0)) throw std::invalid_argument("lfr: exponents must be > 0");
    if (min_community < 1 || min_community > max_community || max_community > n)
      throw std::invalid_argument("lfr: need 1 <= min_community <= max_community <= n");
  }
};

struct LfrResult {
  Graph graph;
  Partition communities;
  double realized_mu = 0.0;  // fraction of edges joining different communities
  std::size_t attempts = 0;
};

namespace detail {

// Integral of x^p over [a, b].
inline double power_integral(double p, double a, double b) {
  if (std::abs(p + 1.0) < 1e-12) return std::log(b / a);
  return (std::pow(b, p + 1.0) - std::pow(a, p + 1.0)) / (p + 1.0);
}

// Mean of the continuous density proportional to x^-gamma on [a, b].
inline double power_law_mean(double gamma, double a, double b) {
  if (a >= b) return a;
  return power_integral(1.0 - gamma, a, b) / power_integral(-gamma, a, b);
}

// Inverse-CDF draw from x^-gamma on [a, b].
inline double sample_power_law(double gamma, double a, double b, Rng& rng) {
  const double u = rng.uniform();
  if (std::abs(gamma - 1.0) < 1e-12) return a * std::pow(b / a, u);
  const double e = 1.0 - gamma;
  const double lo = std::pow(a, e);
  const double hi = std::pow(b, e);
  return std::pow(lo + u * (hi - lo), 1.0 / e);
}

inline std::size_t round_half_up(double x) { return static_cast<std::size_t>(std::floor(x + 0.5)); }

// Lower cutoff of the degree power law such that its mean equals `target`.
inline double calibrate_min_degree(double gamma, double target, double max_degree) {
  double lo = 1.0;
  double hi = max_degree;
  if (power_law_mean(gamma, lo, hi) > target + 1e-9) {
    throw GenerationError("lfr: avg_degree is below what degree exponent tau1 allows with minimum degree 1");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (power_law_mean(gamma, mid, max_degree) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

class StubWiring {
 public:
  explicit StubWiring(std::vector<std::vector<NodeId>>& adj) : adj_(adj) {}

  bool adjacent(NodeId u, NodeId v) const {
    const auto& a = adj_[u];
    return std::find(a.begin(), a.end(), v) != a.end();
  }

  // Pairs up `stubs` (one entry per half-edge) into simple edges accepted by
  // `allowed`. Rejected pairs are repaired by swapping with edges created
  // here. Returns false if stubs remain after `sweeps` repair rounds.
  template <typename Allowed>
  bool wire(std::vector<NodeId> stubs, Allowed&& allowed, std::size_t sweeps, Rng& rng) {
    auto valid = [&](NodeId u, NodeId v) { return u != v && allowed(u, v) && !adjacent(u, v); };
    rng.shuffle(std::span<NodeId>(stubs));
    std::vector<NodeId> leftover;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      if (valid(stubs[i], stubs[i + 1])) {
        add(stubs[i], stubs[i + 1]);
      } else {
        leftover.push_back(stubs[i]);
        leftover.push_back(stubs[i + 1]);
      }
    }
    for (std::size_t sweep = 0; sweep < sweeps && !leftover.empty(); ++sweep) {
      rng.shuffle(std::span<NodeId>(leftover));
      std::vector<NodeId> still;
      for (std::size_t i = 0; i + 1 < leftover.size(); i += 2) {
        const NodeId u = leftover[i];
        const NodeId v = leftover[i + 1];
        if (valid(u, v)) {
          add(u, v);
          continue;
        }
        if (!created_.empty()) {
          const std::size_t e = static_cast<std::size_t>(rng.below(created_.size()));
          NodeId x = created_[e].u;
          NodeId y = created_[e].v;
          if (rng.bernoulli(0.5)) std::swap(x, y);
          if (valid(u, x) && valid(v, y) && !(u == y && v == x)) {
            remove(e);
            add(u, x);
            add(v, y);
            continue;
          }
        }
        still.push_back(u);
        still.push_back(v);
      }
      leftover.swap(still);
    }
    return leftover.empty();
  }

  const std::vector<NodePair>& created() const { return created_; }

 private:
  void add(NodeId u, NodeId v) {
    adj_[u].push_back(v);
    adj_[v].push_back(u);
    created_.push_back({u, v});
  }

  void remove(std::size_t e) {
    const auto [u, v] = created_[e];
    std::erase(adj_[u], v);
    std::erase(adj_[v], u);
    created_[e] = created_.back();
    created_.pop_back();
  }

  std::vector<std::vector<NodeId>>& adj_;
  std::vector<NodePair> created_;
};

// One LFR attempt; returns false with `why` set on failure.
inline bool lfr_attempt(const LfrConfig& cfg, Rng& rng, LfrResult& out, std::string& why) {
  const std::size_t n = cfg.n;
  const auto kmax = static_cast<double>(cfg.max_degree);

  // Degrees.
  const double kmin = calibrate_min_degree(cfg.tau1, cfg.avg_degree, kmax);
  std::vector<std::size_t> degree(n);
  for (auto& k : degree) {
    k = std::clamp<std::size_t>(round_half_up(sample_power_law(cfg.tau1, kmin, kmax, rng)), 1,
                                cfg.max_degree);
  }
  if (std::accumulate(degree.begin(), degree.end(), std::size_t{0}) % 2 == 1) {
    for (;;) {
      const auto v = static_cast<std::size_t>(rng.below(n));
      if (degree[v] < cfg.max_degree) {
        ++degree[v];
        break;
      }
      if (degree[v] > 1) {
        --degree[v];
        break;
      }
    }
  }

  // Internal degrees: stochastic rounding keeps the expected mixing at mu.
  std::vector<std::size_t> k_in(n);
  for (std::size_t v = 0; v < n; ++v) {
    const double target = (1.0 - cfg.mu) * static_cast<double>(degree[v]);
    k_in[v] = static_cast<std::size_t>(std::floor(target + rng.uniform()));
    k_in[v] = std::min(k_in[v], degree[v]);
  }
  const std::size_t max_k_in = *std::max_element(k_in.begin(), k_in.end());

  // Community sizes summing to n.
  std::vector<std::size_t> sizes;
  std::size_t total = 0;
  const auto cmin = static_cast<double>(cfg.min_community);
  const auto cmax = static_cast<double>(cfg.max_community);
  while (total < n) {
    const std::size_t s = std::clamp<std::size_t>(
        round_half_up(sample_power_law(cfg.tau2, cmin, cmax, rng)), cfg.min_community,
        cfg.max_community);
    sizes.push_back(s);
    total += s;
  }
  if (total > n) {
    const std::size_t last = sizes.back() - (total - n);
    if (last >= cfg.min_community) {
      sizes.back() = last;
    } else {
      sizes.pop_back();
      for (std::size_t extra = 0; extra < last; ++extra) {
        std::vector<std::size_t> room;
        for (std::size_t c = 0; c < sizes.size(); ++c)
          if (sizes[c] < cfg.max_community) room.push_back(c);
        if (room.empty()) {
          why = "community sizes cannot sum to n within [min_community, max_community]";
          return false;
        }
        ++sizes[room[rng.below(room.size())]];
      }
    }
  }
  if (sizes.empty()) {
    why = "no communities";
    return false;
  }
  if (*std::max_element(sizes.begin(), sizes.end()) < max_k_in + 1) {
    why = "largest community is too small for the largest internal degree";
    return false;
  }

  // Membership: most demanding nodes first, communities weighted by free slots.
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(std::span<NodeId>(order));
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return k_in[a] > k_in[b]; });
  std::vector<std::size_t> free_slots = sizes;
  std::vector<std::size_t> community(n);
  for (NodeId v : order) {
    std::size_t weight = 0;
    for (std::size_t c = 0; c < sizes.size(); ++c)
      if (sizes[c] > k_in[v]) weight += free_slots[c];
    if (weight == 0) {
      why = "not enough room in large communities for high internal degree nodes";
      return false;
    }
    auto pick = rng.below(weight);
    for (std::size_t c = 0; c < sizes.size(); ++c) {
      if (sizes[c] <= k_in[v]) continue;
      if (pick < free_slots[c]) {
        community[v] = c;
        --free_slots[c];
        break;
      }
      pick -= free_slots[c];
    }
  }

  std::vector<std::vector<NodeId>> members(sizes.size());
  for (NodeId v = 0; v < n; ++v) members[community[v]].push_back(v);

  // Each community needs an even internal stub count.
  for (auto& group : members) {
    std::size_t sum = 0;
    for (NodeId v : group) sum += k_in[v];
    if (sum % 2 == 0) continue;
    const NodeId v = group[rng.below(group.size())];
    if (k_in[v] > 0) {
      --k_in[v];
    } else {
      ++k_in[v];  // degree >= 1 and k_in == 0, so the external count absorbs it
    }
  }

  std::vector<std::vector<NodeId>> adj(n);
  StubWiring wiring(adj);
  for (std::size_t c = 0; c < members.size(); ++c) {
    std::vector<NodeId> stubs;
    for (NodeId v : members[c]) stubs.insert(stubs.end(), k_in[v], v);
    StubWiring local(adj);
    if (!local.wire(std::move(stubs), [](NodeId, NodeId) { return true; }, cfg.rewiring_sweeps, rng)) {
      why = "internal wiring failed in community " + std::to_string(c) + " (size " +
            std::to_string(sizes[c]) + ")";
      return false;
    }
  }
  std::vector<NodeId> ext_stubs;
  for (NodeId v = 0; v < n; ++v) ext_stubs.insert(ext_stubs.end(), degree[v] - k_in[v], v);
  const std::size_t inter_edges = ext_stubs.size() / 2;
  if (!wiring.wire(
          std::move(ext_stubs),
          [&](NodeId a, NodeId b) { return community[a] != community[b]; }, cfg.rewiring_sweeps,
          rng)) {
    why = "external wiring failed: inter-community stubs cannot be matched";
    return false;
  }

  std::vector<NodePair> edges;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : adj[u])
      if (u < v) edges.push_back({u, v});
  out.graph = Graph::from_edge_list(edges, n);
  out.communities.labels = community;
  out.realized_mu = out.graph.num_edges() == 0
                        ? 0.0
                        : static_cast<double>(inter_edges) / static_cast<double>(out.graph.num_edges());
  return true;
}

}  // namespace detail

// Fraction of edges whose endpoints lie in different classes.
inline double mixing_fraction(const Graph& g, const Partition& p) {
  std::size_t inter = 0;
  for (const auto& e : g.edge_list())
    if (p.labels[e.u] != p.labels[e.v]) ++inter;
  return g.num_edges() == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(g.num_edges());
}

// LFR benchmark graph: power-law degrees (tau1, calibrated to avg_degree),
// power-law community sizes (tau2), a (1 - mu) share of every node's stubs
// wired inside its community and the rest across communities by a
// configuration model with local rewiring.
inline LfrResult lfr(const LfrConfig& cfg) {
  cfg.validate();
  Rng rng(cfg.seed);
  std::string why;
  for (std::size_t attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
    LfrResult out;
    if (detail::lfr_attempt(cfg, rng, out, why)) {
      out.attempts = attempt;
      return out;
    }
  }
  throw GenerationError("lfr: gave up after " + std::to_string(cfg.max_attempts) +
                        " attempts: " + why);
}

// ---------------------------------------------------------------------------
// kNN graph from tabular features

// Z-scores each column (sample sd, denominator n - 1); constant columns
// become 0.
inline Matrix standardize_columns(const Matrix& x) {
  const std::size_t n = x.rows();
  Matrix out = x;
  for (std::size_t c = 0; c < x.cols(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += x(r, c);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) ss += (x(r, c) - mean) * (x(r, c) - mean);
    const double sd = n > 1 ? std::sqrt(ss / static_cast<double>(n - 1)) : 0.0;
    for (std::size_t r = 0; r < n; ++r) out(r, c) = sd > 0.0 ? (x(r, c) - mean) / sd : 0.0;
  }
  return out;
}

// Each sample joined to its k nearest samples (Euclidean, ties to the lower
// index); union of the directed relations.
inline Graph knn_graph(const Matrix& features, std::size_t k, bool standardize) {
  const std::size_t n = features.rows();
  if (k < 1 || k >= n) throw std::invalid_argument("knn_graph: k must satisfy 1 <= k < n");
  const Matrix x = standardize ? standardize_columns(features) : features;
  std::vector<NodePair> edges;
  std::vector<std::pair<double, NodeId>> dist;
  for (NodeId i = 0; i < n; ++i) {
    dist.clear();
    for (NodeId j = 0; j < n; ++j) {
      if (j == i) continue;
      double s = 0.0;
      for (std::size_t c = 0; c < x.cols(); ++c) {
        const double d = x(i, c) - x(j, c);
        s += d * d;
      }
      dist.emplace_back(s, j);
    }
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
    for (std::size_t r = 0; r < k; ++r) edges.push_back({i, dist[r].second});
  }
  return Graph::from_edge_list(edges, n);
}

// ---------------------------------------------------------------------------
// Connected subgraph sampling

// Starts at a uniformly chosen node (among components with at least `size`
// nodes) and repeatedly adds a uniformly chosen frontier node.
inline Subgraph sample_connected_subgraph(const Graph& g, std::size_t size, std::uint64_t seed) {
  if (size < 1) throw std::invalid_argument("sample_connected_subgraph: size must be >= 1");
  const std::size_t n = g.num_nodes();
  const auto comp = connected_components(g);
  std::vector<std::size_t> comp_size(n == 0 ? 0 : *std::max_element(comp.begin(), comp.end()) + 1, 0);
  for (auto c : comp) ++comp_size[c];
  std::vector<NodeId> starts;
  for (NodeId v = 0; v < n; ++v)
    if (comp_size[comp[v]] >= size) starts.push_back(v);
  if (starts.empty()) {
    throw std::invalid_argument("sample_connected_subgraph: no connected component has " +
                                std::to_string(size) + " nodes");
  }
  Rng rng(seed);
  std::vector<char> state(n, 0);  // 1 = frontier, 2 = taken
  std::vector<NodeId> taken;
  std::vector<NodeId> frontier;
  auto take = [&](NodeId v) {
    state[v] = 2;
    taken.push_back(v);
    for (NodeId w : g.neighbors(v)) {
      if (state[w] == 0) {
        state[w] = 1;
        frontier.push_back(w);
      }
    }
  };
  take(starts[rng.below(starts.size())]);
  while (taken.size() < size) {
    const auto i = static_cast<std::size_t>(rng.below(frontier.size()));
    const NodeId v = frontier[i];
    frontier[i] = frontier.back();
    frontier.pop_back();
    take(v);
  }
  std::sort(taken.begin(), taken.end());
  Subgraph out;
  out.graph = induced_subgraph(g, taken);
  out.original_ids = std::move(taken);
  return out;
}

}  // namespace topk
