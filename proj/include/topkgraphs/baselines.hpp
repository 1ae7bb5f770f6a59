#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "affinity.hpp"
#include "graph.hpp"
#include "linalg.hpp"
#include "matrix.hpp"
#include "parallel.hpp"

namespace topk {

// Symmetric dissimilarity matrix from a pairwise similarity, 1 - sim(u, v),
// with a zero diagonal.
template <typename Similarity>
AffinityMatrix overlap_dissimilarity(const Graph& g, Similarity&& sim) {
  const std::size_t n = g.num_nodes();
  Matrix d(n, n);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      const double x = 1.0 - sim(g, u, v);
      d(u, v) = x;
      d(v, u) = x;
    }
  }
  return AffinityMatrix(std::move(d), AffinityState::symmetric);
}

inline AffinityMatrix jaccard_matrix(const Graph& g) {
  return overlap_dissimilarity(g, [](const Graph& gr, NodeId a, NodeId b) { return jaccard(gr, a, b); });
}

inline AffinityMatrix dice_matrix(const Graph& g) {
  return overlap_dissimilarity(g, [](const Graph& gr, NodeId a, NodeId b) { return dice(gr, a, b); });
}

struct PprConfig {
  double restart_prob = 0.15;
  double tol = 1e-10;
  std::size_t max_iters = 10000;

  void validate() const {
    if (!(restart_prob > 0.0 && restart_prob < 1.0))
      throw std::invalid_argument("restart_prob must lie in (0, 1)");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  }
};

struct PprVector {
  std::vector<double> pi;
  std::size_t iterations = 0;
  bool converged = false;
};

// Power iteration pi <- a e_s + (1 - a) pi P, P the uniform walk matrix.
// Mass on a node without neighbors returns to the seed.
inline PprVector personalized_pagerank_vector(const Graph& g, NodeId seed, const PprConfig& cfg) {
  cfg.validate();
  g.check_node(seed);
  const std::size_t n = g.num_nodes();
  const double alpha = cfg.restart_prob;
  PprVector out;
  out.pi.assign(n, 0.0);
  out.pi[seed] = 1.0;
  std::vector<double> next(n);
  for (out.iterations = 1; out.iterations <= cfg.max_iters; ++out.iterations) {
    std::fill(next.begin(), next.end(), 0.0);
    double dangling = 0.0;
    for (NodeId u = 0; u < n; ++u) {
      const double mass = out.pi[u];
      if (mass == 0.0) continue;
      const auto nb = g.neighbors(u);
      if (nb.empty()) {
        dangling += mass;
        continue;
      }
      const double share = (1.0 - alpha) * mass / static_cast<double>(nb.size());
      for (NodeId v : nb) next[v] += share;
    }
    next[seed] += alpha + (1.0 - alpha) * dangling;
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) change += std::abs(next[v] - out.pi[v]);
    out.pi.swap(next);
    if (change < cfg.tol) {
      out.converged = true;
      break;
    }
  }
  out.iterations = std::min(out.iterations, cfg.max_iters);
  return out;
}

struct PprResult {
  AffinityMatrix dissimilarity;
  Matrix scores;  // row s = PPR vector seeded at s
  std::size_t unconverged_seeds = 0;
};

// Dissimilarity 1 - pi_s(v) / max_u pi_s(u), then averaged with its transpose.
inline PprResult personalized_pagerank(const Graph& g, const PprConfig& cfg,
                                       std::size_t threads = 0) {
  cfg.validate();
  const std::size_t n = g.num_nodes();
  Matrix scores(n, n);
  Matrix raw(n, n);
  std::vector<char> converged(n, 1);
  parallel_for(
      n,
      [&](std::size_t s) {
        const auto res = personalized_pagerank_vector(g, static_cast<NodeId>(s), cfg);
        converged[s] = res.converged ? 1 : 0;
        const double mx = *std::max_element(res.pi.begin(), res.pi.end());
        auto srow = scores.row(s);
        auto rrow = raw.row(s);
        for (std::size_t v = 0; v < n; ++v) {
          srow[v] = res.pi[v];
          rrow[v] = 1.0 - res.pi[v] / mx;
        }
      },
      threads);
  Matrix d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) d(i, j) = d(j, i) = 0.5 * (raw(i, j) + raw(j, i));
  PprResult out{AffinityMatrix(std::move(d), AffinityState::symmetric, true), std::move(scores), 0};
  out.unconverged_seeds = static_cast<std::size_t>(std::count(converged.begin(), converged.end(), 0));
  return out;
}

struct EmbeddingConfig {
  std::size_t dim = 8;
  // When false, disconnected graphs are embedded as-is: isolated nodes get a
  // zero row in D^-1/2 and the coordinates are eigenvectors 2..dim+1 of the
  // full spectrum regardless of the null-space multiplicity.
  bool require_connected = true;
};

struct LaplacianEmbedding {
  Matrix coordinates;           // n x dim
  std::vector<double> eigenvalues;  // the dim values used, ascending
  EigenDecomposition spectrum;  // full decomposition of L_sym
  Matrix laplacian;
};

// L_sym = I - D^-1/2 A D^-1/2.
inline Matrix normalized_laplacian(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<double> inv_sqrt(n, 0.0);
  for (NodeId v = 0; v < n; ++v) {
    if (g.degree(v) > 0) inv_sqrt[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v)));
  }
  Matrix l(n, n);
  for (NodeId u = 0; u < n; ++u) {
    l(u, u) = g.degree(u) > 0 ? 1.0 : 0.0;
    for (NodeId v : g.neighbors(u)) l(u, v) = -inv_sqrt[u] * inv_sqrt[v];
  }
  return l;
}

inline LaplacianEmbedding laplacian_embedding(const Graph& g, const EmbeddingConfig& cfg) {
  const std::size_t n = g.num_nodes();
  if (cfg.dim < 1 || cfg.dim >= n) {
    throw std::invalid_argument("laplacian_embedding: dim must satisfy 1 <= dim < n");
  }
  if (cfg.require_connected && !is_connected(g)) {
    throw std::invalid_argument(
        "laplacian_embedding: graph is disconnected; restrict it with largest_connected_component "
        "first");
  }
  LaplacianEmbedding out;
  out.laplacian = normalized_laplacian(g);
  out.spectrum = symmetric_eigen(out.laplacian);
  out.coordinates = Matrix(n, cfg.dim);
  for (std::size_t c = 0; c < cfg.dim; ++c) {
    out.eigenvalues.push_back(out.spectrum.values[c + 1]);
    for (std::size_t v = 0; v < n; ++v) out.coordinates(v, c) = out.spectrum.vectors(v, c + 1);
  }
  return out;
}

// Pairwise Euclidean distances between rows, divided by the global maximum
// (left unscaled when every distance is zero).
inline AffinityMatrix normalized_euclidean_distances(const Matrix& points) {
  const std::size_t n = points.rows();
  Matrix d(n, n);
  double mx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < points.cols(); ++c) {
        const double diff = points(i, c) - points(j, c);
        s += diff * diff;
      }
      d(i, j) = d(j, i) = std::sqrt(s);
      mx = std::max(mx, d(i, j));
    }
  }
  if (mx > 0.0) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d(i, j) /= mx;
  }
  return AffinityMatrix(std::move(d), AffinityState::symmetric, true);
}

inline AffinityMatrix laplacian_dissimilarity(const Graph& g, const EmbeddingConfig& cfg) {
  return normalized_euclidean_distances(laplacian_embedding(g, cfg).coordinates);
}

}  // namespace topk
