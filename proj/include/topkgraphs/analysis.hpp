#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "linalg.hpp"
#include "matrix.hpp"
#include "partition.hpp"

namespace topk {

// Checks the off-diagonal part of a dissimilarity matrix. The diagonal is not
// read by any consumer in this header.
inline void validate_dissimilarity(const Matrix& d, const char* who) {
  if (!d.square()) throw std::invalid_argument(std::string(who) + ": matrix is not square");
  const std::size_t n = d.rows();
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double x = d(i, j);
      if (!std::isfinite(x)) throw std::invalid_argument(std::string(who) + ": non-finite entry");
      if (x < 0.0) throw std::invalid_argument(std::string(who) + ": negative dissimilarity");
      scale = std::max(scale, x);
    }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(d(i, j) - d(j, i)) > 1e-9 * scale)
        throw std::invalid_argument(std::string(who) + ": matrix is not symmetric");
}

// scipy-style linkage: step i merges clusters a and b (ids < n are nodes,
// id n + k is the cluster formed at step k) at `height`.
struct Merge {
  std::size_t a;
  std::size_t b;
  double height;
  std::size_t size;
};

struct Dendrogram {
  std::size_t num_leaves = 0;
  std::vector<Merge> merges;  // n - 1 entries, heights non-decreasing
};

namespace detail {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
};

}  // namespace detail

// Ward linkage on a dissimilarity matrix via the nearest-neighbor chain and
// the Lance-Williams update on squared distances. Heights are the square root
// of the updated squared distance, as in scipy's "ward".
inline Dendrogram ward_linkage(const Matrix& d) {
  validate_dissimilarity(d, "ward_linkage");
  const std::size_t n = d.rows();
  Dendrogram out;
  out.num_leaves = n;
  if (n < 2) return out;

  Matrix d2(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d2(i, j) = i == j ? 0.0 : d(i, j) * d(i, j);

  std::vector<std::size_t> size(n, 1);
  std::vector<char> active(n, 1);
  struct RawMerge {
    std::size_t rep_a;  // a node of each merged cluster
    std::size_t rep_b;
    double height;
  };
  std::vector<RawMerge> raw;
  raw.reserve(n - 1);
  std::vector<std::size_t> chain;
  chain.reserve(n);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    if (chain.empty()) {
      std::size_t first = 0;
      while (!active[first]) ++first;
      chain.push_back(first);
    }
    std::size_t a = 0;
    std::size_t b = 0;
    for (;;) {
      a = chain.back();
      const bool has_prev = chain.size() >= 2;
      const std::size_t prev = has_prev ? chain[chain.size() - 2] : 0;
      double best = std::numeric_limits<double>::infinity();
      std::size_t arg = n;
      if (has_prev) {
        best = d2(a, prev);
        arg = prev;
      }
      for (std::size_t c = 0; c < n; ++c) {
        if (!active[c] || c == a) continue;
        if (d2(a, c) < best) {
          best = d2(a, c);
          arg = c;
        }
      }
      b = arg;
      if (has_prev && b == prev) break;
      chain.push_back(b);
    }
    chain.pop_back();
    chain.pop_back();

    const std::size_t keep = std::min(a, b);
    const std::size_t drop = std::max(a, b);
    const double dab = d2(a, b);
    raw.push_back({a, b, std::sqrt(std::max(dab, 0.0))});
    const auto na = static_cast<double>(size[a]);
    const auto nb = static_cast<double>(size[b]);
    for (std::size_t k = 0; k < n; ++k) {
      if (!active[k] || k == a || k == b) continue;
      const auto nk = static_cast<double>(size[k]);
      const double updated =
          ((na + nk) * d2(a, k) + (nb + nk) * d2(b, k) - nk * dab) / (na + nb + nk);
      d2(keep, k) = d2(k, keep) = std::max(updated, 0.0);
    }
    size[keep] += size[drop];
    active[drop] = 0;
  }

  std::stable_sort(raw.begin(), raw.end(),
                   [](const RawMerge& x, const RawMerge& y) { return x.height < y.height; });

  detail::UnionFind uf(n);
  std::vector<std::size_t> cluster_id(n);  // root -> dendrogram id
  std::vector<std::size_t> cluster_size(n, 1);
  std::iota(cluster_id.begin(), cluster_id.end(), 0);
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const std::size_t ra = uf.find(raw[k].rep_a);
    const std::size_t rb = uf.find(raw[k].rep_b);
    std::size_t ida = cluster_id[ra];
    std::size_t idb = cluster_id[rb];
    if (ida > idb) std::swap(ida, idb);
    const std::size_t merged_size = cluster_size[ra] + cluster_size[rb];
    out.merges.push_back({ida, idb, raw[k].height, merged_size});
    uf.parent[rb] = ra;
    cluster_id[ra] = n + k;
    cluster_size[ra] = merged_size;
  }
  return out;
}

// Applies the first n - num_clusters merges. Labels follow the order of each
// cluster's smallest node id.
inline Partition cut_dendrogram(const Dendrogram& dendro, std::size_t num_clusters) {
  const std::size_t n = dendro.num_leaves;
  if (num_clusters < 1 || num_clusters > n) {
    throw std::invalid_argument("cut_dendrogram: num_clusters must lie in [1, n]");
  }
  // Dendrogram ids -> a representative leaf.
  std::vector<std::size_t> rep(n + dendro.merges.size());
  std::iota(rep.begin(), rep.begin() + static_cast<std::ptrdiff_t>(n), 0);
  detail::UnionFind uf(n);
  for (std::size_t k = 0; k < dendro.merges.size(); ++k) {
    const auto& m = dendro.merges[k];
    rep[n + k] = rep[m.a];
    if (k < n - num_clusters) uf.parent[uf.find(rep[m.b])] = uf.find(rep[m.a]);
  }
  Partition p;
  p.labels.resize(n);
  std::vector<std::size_t> label_of_root(n, static_cast<std::size_t>(-1));
  std::size_t next = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t r = uf.find(v);
    if (label_of_root[r] == static_cast<std::size_t>(-1)) label_of_root[r] = next++;
    p.labels[v] = label_of_root[r];
  }
  return p;
}

inline Partition ward_cluster(const Matrix& d, std::size_t num_clusters) {
  if (num_clusters < 1 || num_clusters > d.rows()) {
    throw std::invalid_argument("ward_cluster: num_clusters must lie in [1, n]");
  }
  return cut_dendrogram(ward_linkage(d), num_clusters);
}

struct Embedding {
  Matrix coordinates;               // n x dim, columns mean zero
  std::vector<double> eigenvalues;  // descending, before clamping
};

// Classical (Torgerson) MDS: B = -1/2 J D^2 J, top eigenvectors scaled by
// sqrt(max(lambda, 0)). The diagonal of d is taken as zero.
inline Embedding classical_mds(const Matrix& d, std::size_t dim) {
  validate_dissimilarity(d, "classical_mds");
  const std::size_t n = d.rows();
  if (dim < 1 || dim >= n) throw std::invalid_argument("classical_mds: dim must satisfy 1 <= dim < n");

  Matrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b(i, j) = i == j ? 0.0 : d(i, j) * d(i, j);
  std::vector<double> row_mean(n, 0.0);
  double grand = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row_mean[i] += b(i, j);
    grand += row_mean[i];
    row_mean[i] /= static_cast<double>(n);
  }
  grand /= static_cast<double>(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      b(i, j) = -0.5 * (b(i, j) - row_mean[i] - row_mean[j] + grand);
  // Exact symmetry for the solver.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) b(i, j) = b(j, i) = 0.5 * (b(i, j) + b(j, i));

  const auto eig = symmetric_eigen(std::move(b));
  // Eigenvalues within rounding of zero are treated as zero.
  double top = 0.0;
  for (double v : eig.values) top = std::max(top, std::abs(v));
  const double floor = 1e-12 * top;
  Embedding out;
  out.coordinates = Matrix(n, dim);
  for (std::size_t c = 0; c < dim; ++c) {
    const std::size_t src = n - 1 - c;
    const double lambda = eig.values[src];
    out.eigenvalues.push_back(lambda);
    const double scale = lambda > floor ? std::sqrt(lambda) : 0.0;
    for (std::size_t i = 0; i < n; ++i) out.coordinates(i, c) = eig.vectors(i, src) * scale;
  }
  return out;
}

// Leave-one-out kNN: each node takes the majority label of its k nearest
// other nodes. Distance ties go to the lower node id, vote ties to the
// smaller class id.
inline Partition knn_classify(const Matrix& d, const Partition& labels, std::size_t k) {
  validate_dissimilarity(d, "knn_classify");
  const std::size_t n = d.rows();
  if (labels.size() != n) throw std::invalid_argument("knn_classify: label count differs from n");
  if (k < 1 || k >= n) throw std::invalid_argument("knn_classify: k must satisfy 1 <= k < n");
  const std::size_t classes = labels.num_classes();
  const auto sizes = class_sizes(labels);
  if (std::count_if(sizes.begin(), sizes.end(), [](std::size_t s) { return s > 0; }) < 2) {
    throw std::invalid_argument("knn_classify: at least two classes are required");
  }
  Partition pred;
  pred.labels.resize(n);
  std::vector<std::size_t> others;
  others.reserve(n - 1);
  std::vector<std::size_t> votes(classes);
  for (std::size_t i = 0; i < n; ++i) {
    others.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) others.push_back(j);
    std::partial_sort(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(k), others.end(),
                      [&](std::size_t x, std::size_t y) {
                        return d(i, x) < d(i, y) || (d(i, x) == d(i, y) && x < y);
                      });
    std::fill(votes.begin(), votes.end(), 0);
    for (std::size_t r = 0; r < k; ++r) ++votes[labels.labels[others[r]]];
    pred.labels[i] = static_cast<std::size_t>(
        std::distance(votes.begin(), std::max_element(votes.begin(), votes.end())));
  }
  return pred;
}

}  // namespace topk
