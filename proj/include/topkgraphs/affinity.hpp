#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "graph.hpp"
#include "matrix.hpp"
#include "parallel.hpp"
#include "walk.hpp"

namespace topk {

// Mean rank of every node over the K walks from `start`. score[start] == 1.
struct BordaScores {
  NodeId start = 0;
  std::vector<double> score;
};

inline BordaScores borda(std::span<const ExtendedRanking> rankings) {
  if (rankings.empty()) throw std::invalid_argument("borda: no rankings");
  const NodeId start = rankings.front().start;
  const std::size_t n = rankings.front().rank.size();
  std::vector<std::uint64_t> sum(n, 0);
  for (const auto& r : rankings) {
    if (r.start != start || r.rank.size() != n) {
      throw std::invalid_argument("borda: rankings disagree on start node or node universe");
    }
    for (std::size_t v = 0; v < n; ++v) sum[v] += r.rank[v];
  }
  BordaScores out{start, std::vector<double>(n)};
  const auto k = static_cast<double>(rankings.size());
  for (std::size_t v = 0; v < n; ++v) out.score[v] = static_cast<double>(sum[v]) / k;
  return out;
}

enum class AffinityState { raw, row_normalized, symmetric };

constexpr std::string_view to_string(AffinityState s) {
  switch (s) {
    case AffinityState::raw: return "raw";
    case AffinityState::row_normalized: return "row-normalized";
    case AffinityState::symmetric: return "symmetric";
  }
  return "?";
}

// n x n node dissimilarities (smaller = more affine). The state only moves
// forward: raw -> row-normalized -> symmetric.
class AffinityMatrix {
 public:
  AffinityMatrix() = default;
  AffinityMatrix(Matrix values, AffinityState state, bool normalized = false)
      : values_(std::move(values)), state_(state),
        normalized_(normalized || state == AffinityState::row_normalized) {
    if (!values_.square()) throw std::invalid_argument("AffinityMatrix: matrix must be square");
    if (state_ == AffinityState::symmetric && values_.asymmetry() > 1e-12) {
      throw std::invalid_argument("AffinityMatrix: values are not symmetric");
    }
  }

  std::size_t size() const noexcept { return values_.rows(); }
  AffinityState state() const noexcept { return state_; }
  // Whether row normalization was applied at some point.
  bool normalized() const noexcept { return normalized_; }

  const Matrix& values() const noexcept { return values_; }
  double operator()(std::size_t r, std::size_t c) const { return values_(r, c); }

  friend bool operator==(const AffinityMatrix&, const AffinityMatrix&) = default;

 private:
  Matrix values_;
  AffinityState state_ = AffinityState::raw;
  bool normalized_ = false;
};

// Raw Borda matrix: row s holds borda(run_walks(g, s, cfg)).score.
// Rows are computed in parallel; output does not depend on thread count.
inline AffinityMatrix assemble_affinity(const Graph& g, const WalkConfig& cfg,
                                        std::size_t threads = 0) {
  cfg.validate();
  const std::size_t n = g.num_nodes();
  if (n < 2) throw std::invalid_argument("assemble_affinity: need at least 2 nodes");
  Matrix a(n, n);
  parallel_for(
      n,
      [&](std::size_t s) {
        const auto start = static_cast<NodeId>(s);
        const auto rankings = run_walks(g, start, cfg);
        const auto scores = borda(rankings);
        std::copy(scores.score.begin(), scores.score.end(), a.row(s).begin());
      },
      threads);
  return AffinityMatrix(std::move(a), AffinityState::raw);
}

// Each row divided by its maximum.
inline AffinityMatrix row_normalize(const AffinityMatrix& a) {
  if (a.state() != AffinityState::raw) {
    throw StateError("row_normalize: expected a raw matrix, got " +
                     std::string(to_string(a.state())));
  }
  Matrix out = a.values();
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    const double mx = *std::max_element(row.begin(), row.end());
    if (!(mx > 0.0)) throw std::domain_error("row_normalize: row maximum must be positive");
    for (double& x : row) x /= mx;
  }
  return AffinityMatrix(std::move(out), AffinityState::row_normalized);
}

// (A + A^T) / 2. Accepts raw or row-normalized input.
inline AffinityMatrix symmetrize(const AffinityMatrix& a) {
  if (a.state() == AffinityState::symmetric) {
    throw StateError("symmetrize: matrix is already symmetric");
  }
  const Matrix& in = a.values();
  const std::size_t n = in.rows();
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    out(i, i) = in(i, i);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double m = 0.5 * (in(i, j) + in(j, i));
      out(i, j) = m;
      out(j, i) = m;
    }
  }
  return AffinityMatrix(std::move(out), AffinityState::symmetric, a.normalized());
}

// raw -> row-normalized -> symmetric.
inline AffinityMatrix topk_affinity(const Graph& g, const WalkConfig& cfg,
                                    std::size_t threads = 0) {
  return symmetrize(row_normalize(assemble_affinity(g, cfg, threads)));
}

}  // namespace topk
