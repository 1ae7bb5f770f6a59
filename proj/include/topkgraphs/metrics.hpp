#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "partition.hpp"

namespace topk {

// r x c counts of co-membership between two partitions of the same nodes.
struct ContingencyTable {
  std::vector<std::vector<std::size_t>> counts;
  std::vector<std::size_t> row_sums;
  std::vector<std::size_t> col_sums;
  std::size_t total = 0;

  static ContingencyTable of(const Partition& x, const Partition& y) {
    if (x.size() != y.size()) {
      throw std::invalid_argument("contingency: partitions cover different numbers of nodes");
    }
    // Canonical labels drop unused class ids so margins are all positive.
    const Partition cx = canonical(x);
    const Partition cy = canonical(y);
    ContingencyTable t;
    t.total = x.size();
    t.row_sums.assign(cx.num_classes(), 0);
    t.col_sums.assign(cy.num_classes(), 0);
    t.counts.assign(cx.num_classes(), std::vector<std::size_t>(cy.num_classes(), 0));
    for (std::size_t i = 0; i < t.total; ++i) {
      ++t.counts[cx.labels[i]][cy.labels[i]];
      ++t.row_sums[cx.labels[i]];
      ++t.col_sums[cy.labels[i]];
    }
    return t;
  }
};

namespace detail {

inline double choose2(std::size_t k) {
  return 0.5 * static_cast<double>(k) * static_cast<double>(k > 0 ? k - 1 : 0);
}

inline double entropy(std::span<const std::size_t> sizes, std::size_t total) {
  double h = 0.0;
  const auto n = static_cast<double>(total);
  for (auto s : sizes) {
    if (s == 0) continue;
    const double p = static_cast<double>(s) / n;
    h -= p * std::log(p);
  }
  return h;
}

inline double mutual_information(const ContingencyTable& t) {
  const auto n = static_cast<double>(t.total);
  double mi = 0.0;
  for (std::size_t i = 0; i < t.row_sums.size(); ++i) {
    for (std::size_t j = 0; j < t.col_sums.size(); ++j) {
      const auto nij = static_cast<double>(t.counts[i][j]);
      if (nij == 0.0) continue;
      mi += nij / n *
            std::log(n * nij / (static_cast<double>(t.row_sums[i]) * static_cast<double>(t.col_sums[j])));
    }
  }
  return std::max(mi, 0.0);
}

// log(k!) for k = 0..n.
inline std::vector<double> log_factorials(std::size_t n) {
  std::vector<double> lf(n + 1, 0.0);
  for (std::size_t k = 2; k <= n; ++k) lf[k] = lf[k - 1] + std::log(static_cast<double>(k));
  return lf;
}

}  // namespace detail

// Expected mutual information of two partitions with the table's margins under
// the hypergeometric (permutation) model.
inline double expected_mutual_information(const ContingencyTable& t) {
  const std::size_t n = t.total;
  if (n == 0) return 0.0;
  const auto lf = detail::log_factorials(n);
  const auto nd = static_cast<double>(n);
  double emi = 0.0;
  for (auto a : t.row_sums) {
    for (auto b : t.col_sums) {
      const std::size_t lo = std::max<std::size_t>(1, a + b > n ? a + b - n : 0);
      const std::size_t hi = std::min(a, b);
      const double fixed = lf[a] + lf[b] + lf[n - a] + lf[n - b] - lf[n];
      for (std::size_t nij = lo; nij <= hi; ++nij) {
        const auto x = static_cast<double>(nij);
        const double log_p =
            fixed - lf[nij] - lf[a - nij] - lf[b - nij] - lf[n - a - b + nij];
        emi += x / nd * std::log(nd * x / (static_cast<double>(a) * static_cast<double>(b))) *
               std::exp(log_p);
      }
    }
  }
  return emi;
}

// Adjusted Rand index. When the maximum and expected index coincide the
// value is 1 for identical groupings and 0 otherwise.
inline double ari(const Partition& x, const Partition& y) {
  const auto t = ContingencyTable::of(x, y);
  double index = 0.0;
  for (const auto& row : t.counts)
    for (auto c : row) index += detail::choose2(c);
  double sum_a = 0.0;
  double sum_b = 0.0;
  for (auto a : t.row_sums) sum_a += detail::choose2(a);
  for (auto b : t.col_sums) sum_b += detail::choose2(b);
  const double pairs = detail::choose2(t.total);
  const double expected = pairs > 0.0 ? sum_a * sum_b / pairs : 0.0;
  const double max_index = 0.5 * (sum_a + sum_b);
  if (max_index == expected) return same_grouping(x, y) ? 1.0 : 0.0;
  return (index - expected) / (max_index - expected);
}

// MI / arithmetic mean of the two entropies (natural log).
inline double nmi(const Partition& x, const Partition& y) {
  const auto t = ContingencyTable::of(x, y);
  const double hx = detail::entropy(t.row_sums, t.total);
  const double hy = detail::entropy(t.col_sums, t.total);
  if (hx == 0.0 && hy == 0.0) return 1.0;
  if (hx == 0.0 || hy == 0.0) return 0.0;
  return std::min(1.0, detail::mutual_information(t) / (0.5 * (hx + hy)));
}

// (MI - E[MI]) / (mean(H(x), H(y)) - E[MI]).
inline double ami(const Partition& x, const Partition& y) {
  const auto t = ContingencyTable::of(x, y);
  const double hx = detail::entropy(t.row_sums, t.total);
  const double hy = detail::entropy(t.col_sums, t.total);
  const double mi = detail::mutual_information(t);
  const double emi = expected_mutual_information(t);
  const double denom = 0.5 * (hx + hy) - emi;
  if (std::abs(denom) <= 1e-12 * std::max(1.0, 0.5 * (hx + hy))) {
    return same_grouping(x, y) ? 1.0 : 0.0;
  }
  return (mi - emi) / denom;
}

// Mean per-class recall. Every class id below truth.num_classes() must occur.
inline double balanced_accuracy(const Partition& truth, const Partition& predicted) {
  if (truth.size() != predicted.size()) {
    throw std::invalid_argument("balanced_accuracy: label vectors differ in length");
  }
  const auto sizes = class_sizes(truth);
  if (sizes.empty()) throw std::invalid_argument("balanced_accuracy: no labels");
  std::vector<std::size_t> hits(sizes.size(), 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth.labels[i] == predicted.labels[i]) ++hits[truth.labels[i]];
  }
  double sum = 0.0;
  for (std::size_t c = 0; c < sizes.size(); ++c) {
    if (sizes[c] == 0) {
      throw std::invalid_argument("balanced_accuracy: class " + std::to_string(c) + " has no members");
    }
    sum += static_cast<double>(hits[c]) / static_cast<double>(sizes[c]);
  }
  return sum / static_cast<double>(sizes.size());
}

}  // namespace topk
