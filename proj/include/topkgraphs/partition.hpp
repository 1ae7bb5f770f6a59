#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace topk {

// Cluster or class assignment over nodes 0..n-1.
struct Partition {
  std::vector<std::size_t> labels;

  std::size_t size() const noexcept { return labels.size(); }

  std::size_t num_classes() const {
    return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  }

  friend bool operator==(const Partition&, const Partition&) = default;
};

// Relabels classes 0, 1, ... in order of first appearance.
inline Partition canonical(const Partition& p) {
  std::vector<std::size_t> map(p.num_classes(), static_cast<std::size_t>(-1));
  Partition out;
  out.labels.reserve(p.size());
  std::size_t next = 0;
  for (auto l : p.labels) {
    if (map[l] == static_cast<std::size_t>(-1)) map[l] = next++;
    out.labels.push_back(map[l]);
  }
  return out;
}

// True when both assign the same groups, up to renaming of labels.
inline bool same_grouping(const Partition& a, const Partition& b) {
  return a.size() == b.size() && canonical(a) == canonical(b);
}

inline std::vector<std::size_t> class_sizes(const Partition& p) {
  std::vector<std::size_t> sizes(p.num_classes(), 0);
  for (auto l : p.labels) ++sizes[l];
  return sizes;
}

}  // namespace topk
