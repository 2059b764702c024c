#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

namespace markoff {

/// Union-find with path compression and union by size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t v) {
    while (parent_[v] != v) {
      parent_[v] = parent_[parent_[v]];
      v = parent_[v];
    }
    return v;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

  std::size_t component_size(std::size_t v) { return size_[find(v)]; }

  /// Sizes of all components, ascending.
  std::vector<std::size_t> component_sizes() {
    std::vector<std::size_t> sizes;
    for (std::size_t v = 0; v < parent_.size(); ++v) {
      if (find(v) == v) sizes.push_back(size_[v]);
    }
    std::sort(sizes.begin(), sizes.end());
    return sizes;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace markoff
