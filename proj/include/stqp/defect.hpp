#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "stqp/matrix.hpp"

namespace stqp {

/// Disjoint-set forest with path halving and union by size.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) noexcept {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Returns true when a and b were in different sets.
  bool unite(std::size_t a, std::size_t b) noexcept {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }

  std::size_t set_size(std::size_t x) noexcept { return size_[find(x)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

struct DiagonalMinimum {
  double value;
  std::size_t index;  // smallest index attaining the minimum
};

inline DiagonalMinimum diag_min(const SymmetricMatrix& q) {
  DiagonalMinimum r{q(0, 0), 0};
  for (std::size_t i = 1; i < q.size(); ++i)
    if (q(i, i) < r.value) r = {q(i, i), i};
  return r;
}

/// Entry of M = Q - m E.
inline double shifted_entry(const SymmetricMatrix& q, double m, std::size_t i, std::size_t j) {
  return q(i, j) - m;
}

/// Connected components of the defect graph, the graph with an edge {i, j}
/// whenever Q_ij < m_n strictly. Ties Q_ij == m_n produce no edge.
struct DefectDecomposition {
  std::size_t n = 0;
  double m_n = 0.0;
  std::size_t min_index = 0;
  /// Each component sorted ascending; components ordered by smallest member.
  std::vector<std::vector<std::size_t>> components;
  std::size_t edge_count = 0;
  /// component_of[i] is the index into `components` holding vertex i.
  std::vector<std::size_t> component_of;
};

inline DefectDecomposition build_defect_graph(const SymmetricMatrix& q) {
  const std::size_t n = q.size();
  const auto dm = diag_min(q);

  DefectDecomposition d;
  d.n = n;
  d.m_n = dm.value;
  d.min_index = dm.index;

  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = q.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      if (r[j] < dm.value) {
        ++d.edge_count;
        sets.unite(i, j);
      }
    }
  }

  // Scanning vertices in increasing order labels components by smallest member
  // and leaves each vertex list sorted.
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label_of_root(n, unset);
  d.component_of.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = sets.find(i);
    if (label_of_root[root] == unset) {
      label_of_root[root] = d.components.size();
      d.components.emplace_back();
      d.components.back().reserve(sets.set_size(root));
    }
    d.components[label_of_root[root]].push_back(i);
    d.component_of[i] = label_of_root[root];
  }
  return d;
}

inline std::size_t max_component_size(const DefectDecomposition& d) {
  std::size_t m = 0;
  for (const auto& c : d.components) m = std::max(m, c.size());
  return m;
}

}  // namespace stqp
