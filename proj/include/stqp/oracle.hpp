#pragma once

// Reference solvers for validating the decomposition solver.
//
// brute_force_stqp enumerates every support of the full index set (bitmask
// order, then a canonical sort) with no defect-graph decomposition.
// grid_minimum never touches KKT systems; it evaluates the objective on a
// barycentric grid over the whole simplex.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "stqp/error.hpp"
#include "stqp/kkt.hpp"
#include "stqp/matrix.hpp"

namespace stqp {

inline LocalSolution brute_force_stqp(const SymmetricMatrix& q, std::size_t cap = 16,
                                      const ToleranceSet& tol = {}) {
  const std::size_t n = q.size();
  if (n > cap) throw CapacityError(0, n, cap);

  std::vector<SupportCandidate> admissible;
  std::vector<std::size_t> support;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    support.clear();
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1U) support.push_back(i);
    auto c = evaluate_support(q, support, tol);
    if (c.admissible) admissible.push_back(std::move(c));
  }

  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : admissible) best = std::min(best, c.lambda);
  const double cut = best + tol.tie * std::max(1.0, std::abs(best));

  std::vector<const SupportCandidate*> near;
  for (const auto& c : admissible)
    if (c.lambda <= cut) near.push_back(&c);
  std::sort(near.begin(), near.end(), [](const SupportCandidate* a, const SupportCandidate* b) {
    if (a->support.size() != b->support.size()) return a->support.size() < b->support.size();
    return a->support < b->support;
  });

  const auto& w = *near.front();
  LocalSolution out;
  out.value = w.lambda;
  out.support = w.support;
  out.x.assign(n, 0.0);
  for (std::size_t i = 0; i < w.support.size(); ++i) out.x[w.support[i]] = w.x[i];
  out.near_tie = near.size() > 1;
  return out;
}

struct GridMinimum {
  double value = std::numeric_limits<double>::infinity();
  std::vector<double> point;
};

/// Minimum of x^T Q x over {k / grid : k in N^n, sum k = grid}.
inline GridMinimum grid_minimum(const SymmetricMatrix& q, std::size_t grid) {
  const std::size_t n = q.size();
  if (grid == 0) throw DomainError("grid resolution must be positive");
  GridMinimum best;
  std::vector<std::size_t> k(n, 0);
  std::vector<double> x(n);

  // Enumerate compositions of `grid` into n parts.
  auto visit = [&](auto&& self, std::size_t pos, std::size_t left) -> void {
    if (pos + 1 == n) {
      k[pos] = left;
      for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>(k[i]) / static_cast<double>(grid);
      const double v = q.quadratic_form(x);
      if (v < best.value) {
        best.value = v;
        best.point = x;
      }
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      k[pos] = c;
      self(self, pos + 1, left - c);
    }
  };
  visit(visit, 0, grid);
  return best;
}

/// True when no grid point beats value - 1e-6.
inline bool grid_refine_check(const SymmetricMatrix& q, double value, std::size_t grid) {
  if (q.size() > 6) throw DomainError("grid check is limited to n <= 6");
  return grid_minimum(q, grid).value >= value - 1e-6;
}

inline bool grid_refine_check(const SymmetricMatrix& q, const LocalSolution& sol, std::size_t grid) {
  return grid_refine_check(q, sol.value, grid);
}

}  // namespace stqp
