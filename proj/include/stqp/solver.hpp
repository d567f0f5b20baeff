#pragma once

// Global solver. With m_n the diagonal minimum and M = Q - m_n E, every
// cross-component entry of M is nonnegative, so the simplex minimum of
// x^T M x is attained inside a single defect component. Each component is
// solved exactly by support enumeration and the smallest local value wins.
// When every component has at most four vertices the lifted DNN relaxation
// is exact on each block, and the certificate flag records that.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stqp/defect.hpp"
#include "stqp/error.hpp"
#include "stqp/kkt.hpp"
#include "stqp/matrix.hpp"
#include "stqp/rng.hpp"

namespace stqp {

/// Largest block on which the doubly nonnegative and completely positive cones agree.
inline constexpr std::size_t kExactBlockSize = 4;

struct SolveOptions {
  std::size_t support_cap = 25;
  ToleranceSet tol{};
};

struct ComponentValue {
  std::size_t component;
  double shifted_value;  // local value minus m_n
};

struct Solution {
  std::size_t n = 0;
  double value = 0.0;
  double m_n = 0.0;
  double shifted_value = 0.0;
  std::vector<std::size_t> support;  // global, 0-based, ascending
  std::vector<double> weights;       // aligned with support, positive, sum 1
  std::size_t winning_component = 0;
  bool certified_exact_dnn = false;
  std::vector<ComponentValue> component_values;
  bool near_tie_flag = false;
  DefectDecomposition defect;

  /// Dense minimizer in R^n.
  std::vector<double> dense_x() const {
    std::vector<double> x(n, 0.0);
    for (std::size_t i = 0; i < support.size(); ++i) x[support[i]] = weights[i];
    return x;
  }
};

inline Solution solve(const SymmetricMatrix& q, DefectDecomposition d, const SolveOptions& opts = {}) {
  for (std::size_t a = 0; a < d.components.size(); ++a)
    if (d.components[a].size() > opts.support_cap)
      throw CapacityError(a, d.components[a].size(), opts.support_cap);

  Solution sol;
  sol.n = q.size();
  sol.m_n = d.m_n;
  sol.certified_exact_dnn = max_component_size(d) <= kExactBlockSize;

  const LocalOptions local_opts{opts.support_cap, false, opts.tol};
  std::vector<LocalSolution> locals;
  locals.reserve(d.components.size());
  double best = 0.0;
  for (std::size_t a = 0; a < d.components.size(); ++a) {
    locals.push_back(local_stqp(q.principal(d.components[a]), local_opts));
    const double shifted = locals.back().value - d.m_n;
    sol.component_values.push_back({a, shifted});
    if (a == 0 || shifted < best) best = shifted;
  }

  // Earliest component within tolerance of the minimum wins; components are
  // ordered by smallest vertex.
  const double cut = best + opts.tol.tie * std::max(1.0, std::abs(best));
  std::size_t within = 0;
  bool found = false;
  for (const auto& cv : sol.component_values) {
    if (cv.shifted_value <= cut) {
      ++within;
      if (!found) {
        sol.winning_component = cv.component;
        found = true;
      }
    }
  }

  const auto& comp = d.components[sol.winning_component];
  const auto& loc = locals[sol.winning_component];
  sol.value = loc.value;
  sol.shifted_value = sol.component_values[sol.winning_component].shifted_value;
  for (std::size_t li : loc.support) {
    sol.support.push_back(comp[li]);
    sol.weights.push_back(loc.x[li]);
  }
  sol.near_tie_flag = within > 1 || loc.near_tie;
  sol.defect = std::move(d);
  return sol;
}

inline Solution solve(const SymmetricMatrix& q, const SolveOptions& opts = {}) {
  return solve(q, build_defect_graph(q), opts);
}

inline std::vector<std::size_t> component_sizes(const DefectDecomposition& d) {
  std::vector<std::size_t> s;
  s.reserve(d.components.size());
  for (const auto& c : d.components) s.push_back(c.size());
  return s;
}

struct RankOneCertificate {
  SymmetricMatrix x;  // x x^T embedded in n x n
  double total_mass = 0.0;
  double objective = 0.0;
};

/// Materializes X = x x^T and checks it is feasible for the lifted problem:
/// <E, X> = 1, X >= 0, X positive semidefinite, <Q, X> equal to the value.
/// Throws ConsistencyError on any failed check.
inline RankOneCertificate embed_rank_one(const SymmetricMatrix& q, const Solution& sol) {
  if (q.size() != sol.n) throw ConsistencyError("matrix and solution sizes differ");
  RankOneCertificate cert{SymmetricMatrix(sol.n)};
  for (std::size_t a = 0; a < sol.support.size(); ++a)
    for (std::size_t b = a; b < sol.support.size(); ++b)
      cert.x.set(sol.support[a], sol.support[b], sol.weights[a] * sol.weights[b]);

  double mass = 0.0;
  double objective = 0.0;
  for (std::size_t i = 0; i < sol.n; ++i) {
    const auto xr = cert.x.row(i);
    const auto qr = q.row(i);
    for (std::size_t j = 0; j < sol.n; ++j) {
      if (xr[j] < 0.0) throw ConsistencyError("lifted matrix has a negative entry");
      mass += xr[j];
      objective += qr[j] * xr[j];
    }
  }
  cert.total_mass = mass;
  cert.objective = objective;
  if (std::abs(mass - 1.0) > 1e-12)
    throw ConsistencyError("lifted matrix mass " + std::to_string(mass) + " differs from 1");

  // Nonnegative diagonal and vanishing 2x2 principal minors with nonnegative
  // entries give X = d d^T with d = sqrt(diag X), hence X is PSD.
  for (std::size_t a = 0; a < sol.support.size(); ++a) {
    const std::size_t i = sol.support[a];
    for (std::size_t b = a + 1; b < sol.support.size(); ++b) {
      const std::size_t j = sol.support[b];
      const double minor = cert.x(i, i) * cert.x(j, j) - cert.x(i, j) * cert.x(i, j);
      if (std::abs(minor) > 1e-14) throw ConsistencyError("lifted matrix is not rank one");
    }
  }
  if (std::abs(objective - sol.value) > 1e-9 * std::max(1.0, std::abs(sol.value)))
    throw ConsistencyError("lifted objective does not match the solution value");
  return cert;
}

struct BlockMassReport {
  std::vector<double> tau;  // mass inside each component block
  double eta = 0.0;         // mass across distinct components
  double total = 0.0;
};

inline BlockMassReport block_masses(const SymmetricMatrix& x, const DefectDecomposition& d) {
  if (x.size() != d.n) throw DomainError("matrix size does not match the decomposition");
  BlockMassReport r;
  r.tau.assign(d.components.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < d.n; ++i) {
    const auto row = x.row(i);
    const std::size_t ci = d.component_of[i];
    for (std::size_t j = 0; j < d.n; ++j) {
      if (row[j] < 0.0) throw DomainError("block masses need an entrywise nonnegative matrix");
      total += row[j];
      if (d.component_of[j] == ci)
        r.tau[ci] += row[j];
      else
        r.eta += row[j];
    }
  }
  if (std::abs(total - 1.0) > 1e-8) throw DomainError("matrix entries must sum to 1");
  r.total = total;
  return r;
}

struct ProbeSample {
  /// Rank-one terms y_s as (index, value) pairs, y_s >= 0.
  std::vector<std::vector<std::pair<std::size_t, double>>> terms;
  double objective = 0.0;  // <Q, Y> for Y = sum y_s y_s^T / sum (1^T y_s)^2
};

struct ProbeResult {
  bool passed = true;
  double worst_margin = 0.0;  // min over samples of <Q, Y> - value
  std::optional<ProbeSample> violation;
};

/// Draws completely positive feasible matrices Y (normalized sums of at most
/// five terms y y^T with y >= 0) and checks <Q, Y> >= value - 1e-8 on each.
/// Terms are sparse: half perturb the reported minimizer, half use random
/// supports of at most six indices.
inline ProbeResult lower_bound_probe(const SymmetricMatrix& q, const Solution& sol, std::size_t trials,
                                     std::uint64_t seed) {
  if (!sol.certified_exact_dnn) throw DomainError("lower-bound probe needs a certified solution");
  const std::size_t n = q.size();
  ProbeResult result;
  bool first = true;
  for (std::size_t t = 0; t < trials; ++t) {
    CounterStream rng(seed, t, 0x70726f6265ULL);
    ProbeSample s;
    const std::size_t k = 1 + rng.below(5);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t term = 0; term < k; ++term) {
      std::vector<std::pair<std::size_t, double>> y;
      auto add = [&](std::size_t i, double v) {
        for (auto& [j, w] : y)
          if (j == i) {
            w += v;
            return;
          }
        y.emplace_back(i, v);
      };
      if (rng.uniform() < 0.5) {
        for (std::size_t a = 0; a < sol.support.size(); ++a)
          add(sol.support[a], sol.weights[a] * (0.5 + rng.uniform()));
        add(rng.below(n), 0.2 * rng.uniform());
      } else {
        const std::size_t m = 1 + rng.below(std::min<std::size_t>(n, 6));
        for (std::size_t c = 0; c < m; ++c) add(rng.below(n), rng.uniform());
      }
      double mass = 0.0;
      double quad = 0.0;
      for (const auto& [i, vi] : y) {
        mass += vi;
        for (const auto& [j, vj] : y) quad += vi * q(i, j) * vj;
      }
      num += quad;
      den += mass * mass;
      s.terms.push_back(std::move(y));
    }
    s.objective = num / den;
    const double margin = s.objective - sol.value;
    if (first || margin < result.worst_margin) result.worst_margin = margin;
    first = false;
    if (margin < -1e-8 && result.passed) {
      result.passed = false;
      result.violation = std::move(s);
    }
  }
  return result;
}

}  // namespace stqp
