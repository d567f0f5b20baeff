#pragma once

// Face-of-simplex optimization. For a support T the candidate (x_T, lambda_T)
// solves A_T x = lambda 1, 1^T x = 1. T is admissible when the bordered KKT
// system is nonsingular, x_T > 0, and A_T is positive definite on the tangent
// space {u : 1^T u = 0}. The simplex minimum is the smallest admissible
// lambda_T over all nonempty supports.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "stqp/error.hpp"
#include "stqp/matrix.hpp"

namespace stqp {

struct ToleranceSet {
  double positivity = 1e-10;  // absolute, on entries of x_T
  double pd = 1e-12;          // relative, on Cholesky pivots of the projected Hessian
  double singular = 1e-12;    // relative, on elimination pivots of the KKT matrix
  double tie = 1e-12;         // relative, for near-tie detection between candidates
};

enum class Rejection { none, singular_kkt, nonpositive_entry, indefinite_on_tangent };

constexpr std::string_view to_string(Rejection r) noexcept {
  switch (r) {
    case Rejection::none: return "none";
    case Rejection::singular_kkt: return "singular_kkt";
    case Rejection::nonpositive_entry: return "nonpositive_entry";
    case Rejection::indefinite_on_tangent: return "indefinite_on_tangent";
  }
  return "?";
}

/// Helmert basis of {u in R^s : 1^T u = 0}: column k (0-based) has
/// 1/sqrt((k+1)(k+2)) on coordinates 0..k and -(k+1)/sqrt((k+1)(k+2)) on k+1.
inline DenseMatrix tangent_basis(std::size_t s) {
  if (s < 2) throw DomainError("tangent basis needs dimension at least 2");
  DenseMatrix b(s, s - 1);
  for (std::size_t k = 0; k + 1 < s; ++k) {
    const double kk = static_cast<double>(k + 1);
    const double norm = std::sqrt(kk * (kk + 1.0));
    for (std::size_t i = 0; i <= k; ++i) b(i, k) = 1.0 / norm;
    b(k + 1, k) = -kk / norm;
  }
  return b;
}

struct KktSolution {
  std::vector<double> x;
  double lambda = 0.0;
};

/// Solves the bordered system [A -1; 1^T 0][x; lambda] = [0; 1] by Gaussian
/// elimination with partial pivoting. nullopt means singular: some pivot fell
/// below singular_tol * (1 + max|K|).
inline std::optional<KktSolution> kkt_solve(const SymmetricMatrix& a, double singular_tol = 1e-12) {
  const std::size_t t = a.size();
  if (t == 1) return KktSolution{{1.0}, a(0, 0)};

  const std::size_t m = t + 1;
  std::vector<double> k(m * (m + 1), 0.0);  // augmented with the rhs column
  auto at = [&](std::size_t i, std::size_t j) -> double& { return k[i * (m + 1) + j]; };
  for (std::size_t i = 0; i < t; ++i) {
    for (std::size_t j = 0; j < t; ++j) at(i, j) = a(i, j);
    at(i, t) = -1.0;
    at(t, i) = 1.0;
  }
  at(t, m) = 1.0;

  const double threshold = singular_tol * (1.0 + std::max(1.0, a.max_abs()));
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < m; ++r)
      if (std::abs(at(r, c)) > std::abs(at(p, c))) p = r;
    if (!(std::abs(at(p, c)) >= threshold)) return std::nullopt;
    if (p != c)
      for (std::size_t j = c; j <= m; ++j) std::swap(at(p, j), at(c, j));
    for (std::size_t r = c + 1; r < m; ++r) {
      const double f = at(r, c) / at(c, c);
      if (f == 0.0) continue;
      for (std::size_t j = c; j <= m; ++j) at(r, j) -= f * at(c, j);
    }
  }
  std::vector<double> sol(m);
  for (std::size_t i = m; i-- > 0;) {
    double s = at(i, m);
    for (std::size_t j = i + 1; j < m; ++j) s -= at(i, j) * sol[j];
    sol[i] = s / at(i, i);
  }
  KktSolution out;
  out.lambda = sol[t];
  sol.pop_back();
  out.x = std::move(sol);
  return out;
}

namespace detail {

/// True when B^T A B admits a Cholesky factorization with every pivot above
/// `floor`.
inline bool projected_hessian_pd(const SymmetricMatrix& a, const DenseMatrix& b, double floor) {
  const std::size_t s = a.size();
  const std::size_t d = s - 1;
  DenseMatrix ab(s, d);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      double v = 0.0;
      for (std::size_t j = 0; j < s; ++j) v += a(i, j) * b(j, k);
      ab(i, k) = v;
    }
  DenseMatrix h(d, d);
  for (std::size_t p = 0; p < d; ++p)
    for (std::size_t q = 0; q <= p; ++q) {
      double v = 0.0;
      for (std::size_t i = 0; i < s; ++i) v += b(i, p) * ab(i, q);
      h(p, q) = v;
      h(q, p) = v;
    }
  for (std::size_t j = 0; j < d; ++j) {
    double pivot = h(j, j);
    for (std::size_t k = 0; k < j; ++k) pivot -= h(j, k) * h(j, k);
    if (!(pivot > floor)) return false;
    const double l = std::sqrt(pivot);
    h(j, j) = l;
    for (std::size_t i = j + 1; i < d; ++i) {
      double v = h(i, j);
      for (std::size_t k = 0; k < j; ++k) v -= h(i, k) * h(j, k);
      h(i, j) = v / l;
    }
  }
  return true;
}

}  // namespace detail

struct Admissibility {
  bool admissible = false;
  Rejection reason = Rejection::none;
};

/// Checks are ordered singular_kkt, nonpositive_entry, indefinite_on_tangent.
inline Admissibility is_admissible(const SymmetricMatrix& a, const std::optional<KktSolution>& solved,
                                   const ToleranceSet& tol = {}) {
  if (!solved) return {false, Rejection::singular_kkt};
  if (a.size() == 1) return {true, Rejection::none};
  if (!(*std::min_element(solved->x.begin(), solved->x.end()) > tol.positivity))
    return {false, Rejection::nonpositive_entry};
  if (!detail::projected_hessian_pd(a, tangent_basis(a.size()), tol.pd * (1.0 + a.max_abs())))
    return {false, Rejection::indefinite_on_tangent};
  return {true, Rejection::none};
}

struct SupportCandidate {
  std::vector<std::size_t> support;  // sorted, local indices
  double lambda = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> x;  // on `support`; empty unless admissible
  bool admissible = false;
  Rejection rejection_reason = Rejection::none;
};

inline SupportCandidate evaluate_support(const SymmetricMatrix& a, std::span<const std::size_t> support,
                                         const ToleranceSet& tol = {}) {
  SupportCandidate c;
  c.support.assign(support.begin(), support.end());
  const auto block = a.principal(support);
  auto solved = kkt_solve(block, tol.singular);
  const auto verdict = is_admissible(block, solved, tol);
  c.admissible = verdict.admissible;
  c.rejection_reason = verdict.reason;
  if (solved) c.lambda = solved->lambda;
  if (c.admissible) c.x = std::move(solved->x);
  return c;
}

struct LocalSolution {
  double value = 0.0;
  std::vector<double> x;             // full length r, zeros off the support
  std::vector<std::size_t> support;  // strictly positive coordinates of x
  bool near_tie = false;             // another admissible candidate within the tie tolerance
  std::vector<SupportCandidate> all_candidates;
};

struct LocalOptions {
  std::size_t support_cap = 25;
  bool keep_candidates = false;
  ToleranceSet tol{};
};

namespace detail {

/// Keeps the admissible candidates within the tie tolerance of the running
/// minimum, in arrival order. After all candidates are offered, front() is the
/// earliest candidate within tolerance of the true minimum.
class NearMinimumSet {
 public:
  explicit NearMinimumSet(double rel_tol) : rel_tol_(rel_tol) {}

  void offer(double lambda, std::span<const std::size_t> support, std::span<const double> x) {
    if (!entries_.empty() && lambda > min_ + slack(min_)) return;
    if (entries_.empty() || lambda < min_) {
      min_ = lambda;
      const double cut = min_ + slack(min_);
      std::erase_if(entries_, [cut](const Entry& e) { return e.lambda > cut; });
    }
    entries_.push_back({lambda, {support.begin(), support.end()}, {x.begin(), x.end()}});
  }

  bool empty() const noexcept { return entries_.empty(); }
  std::size_t size() const noexcept { return entries_.size(); }

  struct Entry {
    double lambda;
    std::vector<std::size_t> support;
    std::vector<double> x;
  };
  const Entry& front() const { return entries_.front(); }

 private:
  double slack(double v) const noexcept { return rel_tol_ * std::max(1.0, std::abs(v)); }

  double rel_tol_;
  double min_ = 0.0;
  std::vector<Entry> entries_;
};

inline bool next_combination(std::vector<std::size_t>& idx, std::size_t r) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < r - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace detail

/// Exact simplex minimum of x^T A x by enumerating all 2^r - 1 supports,
/// by increasing cardinality then lexicographically. Near-ties are resolved
/// toward the earliest support in that order.
inline LocalSolution local_stqp(const SymmetricMatrix& a, const LocalOptions& opts = {}) {
  const std::size_t r = a.size();
  if (r > opts.support_cap) throw CapacityError(0, r, opts.support_cap);

  detail::NearMinimumSet best(opts.tol.tie);
  LocalSolution out;
  std::vector<std::size_t> idx;
  for (std::size_t k = 1; k <= r; ++k) {
    idx.resize(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    do {
      auto c = evaluate_support(a, idx, opts.tol);
      if (c.admissible) best.offer(c.lambda, c.support, c.x);
      if (opts.keep_candidates) out.all_candidates.push_back(std::move(c));
    } while (detail::next_combination(idx, r));
  }

  const auto& w = best.front();  // singletons are always admissible
  out.value = w.lambda;
  out.support = w.support;
  out.x.assign(r, 0.0);
  for (std::size_t i = 0; i < w.support.size(); ++i) out.x[w.support[i]] = w.x[i];
  out.near_tie = best.size() > 1;
  return out;
}

/// diag(2, 4, ..., 2^r); every support is admissible with lambda_U equal to
/// the reciprocal of the sum of 2^-i over U, and these values are distinct.
inline SymmetricMatrix dyadic_matrix(std::size_t r) {
  if (r < 1 || r > 4) throw DomainError("dyadic matrix is defined for 1 <= r <= 4");
  SymmetricMatrix d(r);
  for (std::size_t i = 0; i < r; ++i) d.set(i, i, std::ldexp(1.0, static_cast<int>(i + 1)));
  return d;
}

}  // namespace stqp
