#pragma once

// Probabilistic quantities behind the exactness guarantee.
//
// Conditioned on the diagonal minimum m_n, the defect graph is an
// Erdos-Renyi graph G(n, F_O(m_n)). Components of size >= 5 contain a
// five-vertex tree, and there are 125 labeled trees on five vertices, so
//   P(component of size >= 5) <= C(n, 5) * 125 * E[F_O(m_n)^4].
// The moment E[F_O(m_n)^s] is computed three ways: Monte Carlo over the
// order statistic U_(1) = F_D(m_n) (density n (1 - u)^(n - 1)), adaptive
// quadrature of the same integral, and a closed form for shifted exponentials.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "stqp/defect.hpp"
#include "stqp/ensemble.hpp"
#include "stqp/error.hpp"
#include "stqp/parallel.hpp"
#include "stqp/rng.hpp"
#include "stqp/solver.hpp"

namespace stqp {

/// Exact O(1) draw of min_i Q_ii: U_(1) = 1 - (1 - V)^(1/n), m = F_D^-1(U_(1)).
inline double sample_diag_min(const EnsembleSpec& spec, std::size_t n, CounterStream& stream) {
  if (n == 0) throw DomainError("n must be at least 1");
  const double v = stream.uniform();
  // 1 - (1 - v)^(1/n) without cancellation for small v.
  double u = -std::expm1(std::log1p(-v) / static_cast<double>(n));
  u = std::clamp(u, std::numeric_limits<double>::min(), 1.0 - 0x1.0p-53);
  return diag_quantile(spec, u);
}

enum class MomentMethod { monte_carlo, quadrature, closed_form };

constexpr std::string_view to_string(MomentMethod m) noexcept {
  switch (m) {
    case MomentMethod::monte_carlo: return "monte_carlo";
    case MomentMethod::quadrature: return "quadrature";
    case MomentMethod::closed_form: return "closed_form";
  }
  return "?";
}

struct MomentReport {
  std::size_t n = 0;
  unsigned s = 0;
  double estimate = 0.0;  // E[F_O(m_n)^s]
  MomentMethod method = MomentMethod::quadrature;
  double std_error = 0.0;  // Monte Carlo only
  double quadrature_error = 0.0;
  double scaled = std::numeric_limits<double>::quiet_NaN();  // n^5 * estimate when s == 4
};

namespace detail {

inline double scaled_moment(std::size_t n, unsigned s, double e) {
  return s == 4 ? std::pow(static_cast<double>(n), 5.0) * e
                : std::numeric_limits<double>::quiet_NaN();
}

inline double ipow(double x, unsigned s) {
  double r = 1.0;
  for (unsigned i = 0; i < s; ++i) r *= x;
  return r;
}

}  // namespace detail

inline MomentReport moment_mc(const EnsembleSpec& spec, std::size_t n, unsigned s, std::uint64_t trials,
                              std::uint64_t seed, unsigned threads = 1) {
  validate(spec);
  if (trials == 0) throw DomainError("trials must be at least 1");
  if (n == 0) throw DomainError("n must be at least 1");
  MomentReport r{n, s, 1.0, MomentMethod::monte_carlo};
  if (s == 0) {
    r.scaled = detail::scaled_moment(n, s, 1.0);
    return r;
  }

  struct Acc {
    double sum = 0.0;
    double sum_sq = 0.0;
  };
  const auto parts = map_chunks(trials, 4096, threads, [&](std::uint64_t b, std::uint64_t e) {
    Acc acc;
    for (std::uint64_t t = b; t < e; ++t) {
      CounterStream stream(seed, t, 0x6d6f6d656e74ULL);
      const double v = detail::ipow(edge_probability(spec, sample_diag_min(spec, n, stream)), s);
      acc.sum += v;
      acc.sum_sq += v * v;
    }
    return acc;
  });
  Acc total;
  for (const auto& p : parts) {
    total.sum += p.sum;
    total.sum_sq += p.sum_sq;
  }
  const double m = total.sum / static_cast<double>(trials);
  const double var = trials > 1 ? std::max(0.0, (total.sum_sq - trials * m * m) / (trials - 1.0)) : 0.0;
  r.estimate = m;
  r.std_error = std::sqrt(var / static_cast<double>(trials));
  r.scaled = detail::scaled_moment(n, s, m);
  return r;
}

/// n * int_0^1 F_O(F_D^-1(u))^s (1 - u)^(n - 1) du, integrated in v = (n - 1) u
/// over [0, n - 1] piecewise on geometrically growing intervals with an
/// adaptive Gauss-Kronrod rule. Relative accuracy target 1e-8.
inline MomentReport moment_quadrature(const EnsembleSpec& spec, std::size_t n, unsigned s) {
  validate(spec);
  if (n == 0) throw DomainError("n must be at least 1");
  MomentReport r{n, s, 1.0, MomentMethod::quadrature};
  if (s == 0) {
    r.scaled = detail::scaled_moment(n, s, 1.0);
    return r;
  }

  // F_O(F_D^-1(u)) does not depend on the location a; dropping it avoids
  // recovering t + a from a rounded t when u is tiny.
  const auto shape = std::visit(
      [](auto law) -> EnsembleSpec {
        if constexpr (requires { law.a; }) law.a = 0.0;
        return law;
      },
      spec);
  const auto dl = detail::diag_law(shape);
  const auto ol = detail::off_law(shape);
  auto transfer = [&](double u) { return detail::ipow(ol.cdf(dl.quantile(u)), s); };

  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  constexpr unsigned max_depth = 15;
  constexpr double piece_tol = 1e-13;

  std::function<double(double)> f;
  std::vector<double> cuts;
  if (n == 1) {
    f = [&](double u) { return (u <= 0.0 || u >= 1.0) ? 0.0 : transfer(u); };
    cuts = {0.0, 1e-6, 1e-3, 0.5, 1.0 - 1e-3, 1.0};
  } else {
    const double len = static_cast<double>(n - 1);
    const double front = static_cast<double>(n) / len;
    f = [&, len, front](double v) {
      const double u = v / len;
      if (u <= 0.0 || u >= 1.0) return 0.0;
      return front * transfer(u) * std::exp(len * std::log1p(-u));
    };
    cuts = {0.0, 1e-6, 1e-3, 0.0625, 0.5};
    for (double c = 1.0; c < len; c *= 2.0) cuts.push_back(c);
    while (!cuts.empty() && cuts.back() >= len) cuts.pop_back();
    cuts.push_back(len);
    // The integrand is at most front * exp(-v); drop pieces past the point
    // where that bound is negligible against the leading pieces.
    std::size_t keep = cuts.size();
    for (std::size_t k = 1; k < cuts.size(); ++k)
      if (front * std::exp(-cuts[k]) < 1e-300) {
        keep = k + 1;
        break;
      }
    cuts.resize(keep);
  }

  // A single Kronrod pass per piece sizes the total. Pieces whose coarse
  // value and error are negligible against it are not refined: a relative
  // target can never be met on a piece where the integrand underflows.
  const std::size_t pieces = cuts.size() - 1;
  std::vector<double> coarse(pieces), coarse_err(pieces);
  double rough = 0.0;
  for (std::size_t k = 0; k < pieces; ++k) {
    coarse[k] = Rule::integrate(f, cuts[k], cuts[k + 1], 0, 0.0, &coarse_err[k]);
    rough += coarse[k];
  }
  double total = 0.0;
  double error = 0.0;
  for (std::size_t k = 0; k < pieces; ++k) {
    const double mag = std::abs(coarse[k]);
    if (mag + coarse_err[k] <= 1e-18 * rough) {
      total += coarse[k];
      error += coarse_err[k];
      continue;
    }
    // Relative target for this piece so that its absolute error stays below
    // 1e-11 of the whole integral.
    const double tol = std::clamp(1e-11 * rough / mag, piece_tol, 1e-2);
    double err = 0.0;
    total += Rule::integrate(f, cuts[k], cuts[k + 1], max_depth, tol, &err);
    error += err;
  }

  if (!(error <= 1e-8 * total) && error > 1e-300) {
    std::ostringstream msg;
    msg << "moment quadrature missed its accuracy target: n=" << n << " s=" << s
        << " estimate=" << total << " error=" << error;
    throw NumericalError(msg.str());
  }
  r.estimate = total;
  r.quadrature_error = error;
  r.scaled = detail::scaled_moment(n, s, total);
  return r;
}

/// E[F_O(m_n)^4] for shifted exponential laws. The binomial sum
/// sum_k C(4,k) (-1)^k n lambda_D / (n lambda_D + k lambda_O) equals
/// 24 a^4 / ((1 + a)(1 + 2a)(1 + 3a)(1 + 4a)) with a = lambda_O / (n lambda_D);
/// the product form avoids the cancellation of the alternating sum.
inline double exp_moment_closed_form(double lambda_d, double lambda_o, std::size_t n) {
  detail::require_positive(lambda_d, "lambda_d");
  detail::require_positive(lambda_o, "lambda_o");
  if (n == 0) throw DomainError("n must be at least 1");
  const double a = lambda_o / (static_cast<double>(n) * lambda_d);
  return 24.0 * a * a * a * a / ((1.0 + a) * (1.0 + 2.0 * a) * (1.0 + 3.0 * a) * (1.0 + 4.0 * a));
}

inline double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i)
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

/// C(n, 5) * 125 * e4; zero when n < 5.
inline double five_tree_bound(std::size_t n, double e4) {
  if (n < 5) return 0.0;
  if (!(e4 >= 0.0 && e4 <= 1.0)) throw DomainError("fourth moment must lie in [0, 1]");
  return binomial(n, 5) * 125.0 * e4;
}

// ---------------------------------------------------------------------------
// Monte Carlo over full matrices.

struct TrialRecord {
  std::uint64_t trial = 0;
  double m_n = 0.0;
  double q_n = 0.0;
  std::size_t max_component = 0;
  std::size_t edge_count = 0;
  bool certified = false;
  std::optional<double> value;
};

struct SimulationOptions {
  std::uint64_t trials = 1000;
  std::uint64_t seed = 0;
  bool solve = false;
  /// With solve: run embed_rank_one and lower_bound_probe on certified trials.
  bool verify = false;
  std::size_t probe_samples = 100;
  std::size_t support_cap = 16;  // larger components count as capacity failures
  unsigned threads = 1;
  bool keep_records = false;
};

struct SimulationSummary {
  std::optional<EnsembleSpec> ensemble;
  std::size_t n = 0;
  std::uint64_t trials = 0;
  std::uint64_t large_component_count = 0;
  double freq_large_component = 0.0;
  double freq_large_component_stderr = 0.0;
  double freq_certified = 0.0;
  double mean_q4 = 0.0;
  double mean_q4_stderr = 0.0;
  double five_tree_bound = 0.0;
  std::optional<double> goe_theory_bound;  // (ln n)^2 / n^3 reference scale, GOE only
  std::uint64_t solved = 0;
  std::uint64_t capacity_failures = 0;
  std::uint64_t verify_failures = 0;
  std::uint64_t near_ties = 0;
};

struct SimulationResult {
  SimulationSummary summary;
  std::vector<TrialRecord> records;  // filled when keep_records
};

/// Generic driver: `generate(trial)` returns the trial's matrix and
/// `edge_prob(m)` returns F_O(m). Graph statistics come from the materialized
/// matrix, never from the order-statistic shortcut.
template <class Generator, class EdgeProbability>
SimulationResult simulate_with(Generator&& generate, EdgeProbability&& edge_prob, std::size_t n,
                               const SimulationOptions& opts) {
  if (opts.trials == 0) throw DomainError("trials must be at least 1");
  if (opts.verify && !opts.solve) throw DomainError("verification requires solving");

  struct Acc {
    std::uint64_t large = 0, certified = 0, solved = 0, capacity = 0, verify_fail = 0, ties = 0;
    double q4 = 0.0, q4_sq = 0.0;
    std::vector<TrialRecord> records;
  };
  const SolveOptions solve_opts{opts.support_cap, {}};

  auto parts = map_chunks(opts.trials, 1024, opts.threads, [&](std::uint64_t b, std::uint64_t e) {
    Acc acc;
    for (std::uint64_t t = b; t < e; ++t) {
      const SymmetricMatrix q = generate(t);
      auto d = build_defect_graph(q);
      TrialRecord rec;
      rec.trial = t;
      rec.m_n = d.m_n;
      rec.q_n = edge_prob(d.m_n);
      rec.max_component = max_component_size(d);
      rec.edge_count = d.edge_count;
      rec.certified = rec.max_component <= kExactBlockSize;
      const double q2 = rec.q_n * rec.q_n;
      acc.q4 += q2 * q2;
      acc.q4_sq += q2 * q2 * q2 * q2;
      if (rec.certified)
        ++acc.certified;
      else
        ++acc.large;

      if (opts.solve) {
        try {
          const auto sol = solve(q, std::move(d), solve_opts);
          rec.value = sol.value;
          ++acc.solved;
          if (sol.near_tie_flag) ++acc.ties;
          if (opts.verify && sol.certified_exact_dnn) {
            bool ok = true;
            try {
              embed_rank_one(q, sol);
            } catch (const ConsistencyError&) {
              ok = false;
            }
            if (ok) ok = lower_bound_probe(q, sol, opts.probe_samples, mix64(opts.seed ^ t)).passed;
            if (!ok) ++acc.verify_fail;
          }
        } catch (const CapacityError&) {
          ++acc.capacity;
        }
      }
      if (opts.keep_records) acc.records.push_back(rec);
    }
    return acc;
  });

  SimulationResult res;
  auto& s = res.summary;
  Acc total;
  for (auto& p : parts) {
    total.large += p.large;
    total.certified += p.certified;
    total.solved += p.solved;
    total.capacity += p.capacity;
    total.verify_fail += p.verify_fail;
    total.ties += p.ties;
    total.q4 += p.q4;
    total.q4_sq += p.q4_sq;
    if (opts.keep_records)
      res.records.insert(res.records.end(), std::make_move_iterator(p.records.begin()),
                         std::make_move_iterator(p.records.end()));
  }
  const double T = static_cast<double>(opts.trials);
  s.n = n;
  s.trials = opts.trials;
  s.large_component_count = total.large;
  s.freq_large_component = static_cast<double>(total.large) / T;
  s.freq_large_component_stderr = std::sqrt(s.freq_large_component * (1.0 - s.freq_large_component) / T);
  s.freq_certified = static_cast<double>(total.certified) / T;
  s.mean_q4 = total.q4 / T;
  const double var = opts.trials > 1 ? std::max(0.0, (total.q4_sq - T * s.mean_q4 * s.mean_q4) / (T - 1.0)) : 0.0;
  s.mean_q4_stderr = std::sqrt(var / T);
  s.five_tree_bound = n >= 5 ? binomial(n, 5) * 125.0 * s.mean_q4 : 0.0;
  s.solved = total.solved;
  s.capacity_failures = total.capacity;
  s.verify_failures = total.verify_fail;
  s.near_ties = total.ties;
  return res;
}

inline SimulationResult simulate(const EnsembleSpec& spec, std::size_t n, const SimulationOptions& opts) {
  validate(spec);
  if (n == 0) throw DomainError("n must be at least 1");
  const auto ol = detail::off_law(spec);
  auto res = simulate_with([&](std::uint64_t t) { return sample_matrix(spec, n, opts.seed, t); },
                           [&](double m) { return ol.cdf(m); }, n, opts);
  res.summary.ensemble = spec;
  if (std::holds_alternative<Goe>(spec)) {
    const double ln = std::log(static_cast<double>(n));
    res.summary.goe_theory_bound = ln * ln / std::pow(static_cast<double>(n), 3.0);
  }
  return res;
}

// ---------------------------------------------------------------------------
// Tail-decay classification.

enum class Verdict { satisfied, violated };
enum class Trend { decreasing, increasing, inconclusive };

constexpr std::string_view to_string(Verdict v) noexcept {
  return v == Verdict::satisfied ? "SATISFIED" : "VIOLATED";
}

constexpr std::string_view to_string(Trend t) noexcept {
  switch (t) {
    case Trend::decreasing: return "decreasing";
    case Trend::increasing: return "increasing";
    case Trend::inconclusive: return "inconclusive";
  }
  return "?";
}

struct TailPoint {
  std::size_t n;
  double moment;  // E[F_O(m_n)^4]
  double scaled;  // n^5 * moment
};

struct TailReport {
  std::vector<TailPoint> points;
  double slope = 0.0;  // least squares, log scaled vs log n
  Trend trend = Trend::inconclusive;
  Verdict theory = Verdict::violated;
  std::string condition;
  bool agrees = false;
};

/// Theoretical verdict from the sufficient parameter inequalities for
/// n^5 E[F_O(m_n)^4] -> 0. Shifted exponentials are endpoint laws with both
/// exponents equal to 1 and never meet the strict inequality.
inline std::pair<Verdict, std::string> tail_theory(const EnsembleSpec& spec) {
  auto v = [](bool ok) { return ok ? Verdict::satisfied : Verdict::violated; };
  return std::visit(
      detail::overloaded{
          [&](const Goe&) { return std::pair{v(0.5 < 0.8), std::string("sigma2 < 4/5 gamma2 (0.5 < 0.8)")}; },
          [&](const GaussianWigner& w) {
            return std::pair{v(w.sigma2 < 0.8 * w.gamma2), std::string("sigma2 < 4/5 gamma2")};
          },
          [&](const HeavyTail& h) {
            return std::pair{v(h.alpha_o > 1.25 * h.alpha_d), std::string("alpha_o > 5/4 alpha_d")};
          },
          [&](const EndpointPower& e) {
            return std::pair{v(e.beta_o > 1.25 * e.beta_d), std::string("beta_o > 5/4 beta_d")};
          },
          [&](const ShiftedExponential&) {
            return std::pair{Verdict::violated, std::string("beta_o > 5/4 beta_d with beta_d = beta_o = 1")};
          },
      },
      spec);
}

/// |slope| below this is reported as inconclusive.
inline constexpr double kTrendThreshold = 0.1;

inline TailReport tail_condition_report(const EnsembleSpec& spec, std::span<const std::size_t> n_grid) {
  validate(spec);
  if (n_grid.size() < 3) throw DomainError("tail report needs at least three grid sizes");
  for (std::size_t i = 1; i < n_grid.size(); ++i)
    if (n_grid[i] <= n_grid[i - 1]) throw DomainError("grid sizes must be strictly increasing");
  if (n_grid.front() == 0) throw DomainError("grid sizes must be positive");

  TailReport r;
  std::tie(r.theory, r.condition) = tail_theory(spec);
  bool all_positive = true;
  for (std::size_t n : n_grid) {
    const auto m = moment_quadrature(spec, n, 4);
    r.points.push_back({n, m.estimate, m.scaled});
    all_positive = all_positive && m.scaled > 0.0;
  }

  if (all_positive) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(r.points.size());
    for (const auto& p : r.points) {
      const double x = std::log(static_cast<double>(p.n));
      const double y = std::log(p.scaled);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    r.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    if (r.slope < -kTrendThreshold)
      r.trend = Trend::decreasing;
    else if (r.slope > kTrendThreshold)
      r.trend = Trend::increasing;
  }
  r.agrees = (r.theory == Verdict::satisfied && r.trend == Trend::decreasing) ||
             (r.theory == Verdict::violated && r.trend == Trend::increasing);
  return r;
}

}  // namespace stqp
