#pragma once

// Random symmetric matrix models with independent diagonal and off-diagonal
// laws. Each variant names a diagonal law F_D and an off-diagonal law F_O;
// the heavy-tail and endpoint families are the pure-power representatives
// with unit tail constant and unit width.

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "stqp/error.hpp"
#include "stqp/matrix.hpp"
#include "stqp/rng.hpp"

namespace stqp {

/// Gaussian orthogonal ensemble: diagonal N(0,1), off-diagonal N(0,1/2).
struct Goe {};

/// Diagonal N(0, gamma2), off-diagonal N(0, sigma2).
struct GaussianWigner {
  double gamma2 = 1.0;
  double sigma2 = 0.5;
};

/// Negated Pareto laws: F(t) = |t|^-alpha for t <= -1, 1 above.
struct HeavyTail {
  double alpha_d = 2.0;
  double alpha_o = 3.0;
};

/// F(t) = (t + a)^beta on [-a, -a + 1], common endpoint -a.
struct EndpointPower {
  double a = 0.0;
  double beta_d = 1.0;
  double beta_o = 2.0;
};

/// F(t) = 1 - exp(-lambda (t + a)) for t >= -a.
struct ShiftedExponential {
  double a = 0.0;
  double lambda_d = 1.0;
  double lambda_o = 1.0;
};

using EnsembleSpec =
    std::variant<Goe, GaussianWigner, HeavyTail, EndpointPower, ShiftedExponential>;

namespace detail {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

inline double std_normal_cdf(double x) noexcept {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

inline double std_normal_quantile(double u) {
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * u);
}

/// One univariate law with closed-form CDF and quantile.
struct Law {
  enum class Kind { normal, neg_pareto, endpoint_power, shifted_exp } kind;
  double p1 = 0.0;  // normal: sd; pareto: alpha; endpoint/exp: a
  double p2 = 0.0;  // endpoint: beta; exp: lambda

  double cdf(double t) const noexcept {
    switch (kind) {
      case Kind::normal:
        return std_normal_cdf(t / p1);
      case Kind::neg_pareto:
        return t <= -1.0 ? std::pow(-t, -p1) : 1.0;
      case Kind::endpoint_power: {
        const double s = t + p1;
        if (s <= 0.0) return 0.0;
        if (s >= 1.0) return 1.0;
        return std::pow(s, p2);
      }
      case Kind::shifted_exp: {
        const double s = t + p1;
        return s <= 0.0 ? 0.0 : -std::expm1(-p2 * s);
      }
    }
    return 0.0;
  }

  double quantile(double u) const {
    switch (kind) {
      case Kind::normal:
        return p1 * std_normal_quantile(u);
      case Kind::neg_pareto:
        return -std::pow(u, -1.0 / p1);
      case Kind::endpoint_power:
        return -p1 + std::pow(u, 1.0 / p2);
      case Kind::shifted_exp:
        return -p1 - std::log1p(-u) / p2;
    }
    return 0.0;
  }

  double sample(CounterStream& s) const {
    if (kind == Kind::normal) return p1 * s.normal();
    return quantile(s.uniform());
  }
};

inline Law diag_law(const EnsembleSpec& spec) {
  using K = Law::Kind;
  return std::visit(
      overloaded{
          [](const Goe&) { return Law{K::normal, 1.0}; },
          [](const GaussianWigner& w) { return Law{K::normal, std::sqrt(w.gamma2)}; },
          [](const HeavyTail& h) { return Law{K::neg_pareto, h.alpha_d}; },
          [](const EndpointPower& e) { return Law{K::endpoint_power, e.a, e.beta_d}; },
          [](const ShiftedExponential& e) { return Law{K::shifted_exp, e.a, e.lambda_d}; },
      },
      spec);
}

inline Law off_law(const EnsembleSpec& spec) {
  using K = Law::Kind;
  return std::visit(
      overloaded{
          [](const Goe&) { return Law{K::normal, std::sqrt(0.5)}; },
          [](const GaussianWigner& w) { return Law{K::normal, std::sqrt(w.sigma2)}; },
          [](const HeavyTail& h) { return Law{K::neg_pareto, h.alpha_o}; },
          [](const EndpointPower& e) { return Law{K::endpoint_power, e.a, e.beta_o}; },
          [](const ShiftedExponential& e) { return Law{K::shifted_exp, e.a, e.lambda_o}; },
      },
      spec);
}

inline void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ParameterError(std::string(name) + " must be a finite positive number");
}

}  // namespace detail

/// Throws ParameterError when any rate, shape, or variance is not positive.
inline void validate(const EnsembleSpec& spec) {
  using detail::require_positive;
  std::visit(detail::overloaded{
                 [](const Goe&) {},
                 [](const GaussianWigner& w) {
                   require_positive(w.gamma2, "gamma2");
                   require_positive(w.sigma2, "sigma2");
                 },
                 [](const HeavyTail& h) {
                   require_positive(h.alpha_d, "alpha_d");
                   require_positive(h.alpha_o, "alpha_o");
                 },
                 [](const EndpointPower& e) {
                   if (!std::isfinite(e.a)) throw ParameterError("a must be finite");
                   require_positive(e.beta_d, "beta_d");
                   require_positive(e.beta_o, "beta_o");
                 },
                 [](const ShiftedExponential& e) {
                   if (!std::isfinite(e.a)) throw ParameterError("a must be finite");
                   require_positive(e.lambda_d, "lambda_d");
                   require_positive(e.lambda_o, "lambda_o");
                 },
             },
             spec);
}

inline std::string_view variant_name(const EnsembleSpec& spec) {
  constexpr std::string_view names[] = {"goe", "wigner", "heavy-tail", "endpoint-power",
                                        "shifted-exp"};
  return names[spec.index()];
}

inline double diag_cdf(const EnsembleSpec& spec, double t) {
  return detail::diag_law(spec).cdf(t);
}

inline double off_cdf(const EnsembleSpec& spec, double t) {
  return detail::off_law(spec).cdf(t);
}

inline double diag_quantile(const EnsembleSpec& spec, double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
  return detail::diag_law(spec).quantile(u);
}

inline double off_quantile(const EnsembleSpec& spec, double u) {
  if (!(u > 0.0 && u < 1.0)) throw DomainError("quantile level must lie in (0, 1)");
  return detail::off_law(spec).quantile(u);
}

/// Probability that an off-diagonal entry falls below m, i.e. F_O(m).
inline double edge_probability(const EnsembleSpec& spec, double m) { return off_cdf(spec, m); }

/// Symmetric n x n draw. Entry (i, j), i <= j, uses the counter stream keyed
/// by (seed, trial, i, j), so output is independent of generation order.
inline SymmetricMatrix sample_matrix(const EnsembleSpec& spec, std::size_t n, std::uint64_t seed,
                                     std::uint64_t trial = 0) {
  validate(spec);
  if (n == 0) throw ParameterError("n must be at least 1");
  const auto dl = detail::diag_law(spec);
  const auto ol = detail::off_law(spec);
  SymmetricMatrix q(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      CounterStream s(seed, trial, i, j);
      q.set(i, j, i == j ? dl.sample(s) : ol.sample(s));
    }
  }
  return q;
}

}  // namespace stqp
