#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "stqp/ensemble.hpp"
#include "stqp/stats.hpp"
#include "test_support.hpp"

using namespace stqp;

namespace {

// E[q_n^4] for GOE, computed to 30 digits with an independent
// arbitrary-precision integrator and rounded to double.
struct Frozen {
  std::size_t n;
  double e4;
};
constexpr Frozen kGoeFourth[] = {
    {10, 4.7967413215136147e-4},  {50, 5.6168266056963581e-8},   {100, 5.3119049453265042e-10},
    {200, 3.9268885971795837e-12}, {400, 2.4852733537302664e-14}, {800, 1.4240409835070626e-16},
};

double naive_exp_moment(double ld, double lo, std::size_t n) {
  const double c[] = {1, 4, 6, 4, 1};
  double sum = 0.0;
  for (int k = 0; k <= 4; ++k) {
    const double nl = static_cast<double>(n) * ld;
    sum += (k % 2 ? -1.0 : 1.0) * c[k] * nl / (nl + k * lo);
  }
  return sum;
}

std::vector<EnsembleSpec> closed_form_variants() {
  return {Goe{}, GaussianWigner{1.0, 0.9}, HeavyTail{2.0, 3.0}, EndpointPower{0.0, 1.0, 2.0},
          ShiftedExponential{0.0, 1.0, 1.0}};
}

}  // namespace

TEST(DiagMinSample, SingleDiagonalIsAPlainDraw) {
  std::vector<double> xs;
  for (std::uint64_t t = 0; t < 50000; ++t) {
    CounterStream s(1, t);
    xs.push_back(sample_diag_min(HeavyTail{2.0, 3.0}, 1, s));
  }
  EXPECT_LE(ref::ks_distance(xs, [](double t) { return diag_cdf(HeavyTail{2.0, 3.0}, t); }), 0.01);
}

TEST(DiagMinSample, MatchesExplicitMinimum) {
  for (const auto& spec : closed_form_variants()) {
    std::vector<double> fast, slow;
    for (std::uint64_t t = 0; t < 100000; ++t) {
      CounterStream s(2, t);
      fast.push_back(sample_diag_min(spec, 10, s));
      CounterStream d(3, t);
      double m = diag_quantile(spec, d.uniform());
      for (int i = 1; i < 10; ++i) m = std::min(m, diag_quantile(spec, d.uniform()));
      slow.push_back(m);
    }
    EXPECT_LE(ref::ks_two_sample(fast, slow), 0.01) << variant_name(spec);
  }
}

TEST(DiagMinSample, GoeMinimumConcentratesNearExtremeValue) {
  std::vector<double> xs;
  for (std::uint64_t t = 0; t < 20001; ++t) {
    CounterStream s(4, t);
    xs.push_back(sample_diag_min(Goe{}, 10000, s));
  }
  std::nth_element(xs.begin(), xs.begin() + 10000, xs.end());
  const double median = xs[10000];
  const double target = -std::sqrt(2.0 * std::log(10000.0));
  EXPECT_LE(std::abs(median / target - 1.0), 0.15);
}

TEST(MomentMc, ZeroPowerIsOne) {
  const auto r = moment_mc(Goe{}, 10, 0, 5, 0);
  EXPECT_EQ(r.estimate, 1.0);
  EXPECT_EQ(r.method, MomentMethod::monte_carlo);
  EXPECT_EQ(moment_quadrature(Goe{}, 10, 0).estimate, 1.0);
  EXPECT_THROW(moment_mc(Goe{}, 10, 4, 0, 0), DomainError);
}

TEST(MomentMc, ThreadCountDoesNotChangeResult) {
  const auto a = moment_mc(Goe{}, 100, 4, 50000, 17, 1);
  const auto b = moment_mc(Goe{}, 100, 4, 50000, 17, 8);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_EQ(a.std_error, b.std_error);
}

TEST(MomentMc, GoeAgreesWithQuadrature) {
  const auto mc = moment_mc(Goe{}, 100, 4, 1000000, 2718, 4);
  const auto qd = moment_quadrature(Goe{}, 100, 4);
  EXPECT_LE(std::abs(mc.estimate - qd.estimate), 4.0 * mc.std_error);
}

TEST(MomentMc, ExponentialAgreesWithClosedForm) {
  const auto mc = moment_mc(ShiftedExponential{0.0, 1.0, 1.0}, 100, 4, 1000000, 31, 4);
  EXPECT_LE(std::abs(mc.estimate - exp_moment_closed_form(1.0, 1.0, 100)), 4.0 * mc.std_error);
}

TEST(MomentMc, AgreesWithQuadratureAcrossEnsembles) {
  for (const auto& spec : closed_form_variants())
    for (std::size_t n : {10u, 100u, 1000u})
      for (unsigned s : {1u, 4u}) {
        const auto mc = moment_mc(spec, n, s, 200000, 1000 + n + s, 4);
        const auto qd = moment_quadrature(spec, n, s);
        EXPECT_LE(std::abs(mc.estimate - qd.estimate), 4.0 * std::hypot(mc.std_error, qd.quadrature_error))
            << variant_name(spec) << " n=" << n << " s=" << s;
        EXPECT_GE(qd.estimate, 0.0);
        EXPECT_LE(qd.estimate, 1.0);
      }
}

TEST(MomentQuadrature, FrozenGoeValues) {
  for (const auto& f : kGoeFourth) {
    const auto r = moment_quadrature(Goe{}, f.n, 4);
    EXPECT_NEAR(r.estimate / f.e4, 1.0, 1e-8) << "n=" << f.n;
    EXPECT_NEAR(r.scaled, std::pow(static_cast<double>(f.n), 5.0) * r.estimate, 1e-12 * r.scaled);
  }
  EXPECT_NEAR(moment_quadrature(Goe{}, 10, 1).estimate / 0.043753497034737537, 1.0, 1e-8);
  EXPECT_NEAR(moment_quadrature(GaussianWigner{1.0, 0.9}, 100, 4).estimate / 9.8655552744642452e-8, 1.0,
              1e-8);
}

TEST(MomentQuadrature, EqualLawsGiveBetaIntegral) {
  const std::vector<EnsembleSpec> equal{HeavyTail{2.5, 2.5}, EndpointPower{0.3, 1.7, 1.7},
                                        ShiftedExponential{1.0, 2.0, 2.0}};
  for (const auto& spec : equal)
    for (std::size_t n : {1u, 2u, 10u, 100u, 10000u}) {
      const double expected = 1.0 / static_cast<double>(n + 1);
      EXPECT_NEAR(moment_quadrature(spec, n, 1).estimate / expected, 1.0, 1e-8)
          << variant_name(spec) << " n=" << n;
    }
}

TEST(MomentQuadrature, PowerTransferMatchesBetaOracle) {
  // F_O(F_D^-1(u)) = u^(s alpha_o / alpha_d) for heavy tails, u^(s beta_o / beta_d) at endpoints.
  for (std::size_t n : {5u, 50u, 500u, 10000u}) {
    EXPECT_NEAR(moment_quadrature(HeavyTail{2.0, 3.0}, n, 4).estimate / ref::beta_moment(6.0, n), 1.0,
                1e-8);
    EXPECT_NEAR(moment_quadrature(EndpointPower{0.0, 1.0, 1.3}, n, 4).estimate / ref::beta_moment(5.2, n),
                1.0, 1e-8);
  }
}

TEST(MomentQuadrature, ExponentialMatchesClosedForm) {
  for (std::size_t n : {1u, 3u, 100u, 10000u, 20000u}) {
    const auto r = moment_quadrature(ShiftedExponential{0.5, 1.0, 1.0}, n, 4);
    EXPECT_NEAR(r.estimate / exp_moment_closed_form(1.0, 1.0, n), 1.0, 1e-8) << "n=" << n;
  }
  const auto r = moment_quadrature(ShiftedExponential{0.0, 2.0, 0.5}, 300, 4);
  EXPECT_NEAR(r.estimate / exp_moment_closed_form(2.0, 0.5, 300), 1.0, 1e-8);
}

TEST(ClosedForm, MatchesBinomialSumAtSmallN) {
  for (std::size_t n : {1u, 2u, 5u, 10u})
    for (double lo : {0.5, 1.0, 3.0})
      EXPECT_NEAR(exp_moment_closed_form(1.0, lo, n), naive_exp_moment(1.0, lo, n), 1e-13);
}

TEST(ClosedForm, AsymptoticExamples) {
  EXPECT_LT(exp_moment_closed_form(1.0, 1e-12, 10), 1e-40);
  const double e = exp_moment_closed_form(1.0, 1.0, 10000);
  EXPECT_LE(std::abs(e / 2.4e-15 - 1.0), 0.02);
  const double r = std::pow(2.0, 5.0) * exp_moment_closed_form(1.0, 1.0, 20000) / e;
  EXPECT_LE(std::abs(r / 2.0 - 1.0), 0.05);
  EXPECT_THROW(exp_moment_closed_form(0.0, 1.0, 10), ParameterError);
}

TEST(FiveTree, Examples) {
  EXPECT_EQ(five_tree_bound(50, 0.0), 0.0);
  EXPECT_EQ(five_tree_bound(5, 1.0), 125.0);
  EXPECT_NEAR(five_tree_bound(20, 1e-9), 15504.0 * 125.0 * 1e-9, 1e-18);
  EXPECT_EQ(five_tree_bound(4, 0.5), 0.0);
  EXPECT_THROW(five_tree_bound(10, 1.5), DomainError);
  EXPECT_EQ(binomial(20, 5), 15504.0);
  EXPECT_EQ(binomial(100, 5), 75287520.0);
}

TEST(Simulate, SingleTrialSummaryMatchesRecord) {
  SimulationOptions o;
  o.trials = 1;
  o.seed = 12;
  o.solve = true;
  o.keep_records = true;
  const auto r = simulate(Goe{}, 30, o);
  ASSERT_EQ(r.records.size(), 1u);
  const auto& rec = r.records[0];
  const auto& s = r.summary;
  EXPECT_EQ(s.freq_large_component, rec.certified ? 0.0 : 1.0);
  EXPECT_EQ(s.freq_certified, rec.certified ? 1.0 : 0.0);
  EXPECT_EQ(s.mean_q4, std::pow(rec.q_n, 4));
  EXPECT_TRUE(rec.value.has_value());
  EXPECT_EQ(rec.m_n, build_defect_graph(sample_matrix(Goe{}, 30, 12, 0)).m_n);
  EXPECT_EQ(rec.q_n, edge_probability(Goe{}, rec.m_n));
  ASSERT_TRUE(s.goe_theory_bound.has_value());
}

TEST(Simulate, SummaryInvariants) {
  SimulationOptions o;
  o.trials = 3000;
  o.seed = 5;
  o.keep_records = true;
  for (const auto& spec : closed_form_variants()) {
    const auto r = simulate(spec, 12, o);
    const auto& s = r.summary;
    EXPECT_DOUBLE_EQ(s.freq_large_component + s.freq_certified, 1.0);
    EXPECT_DOUBLE_EQ(s.five_tree_bound, binomial(12, 5) * 125.0 * s.mean_q4);
    for (const auto& rec : r.records) {
      EXPECT_EQ(rec.certified, rec.max_component <= 4);
      EXPECT_GE(rec.q_n, 0.0);
      EXPECT_LE(rec.q_n, 1.0);
    }
  }
}

TEST(Simulate, ThreadCountDoesNotChangeSummary) {
  SimulationOptions o;
  o.trials = 5000;
  o.seed = 99;
  o.solve = true;
  o.verify = true;
  o.probe_samples = 10;
  o.keep_records = true;
  o.threads = 1;
  const auto a = simulate(GaussianWigner{1.0, 0.9}, 25, o);
  o.threads = 8;
  const auto b = simulate(GaussianWigner{1.0, 0.9}, 25, o);
  EXPECT_EQ(a.summary.freq_large_component, b.summary.freq_large_component);
  EXPECT_EQ(a.summary.mean_q4, b.summary.mean_q4);
  EXPECT_EQ(a.summary.mean_q4_stderr, b.summary.mean_q4_stderr);
  EXPECT_EQ(a.summary.verify_failures, b.summary.verify_failures);
  EXPECT_EQ(a.summary.near_ties, b.summary.near_ties);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].trial, i);
    EXPECT_EQ(a.records[i].m_n, b.records[i].m_n);
    EXPECT_EQ(a.records[i].value, b.records[i].value);
  }
}

TEST(Simulate, CompleteDefectGraphAlwaysFails) {
  const std::size_t n = 6;
  SimulationOptions o;
  o.trials = 50;
  const auto r = simulate_with(
      [&](std::uint64_t t) {
        SymmetricMatrix q(n);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = i; j < n; ++j) q.set(i, j, i == j ? static_cast<double>(t) : -1e9);
        return q;
      },
      [](double) { return 1.0; }, n, o);
  EXPECT_EQ(r.summary.freq_large_component, 1.0);
  EXPECT_EQ(r.summary.freq_certified, 0.0);
  EXPECT_EQ(r.summary.mean_q4, 1.0);
}

TEST(Simulate, BoundHoldsOnSmallGoeGrids) {
  for (std::size_t n : {10u, 15u, 20u, 30u}) {
    SimulationOptions o;
    o.trials = 100000;
    o.seed = 606 + n;
    o.threads = 4;
    const auto s = simulate(Goe{}, n, o).summary;
    const double bound = five_tree_bound(n, moment_quadrature(Goe{}, n, 4).estimate);
    EXPECT_LE(s.freq_large_component, bound + 3.0 * s.freq_large_component_stderr) << "n=" << n;
  }
}

TEST(Simulate, RejectsBadOptions) {
  SimulationOptions o;
  o.trials = 0;
  EXPECT_THROW(simulate(Goe{}, 5, o), DomainError);
  o.trials = 1;
  o.verify = true;
  EXPECT_THROW(simulate(Goe{}, 5, o), DomainError);
}

TEST(TailReport, Examples) {
  const std::vector<std::size_t> grid{100, 200, 400, 800};
  const auto goe = tail_condition_report(GaussianWigner{1.0, 0.5}, grid);
  EXPECT_EQ(goe.theory, Verdict::satisfied);
  EXPECT_EQ(goe.trend, Trend::decreasing);
  EXPECT_TRUE(goe.agrees);

  const auto wide = tail_condition_report(GaussianWigner{1.0, 0.9}, grid);
  EXPECT_EQ(wide.theory, Verdict::violated);
  EXPECT_EQ(wide.trend, Trend::increasing);

  const auto ex = tail_condition_report(ShiftedExponential{0.0, 1.0, 1.0}, grid);
  EXPECT_EQ(ex.theory, Verdict::violated);
  EXPECT_EQ(ex.trend, Trend::increasing);
  EXPECT_NEAR(ex.slope, 1.0, 0.05);
  ASSERT_EQ(ex.points.size(), 4u);
}

TEST(TailReport, GridValidation) {
  const std::vector<std::size_t> short_grid{100, 200};
  const std::vector<std::size_t> unsorted{100, 300, 200};
  EXPECT_THROW(tail_condition_report(Goe{}, short_grid), DomainError);
  EXPECT_THROW(tail_condition_report(Goe{}, unsorted), DomainError);
}

TEST(TailReport, FlatTrendIsInconclusive) {
  // n^5 E behaves like n^(5 - 4 beta_o / beta_d); a ratio of 5/4 leaves it flat.
  const std::vector<std::size_t> grid{100, 200, 400, 800};
  const auto r = tail_condition_report(EndpointPower{0.0, 1.0, 1.25}, grid);
  EXPECT_EQ(r.trend, Trend::inconclusive);
  EXPECT_FALSE(r.agrees);
}

TEST(TailReport, Names) {
  EXPECT_EQ(to_string(Verdict::satisfied), "SATISFIED");
  EXPECT_EQ(to_string(Verdict::violated), "VIOLATED");
  EXPECT_EQ(to_string(Trend::inconclusive), "inconclusive");
}
