#pragma once

// JSON views of solver and experiment results. Vertex indices are 1-based
// on the wire and 0-based in the C++ API.

#include <cmath>
#include <variant>

#include "json.hpp"
#include "stqp/ensemble.hpp"
#include "stqp/solver.hpp"
#include "stqp/stats.hpp"

namespace stqp {

using nlohmann::json;

inline json ensemble_json(const EnsembleSpec& spec) {
  json params = std::visit(
      detail::overloaded{
          [](const Goe&) { return json::object(); },
          [](const GaussianWigner& w) { return json{{"gamma2", w.gamma2}, {"sigma2", w.sigma2}}; },
          [](const HeavyTail& h) { return json{{"alpha_d", h.alpha_d}, {"alpha_o", h.alpha_o}}; },
          [](const EndpointPower& e) {
            return json{{"a", e.a}, {"beta_d", e.beta_d}, {"beta_o", e.beta_o}};
          },
          [](const ShiftedExponential& e) {
            return json{{"a", e.a}, {"lambda_d", e.lambda_d}, {"lambda_o", e.lambda_o}};
          },
      },
      spec);
  return json{{"variant", std::string(variant_name(spec))}, {"params", std::move(params)}};
}

inline json solution_json(const Solution& sol) {
  json support = json::array();
  for (auto i : sol.support) support.push_back(i + 1);
  return json{{"n", sol.n},
              {"value", sol.value},
              {"m_n", sol.m_n},
              {"shifted_value", sol.shifted_value},
              {"support", std::move(support)},
              {"weights", sol.weights},
              {"winning_component", sol.winning_component},
              {"certified_exact_dnn", sol.certified_exact_dnn},
              {"component_sizes", component_sizes(sol.defect)},
              {"near_tie", sol.near_tie_flag}};
}

inline json trial_json(const TrialRecord& r) {
  json j{{"trial", r.trial},       {"m_n", r.m_n},           {"q_n", r.q_n},
         {"max_component", r.max_component}, {"edge_count", r.edge_count}, {"certified", r.certified}};
  if (r.value) j["value"] = *r.value;
  return j;
}

inline json summary_json(const SimulationSummary& s) {
  json j{{"n", s.n},
         {"trials", s.trials},
         {"large_component_count", s.large_component_count},
         {"freq_large_component", s.freq_large_component},
         {"freq_large_component_stderr", s.freq_large_component_stderr},
         {"freq_certified", s.freq_certified},
         {"mean_q4", s.mean_q4},
         {"mean_q4_stderr", s.mean_q4_stderr},
         {"five_tree_bound", s.five_tree_bound},
         {"goe_theory_bound", s.goe_theory_bound ? json(*s.goe_theory_bound) : json(nullptr)},
         {"solved", s.solved},
         {"capacity_failures", s.capacity_failures},
         {"verify_failures", s.verify_failures},
         {"near_ties", s.near_ties}};
  if (s.ensemble) j["ensemble"] = ensemble_json(*s.ensemble);
  return j;
}

inline json moment_json(const MomentReport& m) {
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  return json{{"n", m.n},
              {"s", m.s},
              {"estimate", m.estimate},
              {"method", std::string(to_string(m.method))},
              {"stderr", m.std_error},
              {"scaled", num(m.scaled)}};
}

inline json tail_json(const TailReport& r) {
  json pts = json::array();
  for (const auto& p : r.points) pts.push_back({{"n", p.n}, {"moment", p.moment}, {"scaled", p.scaled}});
  return json{{"points", std::move(pts)},
              {"slope", r.slope},
              {"trend", std::string(to_string(r.trend))},
              {"theory", std::string(to_string(r.theory))},
              {"condition", r.condition},
              {"agrees", r.agrees}};
}

}  // namespace stqp
