#pragma once

// Command-line front end. Exit codes: 0 success (certified), 2 usage or I/O
// error, 3 success without the exactness certificate, 4 capacity error.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stqp/io.hpp"
#include "stqp/oracle.hpp"
#include "stqp/stqp.hpp"

namespace stqp::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kUncertified = 3, kCapacity = 4 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnsembleFlags {
  std::string name = "goe";
  GaussianWigner wigner;
  HeavyTail heavy;
  EndpointPower endpoint;
  ShiftedExponential exponential;

  void add(CLI::App* app) {
    app->add_option("--ensemble", name, "Random matrix model")
        ->check(CLI::IsMember({"goe", "wigner", "heavy-tail", "endpoint-power", "shifted-exp"}))
        ->capture_default_str();
    app->add_option("--gamma2", wigner.gamma2, "wigner: diagonal variance")->capture_default_str();
    app->add_option("--sigma2", wigner.sigma2, "wigner: off-diagonal variance")->capture_default_str();
    app->add_option("--alpha-d", heavy.alpha_d, "heavy-tail: diagonal exponent")->capture_default_str();
    app->add_option("--alpha-o", heavy.alpha_o, "heavy-tail: off-diagonal exponent")->capture_default_str();
    app->add_option("--a", endpoint.a, "endpoint-power / shifted-exp: lower endpoint is -a")
        ->capture_default_str();
    app->add_option("--beta-d", endpoint.beta_d, "endpoint-power: diagonal exponent")->capture_default_str();
    app->add_option("--beta-o", endpoint.beta_o, "endpoint-power: off-diagonal exponent")->capture_default_str();
    app->add_option("--lambda-d", exponential.lambda_d, "shifted-exp: diagonal rate")->capture_default_str();
    app->add_option("--lambda-o", exponential.lambda_o, "shifted-exp: off-diagonal rate")->capture_default_str();
  }

  EnsembleSpec spec() const {
    EnsembleSpec s;
    if (name == "goe") s = Goe{};
    else if (name == "wigner") s = wigner;
    else if (name == "heavy-tail") s = heavy;
    else if (name == "endpoint-power") s = endpoint;
    else s = ShiftedExponential{endpoint.a, exponential.lambda_d, exponential.lambda_o};
    try {
      validate(s);
    } catch (const ParameterError& e) {
      throw UsageError(e.what());
    }
    return s;
  }
};

namespace detail {

inline SymmetricMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  try {
    return read_matrix(in);
  } catch (const FormatError& e) {
    throw UsageError(path + ": " + e.what());
  } catch (const DomainError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

inline void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << body;
  if (!out) throw UsageError("write to '" + path + "' failed");
}

inline std::string sci(double v, int prec = 6) {
  std::ostringstream s;
  s << std::setprecision(prec) << std::scientific << v;
  return s.str();
}

}  // namespace detail

/// Runs one invocation; `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact standard quadratic programs over defect-graph components"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "Sample a random instance to a matrix file");
  EnsembleFlags gen_ens;
  gen_ens.add(gen);
  std::size_t gen_n = 0;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--n", gen_n, "Dimension")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output matrix file")->required();

  // solve
  auto* sol = app.add_subcommand("solve", "Solve an instance exactly and print the solution JSON");
  EnsembleFlags sol_ens;
  sol_ens.add(sol);
  std::string sol_input;
  std::size_t sol_n = 0;
  std::uint64_t sol_seed = 0;
  std::size_t sol_cap = 25;
  auto* sol_input_opt = sol->add_option("--input", sol_input, "Matrix file");
  auto* sol_n_opt = sol->add_option("--n", sol_n, "Dimension for inline generation")->check(CLI::PositiveNumber);
  sol->add_option("--seed", sol_seed, "Seed for inline generation")->capture_default_str();
  sol->add_option("--support-cap", sol_cap, "Largest component solved by enumeration")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sol_input_opt->excludes(sol_n_opt);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Monte Carlo over full random instances");
  EnsembleFlags sim_ens;
  sim_ens.add(sim);
  std::size_t sim_n = 0;
  SimulationOptions sim_opts;
  std::string sim_out;
  bool sim_json = false;
  sim->add_option("--n", sim_n, "Dimension")->required()->check(CLI::PositiveNumber);
  sim->add_option("--trials", sim_opts.trials, "Number of trials")->capture_default_str()->check(CLI::PositiveNumber);
  sim->add_option("--seed", sim_opts.seed, "Random seed")->capture_default_str();
  sim->add_option("--threads", sim_opts.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  sim->add_option("--out", sim_out, "JSON-lines file of per-trial records");
  sim->add_flag("--solve", sim_opts.solve, "Solve every trial");
  sim->add_flag("--verify", sim_opts.verify, "Check rank-one embedding and probe lower bounds (implies --solve)");
  sim->add_option("--probe-samples", sim_opts.probe_samples, "Lower-bound probe samples per trial")
      ->capture_default_str();
  sim->add_option("--support-cap", sim_opts.support_cap, "Largest component solved by enumeration")
      ->capture_default_str();
  sim->add_flag("--json", sim_json, "Print the summary as JSON");

  // moments
  auto* mom = app.add_subcommand("moments", "Moments E[F_O(m_n)^s] of the defect-edge probability");
  EnsembleFlags mom_ens;
  mom_ens.add(mom);
  unsigned mom_power = 4;
  std::string mom_method = "quadrature";
  std::vector<std::size_t> mom_grid;
  std::uint64_t mom_trials = 100000;
  std::uint64_t mom_seed = 0;
  unsigned mom_threads = 1;
  bool mom_json = false;
  mom->add_option("--power", mom_power, "Moment order s")->capture_default_str();
  mom->add_option("--method", mom_method, "Estimator")
      ->check(CLI::IsMember({"mc", "quadrature", "closed-form"}))
      ->capture_default_str();
  mom->add_option("--n-grid,--n", mom_grid, "Comma-separated dimensions")->delimiter(',')->required();
  mom->add_option("--trials", mom_trials, "Monte Carlo trials")->capture_default_str()->check(CLI::PositiveNumber);
  mom->add_option("--seed", mom_seed, "Random seed")->capture_default_str();
  mom->add_option("--threads", mom_threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  mom->add_flag("--json", mom_json, "Print JSON");

  // check-tail
  auto* tail = app.add_subcommand("check-tail", "Classify the tail-decay condition on a grid of n");
  EnsembleFlags tail_ens;
  tail_ens.add(tail);
  std::vector<std::size_t> tail_grid;
  bool tail_as_json = false;
  tail->add_option("--n-grid", tail_grid, "Comma-separated increasing dimensions")->delimiter(',')->required();
  tail->add_flag("--json", tail_as_json, "Print JSON");

  // oracle (debugging aid, not listed in help)
  auto* orc = app.add_subcommand("oracle", "Brute-force solve over all supports");
  orc->group("");
  std::string orc_input;
  std::size_t orc_cap = 16;
  orc->add_option("--input", orc_input, "Matrix file")->required();
  orc->add_option("--cap", orc_cap, "Largest n accepted")->capture_default_str();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (gen->parsed()) {
      const auto spec = gen_ens.spec();
      const auto q = sample_matrix(spec, gen_n, gen_seed);
      std::ostringstream body;
      write_matrix(body, q);
      detail::write_text_file(gen_out, body.str());
      out << json{{"ensemble", ensemble_json(spec)}, {"n", gen_n}, {"seed", gen_seed}}.dump() << "\n";
      return kOk;
    }

    if (sol->parsed()) {
      SymmetricMatrix q;
      json echo;
      if (!sol_input.empty()) {
        q = detail::load_matrix(sol_input);
      } else if (sol_n > 0) {
        const auto spec = sol_ens.spec();
        q = sample_matrix(spec, sol_n, sol_seed);
        echo = ensemble_json(spec);
      } else {
        throw UsageError("solve needs --input or --n");
      }
      try {
        const auto s = solve(q, SolveOptions{sol_cap, {}});
        auto j = solution_json(s);
        if (!echo.is_null()) j["ensemble"] = echo;
        out << j.dump() << "\n";
        return s.certified_exact_dnn ? kOk : kUncertified;
      } catch (const CapacityError& e) {
        err << "error: " << e.what() << "\n";
        out << json{{"error", "capacity"},
                    {"component", e.component_index()},
                    {"component_size", e.component_size()},
                    {"support_cap", e.cap()}}
                   .dump()
            << "\n";
        return kCapacity;
      }
    }

    if (sim->parsed()) {
      const auto spec = sim_ens.spec();
      if (sim_opts.verify) sim_opts.solve = true;
      sim_opts.keep_records = !sim_out.empty();
      const auto res = simulate(spec, sim_n, sim_opts);
      if (!sim_out.empty()) {
        std::ostringstream body;
        for (const auto& r : res.records) body << trial_json(r).dump() << "\n";
        detail::write_text_file(sim_out, body.str());
      }
      const auto& s = res.summary;
      if (sim_json) {
        out << summary_json(s).dump() << "\n";
      } else {
        out << "ensemble            " << ensemble_json(spec).dump() << "\n"
            << "n                   " << s.n << "\n"
            << "trials              " << s.trials << "\n"
            << "freq_large_comp     " << detail::sci(s.freq_large_component) << " +- "
            << detail::sci(s.freq_large_component_stderr, 2) << "\n"
            << "freq_certified      " << std::setprecision(8) << s.freq_certified << "\n"
            << "mean_q4             " << detail::sci(s.mean_q4) << "\n"
            << "five_tree_bound     " << detail::sci(s.five_tree_bound) << "\n";
        if (s.goe_theory_bound) out << "(ln n)^2/n^3        " << detail::sci(*s.goe_theory_bound) << "\n";
        if (sim_opts.solve)
          out << "solved              " << s.solved << "\n"
              << "capacity_failures   " << s.capacity_failures << "\n"
              << "near_ties           " << s.near_ties << "\n";
        if (sim_opts.verify) out << "verify_failures     " << s.verify_failures << "\n";
      }
      return kOk;
    }

    if (mom->parsed()) {
      const auto spec = mom_ens.spec();
      if (mom_method == "closed-form") {
        if (!std::holds_alternative<ShiftedExponential>(spec))
          throw UsageError("closed-form moments exist only for --ensemble shifted-exp");
        if (mom_power != 4) throw UsageError("closed-form moments are implemented for --power 4");
      }
      json rows = json::array();
      std::vector<MomentReport> reports;
      for (std::size_t n : mom_grid) {
        if (n == 0) throw UsageError("grid dimensions must be positive");
        MomentReport r;
        if (mom_method == "mc") {
          r = moment_mc(spec, n, mom_power, mom_trials, mom_seed, mom_threads);
        } else if (mom_method == "quadrature") {
          r = moment_quadrature(spec, n, mom_power);
        } else {
          const auto& e = std::get<ShiftedExponential>(spec);
          r.n = n;
          r.s = 4;
          r.method = MomentMethod::closed_form;
          r.estimate = exp_moment_closed_form(e.lambda_d, e.lambda_o, n);
          r.scaled = std::pow(static_cast<double>(n), 5.0) * r.estimate;
        }
        reports.push_back(r);
        rows.push_back(moment_json(r));
      }
      if (mom_json) {
        out << json{{"ensemble", ensemble_json(spec)}, {"reports", rows}}.dump() << "\n";
      } else {
        out << std::left << std::setw(10) << "n" << std::setw(4) << "s" << std::setw(16) << "estimate"
            << std::setw(12) << "stderr" << std::setw(16) << "scaled" << "method\n";
        for (const auto& r : reports)
          out << std::left << std::setw(10) << r.n << std::setw(4) << r.s << std::setw(16) << detail::sci(r.estimate)
              << std::setw(12) << detail::sci(r.std_error, 2) << std::setw(16)
              << (std::isfinite(r.scaled) ? detail::sci(r.scaled) : std::string("-")) << to_string(r.method)
              << "\n";
      }
      return kOk;
    }

    if (tail->parsed()) {
      const auto spec = tail_ens.spec();
      TailReport r;
      try {
        r = tail_condition_report(spec, tail_grid);
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
      if (tail_as_json) {
        auto j = tail_json(r);
        j["ensemble"] = ensemble_json(spec);
        out << j.dump() << "\n";
      } else {
        out << std::left << std::setw(10) << "n" << std::setw(16) << "E[q^4]" << "n^5 E[q^4]\n";
        for (const auto& p : r.points)
          out << std::left << std::setw(10) << p.n << std::setw(16) << detail::sci(p.moment) << detail::sci(p.scaled)
              << "\n";
        out << "slope      " << std::setprecision(4) << r.slope << "\n"
            << "trend      " << to_string(r.trend) << "\n"
            << "theory     " << to_string(r.theory) << "  (" << r.condition << ")\n"
            << "agrees     " << (r.agrees ? "yes" : "no") << "\n";
      }
      return kOk;
    }

    if (orc->parsed()) {
      const auto q = detail::load_matrix(orc_input);
      try {
        const auto r = brute_force_stqp(q, orc_cap);
        json support = json::array();
        for (auto i : r.support) support.push_back(i + 1);
        out << json{{"n", q.size()}, {"value", r.value}, {"support", support}, {"x", r.x}, {"near_tie", r.near_tie}}
                   .dump()
            << "\n";
        return kOk;
      } catch (const CapacityError& e) {
        err << "error: " << e.what() << "\n";
        return kCapacity;
      }
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace stqp::cli
