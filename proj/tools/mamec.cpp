// mamec: command-line front end for the solver and experiment harness.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "mamec/experiments.hpp"
#include "mamec/testing/block_suite.hpp"
#include "mamec/testing/invariants.hpp"

using namespace mamec;

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kNumericFailure = 2;

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string mode;
  int jobs = 1;
  int count = 0;
};

// system/tasks/solver sections of a config document; an experiment section is
// allowed and ignored so one file can drive both subcommands
struct BaseConfig {
  SystemConfig system;
  TaskProfile tasks;
  SolverOptions solver;
};

BaseConfig load_base(const std::string& path) {
  BaseConfig b;
  if (path.empty()) return b;
  const Json doc = load_json(path);
  detail::reject_unknown(doc, {"system", "tasks", "solver", "experiment"}, "document");
  if (doc.contains("system")) b.system = system_from_json(doc.at("system"));
  if (doc.contains("tasks")) b.tasks = tasks_from_json(doc.at("tasks"));
  if (doc.contains("solver")) b.solver = solver_from_json(doc.at("solver"));
  return b;
}

int cmd_convergence(const Flags& f) {
  BaseConfig b = load_base(f.config);
  if (!f.mode.empty()) b.solver.mode = parse_mode(f.mode);
  b.solver.validate();
  const std::uint64_t seed = f.seed.value_or(b.solver.seed ? b.solver.seed : 1);
  const std::string out = f.out.empty() ? "convergence.csv" : f.out;
  const SolveResult r = run_convergence(b.system, b.tasks, b.solver, seed, out);
  const double viol = r.trace.empty() ? 0.0 : r.trace.back().violation;
  std::printf("mode %s  seed %llu  outer %d  converged %s  max_delay %.6f s  violation %.3e\n", mode_name(b.solver.mode),
              static_cast<unsigned long long>(seed), r.outer_iterations, r.converged ? "yes" : "no",
              r.solution.max_delay, viol);
  std::printf("wrote %s\n", out.c_str());
  return kOk;
}

int cmd_sweep(const Flags& f) {
  if (f.config.empty()) throw ConfigError("sweep needs --config");
  ExperimentSpec spec = experiment_from_json(load_json(f.config));
  if (!f.out.empty()) spec.output = f.out;
  if (!f.mode.empty()) spec.modes = {parse_mode(f.mode)};
  if (f.seed) spec.seeds = seed_range(spec.seeds.size(), *f.seed);
  spec.validate();
  const SweepResult rows = run_sweep(spec, f.jobs);
  std::printf("%-14s %-16s %12s %10s %8s %8s\n", sweep_variable_name(spec.variable), "mode", "mean delay", "stderr",
              "conv", "outer");
  for (const SweepRow& r : rows)
    std::printf("%-14g %-16s %12.6f %10.6f %8.2f %8.1f\n", r.value, mode_name(r.mode), r.mean_delay, r.stderr_delay,
                r.convergence_rate, r.mean_outer_iterations);
  std::printf("wrote %s.csv, %s_raw.csv, %s_manifest.json\n", spec.output.c_str(), spec.output.c_str(),
              spec.output.c_str());
  return kOk;
}

int cmd_validate(const Flags& f) {
  const int states = f.count > 0 ? f.count : 100;
  const auto checks = oracle::run_invariant_suite(states, f.seed.value_or(1));
  bool ok = true;
  std::printf("%-32s %8s %8s %12s\n", "invariant", "checked", "failed", "worst");
  for (const auto& c : checks) {
    ok = ok && c.pass();
    std::printf("%-32s %8d %8d %12.3e%s%s\n", c.name.c_str(), c.checked, c.failures, c.worst,
                c.pass() ? "" : "  first: ", c.first_failure.c_str());
  }
  std::printf("%s: %d random states\n", ok ? "all invariants hold" : "INVARIANT FAILURE", states);
  return ok ? kOk : kNumericFailure;
}

int cmd_oracle(const Flags& f) {
  const int n = f.count > 0 ? f.count : 200;
  const std::uint64_t seed = f.seed.value_or(7);
  bool ok = true;

  std::mt19937_64 rng(seed);
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    const Scenario sc = generate_scenario(SystemConfig{}, TaskProfile{}, rng());
    const Problem p = make_problem(sc);
    const AntennaLayout lay = initial_layout(p, Mode::FullMA, rng());
    const double wl = sc.config.wavelength_m;
    for (int k = 0; k < p.K; ++k) {
      const MatC R = oracle::uplink_triple_loop(lay.ue_positions[k], lay.bs_positions, lay.bs_height, sc.ue_paths[k],
                                                sc.rx_paths[k], wl);
      worst = std::max(worst, (uplink_channel(lay, k, sc.ue_paths[k], sc.rx_paths[k], wl) - R).norm() / R.norm());
    }
    const MatC JR = oracle::jammer_triple_loop(lay.bs_positions, lay.bs_height, sc.jam_rx_paths, sc.jam_tx_response, wl);
    worst = std::max(worst, (jammer_channel(lay, sc.jam_rx_paths, sc.jam_tx_response, wl) - JR).norm() / JR.norm());
  }
  ok = ok && worst <= 1e-12;
  std::printf("%-24s %9s %12s %12s %12s %8s  %s\n", "check", "instances", "max gap", "max KKT", "infeasible", "time",
              "result");
  std::printf("%-24s %9d %12.3e %12s %12s %8s  %s\n", "channel triple loop", n, worst, "-", "-", "-",
              worst <= 1e-12 ? "ok" : "FAIL");
  for (const auto& c : oracle::run_block_suite(n, seed)) {
    ok = ok && c.pass();
    std::printf("%-24s %9d %12.3e %12.3e %12.3e %7.2fs  %s%s\n", c.name.c_str(), c.instances, c.max_gap, c.max_kkt,
                c.max_infeasible, c.seconds, c.pass() ? "ok" : "FAIL", c.one_sided ? " (one-sided)" : "");
  }
  return ok ? kOk : kNumericFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Movable-antenna MEC delay minimization under jamming"};
  app.require_subcommand(1);
  Flags f;
  std::uint64_t seed = 0;
  auto common = [&](CLI::App* sub, bool config, bool mode, bool jobs) {
    if (config) sub->add_option("--config", f.config, "JSON config document");
    sub->add_option("--seed", seed, "random seed (first seed for sweeps)")->each([&](const std::string&) { f.seed = seed; });
    if (mode) sub->add_option("--mode", f.mode, "full-ma, fpa, receive-only-ma or local-only");
    if (jobs) sub->add_option("--jobs", f.jobs, "parallel workers")->check(CLI::PositiveNumber);
  };

  CLI::App* conv = app.add_subcommand("convergence", "solve one instance and write its outer-iteration trace");
  common(conv, true, true, false);
  conv->add_option("--out", f.out, "trace CSV path (default convergence.csv)");

  CLI::App* sweep = app.add_subcommand("sweep", "run a parameter sweep from a config document");
  common(sweep, true, true, true);
  sweep->add_option("--out", f.out, "output path prefix");

  CLI::App* val = app.add_subcommand("validate", "check state invariants along random solver trajectories");
  common(val, false, false, false);
  val->add_option("--states", f.count, "number of random states (default 100)")->check(CLI::PositiveNumber);

  CLI::App* orc = app.add_subcommand("oracle", "compare channel and block updates against brute-force oracles");
  common(orc, false, false, false);
  orc->add_option("--instances", f.count, "instances per check (default 200)")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kConfigError;
  }

  try {
    if (*conv) return cmd_convergence(f);
    if (*sweep) return cmd_sweep(f);
    if (*val) return cmd_validate(f);
    return cmd_oracle(f);
  } catch (const NumericFailure& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumericFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }
}
