#pragma once

// Monte-Carlo sweeps and convergence traces.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <string>
#include <thread>
#include <vector>

#include "mamec/io.hpp"

namespace mamec {

enum class SweepVariable { NumUes, JammerPowerDbm, RegionAreaNormalized, MecBudget, UeDistance };

inline const char* sweep_variable_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::NumUes: return "num_ues";
    case SweepVariable::JammerPowerDbm: return "jammer_power_dbm";
    case SweepVariable::RegionAreaNormalized: return "region_area_normalized";
    case SweepVariable::MecBudget: return "mec_budget";
    case SweepVariable::UeDistance: return "ue_distance_m";
  }
  return "?";
}

inline SweepVariable parse_sweep_variable(const std::string& s) {
  for (SweepVariable v : {SweepVariable::NumUes, SweepVariable::JammerPowerDbm, SweepVariable::RegionAreaNormalized,
                          SweepVariable::MecBudget, SweepVariable::UeDistance}) {
    if (s == sweep_variable_name(v)) return v;
  }
  throw ConfigError("unknown sweep variable '" + s + "'");
}

struct ExperimentSpec {
  std::string name = "sweep";
  SystemConfig system;
  TaskProfile tasks;
  SolverOptions solver;
  SweepVariable variable = SweepVariable::JammerPowerDbm;
  std::vector<double> values;
  std::vector<Mode> modes{Mode::FullMA};
  std::vector<std::uint64_t> seeds;
  std::string output = "sweep";  // path prefix: <output>.csv, <output>_raw.csv, <output>_manifest.json

  void validate() const {
    if (values.empty()) throw ConfigError("sweep values must be nonempty");
    if (seeds.empty()) throw ConfigError("at least one seed is required");
    if (modes.empty()) throw ConfigError("at least one mode is required");
    system.validate();
    tasks.validate();
    solver.validate();
  }
};

inline std::vector<std::uint64_t> seed_range(std::uint64_t count, std::uint64_t first = 1) {
  std::vector<std::uint64_t> s(count);
  for (std::uint64_t i = 0; i < count; ++i) s[i] = first + i;
  return s;
}

// Scenario parameters at one sweep point.
inline std::pair<SystemConfig, TaskProfile> apply_sweep_value(const ExperimentSpec& spec, double value) {
  SystemConfig c = spec.system;
  TaskProfile t = spec.tasks;
  switch (spec.variable) {
    case SweepVariable::NumUes:
      if (value < 1 || value != std::floor(value)) throw ConfigError("num_ues sweep values must be positive integers");
      c.num_ues = static_cast<int>(value);
      break;
    case SweepVariable::JammerPowerDbm: c.jam_power_mw = dbm_to_mw(value); break;
    case SweepVariable::RegionAreaNormalized:
      c.region_side_tx_m = value * c.wavelength_m;
      c.region_side_rx_m = value * c.wavelength_m;
      break;
    case SweepVariable::MecBudget: t.mec_budget = value; break;
    case SweepVariable::UeDistance: c.ue_distance_m = value; break;
  }
  c.validate();
  t.validate();
  return {c, t};
}

struct RunRecord {
  double value = 0;
  Mode mode = Mode::FullMA;
  std::uint64_t seed = 0;
  double max_delay = 0;
  bool converged = false;
  bool failed = false;
  int outer_iterations = 0;
  std::string error;
};

struct SweepRow {
  double value = 0;
  Mode mode = Mode::FullMA;
  double mean_delay = 0;
  double stderr_delay = 0;
  double convergence_rate = 0;
  double mean_outer_iterations = 0;
  int runs = 0;
};

using SweepResult = std::vector<SweepRow>;

inline RunRecord run_one(const ExperimentSpec& spec, double value, Mode mode, std::uint64_t seed) {
  RunRecord r;
  r.value = value;
  r.mode = mode;
  r.seed = seed;
  try {
    const auto [config, tasks] = apply_sweep_value(spec, value);
    const Scenario sc = generate_scenario(config, tasks, seed);
    SolverOptions opt = spec.solver;
    opt.mode = mode;
    opt.seed = seed;
    const SolveResult res = solve(sc, opt);
    r.max_delay = res.solution.max_delay;
    r.converged = res.converged;
    r.outer_iterations = res.outer_iterations;
  } catch (const std::exception& e) {
    r.failed = true;
    r.error = e.what();
  }
  return r;
}

// Every (value, mode, seed) run, in that nested order. Workers pull indices from
// a shared counter and write only their own slot, so the output does not depend
// on the number of workers.
inline std::vector<RunRecord> run_records(const ExperimentSpec& spec, int jobs = 1) {
  spec.validate();
  struct Job {
    double value;
    Mode mode;
    std::uint64_t seed;
  };
  std::vector<Job> work;
  for (double v : spec.values)
    for (Mode m : spec.modes)
      for (std::uint64_t s : spec.seeds) work.push_back({v, m, s});
  std::vector<RunRecord> out(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < work.size(); i = next++) out[i] = run_one(spec, work[i].value, work[i].mode, work[i].seed);
  };
  const int n = std::max(1, std::min<int>(jobs, static_cast<int>(work.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return out;
}

// Failed runs are excluded from the means and count as non-converged.
inline SweepResult aggregate(const ExperimentSpec& spec, const std::vector<RunRecord>& records) {
  SweepResult rows;
  for (double v : spec.values) {
    for (Mode m : spec.modes) {
      SweepRow row;
      row.value = v;
      row.mode = m;
      std::vector<double> delays;
      int total = 0, converged = 0;
      double outer = 0;
      for (const RunRecord& r : records) {
        if (r.value != v || r.mode != m) continue;
        ++total;
        if (r.converged && !r.failed) ++converged;
        if (r.failed) continue;
        delays.push_back(r.max_delay);
        outer += r.outer_iterations;
      }
      row.runs = static_cast<int>(delays.size());
      row.convergence_rate = total > 0 ? static_cast<double>(converged) / total : 0.0;
      if (!delays.empty()) {
        double sum = 0;
        for (double d : delays) sum += d;
        row.mean_delay = sum / delays.size();
        row.mean_outer_iterations = outer / delays.size();
        if (delays.size() > 1) {
          double ss = 0;
          for (double d : delays) ss += (d - row.mean_delay) * (d - row.mean_delay);
          row.stderr_delay = std::sqrt(ss / (delays.size() - 1)) / std::sqrt(static_cast<double>(delays.size()));
        }
      } else {
        row.mean_delay = std::nan("");
      }
      rows.push_back(row);
    }
  }
  return rows;
}

inline std::string sweep_csv(const ExperimentSpec& spec, const SweepResult& rows) {
  std::string out = std::string(sweep_variable_name(spec.variable)) +
                    ",mode,mean_max_delay_s,stderr_s,convergence_rate,mean_outer_iterations,runs\n";
  for (const SweepRow& r : rows) {
    out += format_number(r.value) + ',' + mode_name(r.mode) + ',' + format_number(r.mean_delay) + ',' +
           format_number(r.stderr_delay) + ',' + format_number(r.convergence_rate) + ',' +
           format_number(r.mean_outer_iterations) + ',' + std::to_string(r.runs) + '\n';
  }
  return out;
}

inline std::string records_csv(const ExperimentSpec& spec, const std::vector<RunRecord>& records) {
  std::string out = std::string(sweep_variable_name(spec.variable)) +
                    ",mode,seed,max_delay_s,converged,failed,outer_iterations,error\n";
  for (const RunRecord& r : records) {
    std::string err = r.error;
    std::replace(err.begin(), err.end(), ',', ';');
    std::replace(err.begin(), err.end(), '\n', ' ');
    out += format_number(r.value) + ',' + mode_name(r.mode) + ',' + std::to_string(r.seed) + ',' +
           format_number(r.max_delay) + ',' + (r.converged ? "1" : "0") + ',' + (r.failed ? "1" : "0") + ',' +
           std::to_string(r.outer_iterations) + ',' + err + '\n';
  }
  return out;
}

inline Json manifest(const ExperimentSpec& spec) {
  Json modes = Json::array();
  for (Mode m : spec.modes) modes.push_back(mode_name(m));
  return {{"name", spec.name},
          {"sweep_variable", sweep_variable_name(spec.variable)},
          {"values", spec.values},
          {"modes", modes},
          {"seeds", spec.seeds},
          {"system", to_json(spec.system)},
          {"tasks", to_json(spec.tasks)},
          {"solver", to_json(spec.solver)},
          {"versions", {{"mamec", "1.0.0"}, {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                                        std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                                        std::to_string(EIGEN_MINOR_VERSION)}}}};
}

// Writes <output>.csv (aggregates), <output>_raw.csv (per run) and <output>_manifest.json.
inline SweepResult run_sweep(const ExperimentSpec& spec, int jobs = 1) {
  const std::vector<RunRecord> records = run_records(spec, jobs);
  SweepResult rows = aggregate(spec, records);
  write_text(spec.output + ".csv", sweep_csv(spec, rows));
  write_text(spec.output + "_raw.csv", records_csv(spec, records));
  write_text(spec.output + "_manifest.json", manifest(spec).dump(2) + "\n");
  return rows;
}

inline SolveResult run_convergence(const SystemConfig& config, const TaskProfile& tasks, SolverOptions opt,
                                   std::uint64_t seed, const std::string& path) {
  opt.seed = seed;
  const Scenario sc = generate_scenario(config, tasks, seed);
  SolveResult res = solve(sc, opt);
  write_text(path, trace_csv(res.trace));
  return res;
}

// "experiment" section of a config document.
inline ExperimentSpec experiment_from_json(const Json& doc) {
  detail::reject_unknown(doc, {"system", "tasks", "solver", "experiment"}, "document");
  ExperimentSpec spec;
  if (doc.contains("system")) spec.system = system_from_json(doc.at("system"));
  if (doc.contains("tasks")) spec.tasks = tasks_from_json(doc.at("tasks"));
  if (doc.contains("solver")) spec.solver = solver_from_json(doc.at("solver"));
  if (!doc.contains("experiment")) throw ConfigError("missing 'experiment' section");
  const Json& e = doc.at("experiment");
  detail::reject_unknown(e, {"name", "sweep_variable", "values", "modes", "seeds", "output"}, "experiment");
  detail::read_field(e, "name", spec.name);
  if (!e.contains("sweep_variable")) throw ConfigError("experiment.sweep_variable is required");
  std::string variable;
  detail::read_field(e, "sweep_variable", variable);
  spec.variable = parse_sweep_variable(variable);
  detail::read_field(e, "values", spec.values);
  if (e.contains("modes")) {
    std::vector<std::string> names;
    detail::read_field(e, "modes", names);
    spec.modes.clear();
    for (const auto& m : names) spec.modes.push_back(parse_mode(m));
  }
  if (e.contains("seeds")) {
    const Json& s = e.at("seeds");
    if (s.is_number_integer()) {
      if (s.get<long long>() < 1) throw ConfigError("experiment.seeds must be >= 1");
      spec.seeds = seed_range(s.get<std::uint64_t>());
    } else {
      detail::read_field(e, "seeds", spec.seeds);
    }
  } else {
    spec.seeds = seed_range(20);
  }
  detail::read_field(e, "output", spec.output);
  spec.validate();
  return spec;
}

}  // namespace mamec
