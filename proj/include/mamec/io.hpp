#pragma once

// JSON configuration documents and CSV output.
//
// A config document has up to three sections, each optional and each mirroring
// a struct field by field (units as in the structs):
//
//   { "system": {...SystemConfig}, "tasks": {...TaskProfile}, "solver": {...} }
//
// Unknown keys are rejected so that typos surface as configuration errors.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mamec/solver.hpp"

namespace mamec {

using Json = nlohmann::json;

namespace detail {

template <class T>
void read_field(const Json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("field '") + key + "': " + e.what());
  }
}

inline void reject_unknown(const Json& j, const std::vector<std::string>& known, const char* section) {
  if (!j.is_object()) throw ConfigError(std::string("section '") + section + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw ConfigError(std::string("unknown key '") + it.key() + "' in section '" + section + "'");
    }
  }
}

}  // namespace detail

inline SystemConfig system_from_json(const Json& j, SystemConfig c = {}) {
  detail::reject_unknown(j,
                         {"num_ues", "tx_antennas", "rx_antennas", "jam_antennas", "paths", "jam_paths", "tx_power_mw",
                          "jam_power_mw", "noise_power_mw", "bandwidth_hz", "wavelength_m", "region_side_tx_m",
                          "region_side_rx_m", "min_spacing_m", "bs_height_m", "pathloss_exponent", "ref_gain",
                          "ue_distance_m", "jam_distance_m"},
                         "system");
  detail::read_field(j, "num_ues", c.num_ues);
  detail::read_field(j, "tx_antennas", c.tx_antennas);
  detail::read_field(j, "rx_antennas", c.rx_antennas);
  detail::read_field(j, "jam_antennas", c.jam_antennas);
  detail::read_field(j, "paths", c.paths);
  detail::read_field(j, "jam_paths", c.jam_paths);
  detail::read_field(j, "tx_power_mw", c.tx_power_mw);
  detail::read_field(j, "jam_power_mw", c.jam_power_mw);
  detail::read_field(j, "noise_power_mw", c.noise_power_mw);
  detail::read_field(j, "bandwidth_hz", c.bandwidth_hz);
  detail::read_field(j, "wavelength_m", c.wavelength_m);
  detail::read_field(j, "region_side_tx_m", c.region_side_tx_m);
  detail::read_field(j, "region_side_rx_m", c.region_side_rx_m);
  detail::read_field(j, "min_spacing_m", c.min_spacing_m);
  detail::read_field(j, "bs_height_m", c.bs_height_m);
  detail::read_field(j, "pathloss_exponent", c.pathloss_exponent);
  detail::read_field(j, "ref_gain", c.ref_gain);
  detail::read_field(j, "ue_distance_m", c.ue_distance_m);
  detail::read_field(j, "jam_distance_m", c.jam_distance_m);
  c.validate();
  return c;
}

inline Json to_json(const SystemConfig& c) {
  return {{"num_ues", c.num_ues},
          {"tx_antennas", c.tx_antennas},
          {"rx_antennas", c.rx_antennas},
          {"jam_antennas", c.jam_antennas},
          {"paths", c.paths},
          {"jam_paths", c.jam_paths},
          {"tx_power_mw", c.tx_power_mw},
          {"jam_power_mw", c.jam_power_mw},
          {"noise_power_mw", c.noise_power_mw},
          {"bandwidth_hz", c.bandwidth_hz},
          {"wavelength_m", c.wavelength_m},
          {"region_side_tx_m", c.region_side_tx_m},
          {"region_side_rx_m", c.region_side_rx_m},
          {"min_spacing_m", c.min_spacing_m},
          {"bs_height_m", c.bs_height_m},
          {"pathloss_exponent", c.pathloss_exponent},
          {"ref_gain", c.ref_gain},
          {"ue_distance_m", c.ue_distance_m},
          {"jam_distance_m", c.jam_distance_m}};
}

inline TaskProfile tasks_from_json(const Json& j, TaskProfile t = {}) {
  detail::reject_unknown(j, {"task_bits", "mec_budget", "local_rate"}, "tasks");
  detail::read_field(j, "task_bits", t.task_bits);
  detail::read_field(j, "mec_budget", t.mec_budget);
  detail::read_field(j, "local_rate", t.local_rate);
  t.validate();
  return t;
}

inline Json to_json(const TaskProfile& t) {
  return {{"task_bits", t.task_bits}, {"mec_budget", t.mec_budget}, {"local_rate", t.local_rate}};
}

inline SolverOptions solver_from_json(const Json& j, SolverOptions o = {}) {
  detail::reject_unknown(j,
                         {"max_outer", "max_inner", "inner_tol", "violation_tol", "kappa", "shrink", "kappa_min",
                          "eps1", "eps2", "eps2_shrink", "unit_modulus_sweeps", "position_scan_every", "return_best", "mode", "seed"},
                         "solver");
  detail::read_field(j, "max_outer", o.max_outer);
  detail::read_field(j, "max_inner", o.max_inner);
  detail::read_field(j, "inner_tol", o.inner_tol);
  detail::read_field(j, "violation_tol", o.violation_tol);
  detail::read_field(j, "kappa", o.schedule.kappa);
  detail::read_field(j, "shrink", o.schedule.shrink);
  detail::read_field(j, "kappa_min", o.schedule.kappa_min);
  detail::read_field(j, "eps1", o.schedule.eps1);
  detail::read_field(j, "eps2", o.schedule.eps2);
  detail::read_field(j, "eps2_shrink", o.schedule.eps2_shrink);
  detail::read_field(j, "unit_modulus_sweeps", o.unit_modulus_sweeps);
  detail::read_field(j, "position_scan_every", o.position_scan_every);
  detail::read_field(j, "return_best", o.return_best);
  if (j.contains("mode")) o.mode = parse_mode(j.at("mode").get<std::string>());
  detail::read_field(j, "seed", o.seed);
  o.validate();
  return o;
}

inline Json to_json(const SolverOptions& o) {
  return {{"max_outer", o.max_outer},
          {"max_inner", o.max_inner},
          {"inner_tol", o.inner_tol},
          {"violation_tol", o.violation_tol},
          {"kappa", o.schedule.kappa},
          {"shrink", o.schedule.shrink},
          {"kappa_min", o.schedule.kappa_min},
          {"eps1", o.schedule.eps1},
          {"eps2", o.schedule.eps2},
          {"eps2_shrink", o.schedule.eps2_shrink},
          {"unit_modulus_sweeps", o.unit_modulus_sweeps},
          {"position_scan_every", o.position_scan_every},
          {"return_best", o.return_best},
          {"mode", mode_name(o.mode)},
          {"seed", o.seed}};
}

inline Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

inline Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path);
}

// Round-trip-exact, locale-independent number formatting.
inline std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string trace_csv(const ConvergenceTrace& trace) {
  std::string out = "outer_iter,inner_iters_used,al_objective,delay_bound,max_delay,violation,kappa,eps2\n";
  for (const TraceRow& r : trace) {
    out += std::to_string(r.outer_iter) + ',' + std::to_string(r.inner_iters_used) + ',' +
           format_number(r.al_objective) + ',' + format_number(r.delay_bound) + ',' + format_number(r.max_delay) +
           ',' + format_number(r.violation) + ',' + format_number(r.kappa) + ',' + format_number(r.eps2) + '\n';
  }
  return out;
}

inline void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace mamec
