#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "mamec/channel.hpp"
#include "mamec/types.hpp"

namespace mamec {

inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

struct SystemConfig {
  int num_ues = 2;
  int tx_antennas = 4;
  int rx_antennas = 16;
  int jam_antennas = 2;
  int paths = 2;       // L_k
  int jam_paths = 8;   // L~

  double tx_power_mw = 100.0;          // 20 dBm
  double jam_power_mw = dbm_to_mw(5.0);
  double noise_power_mw = 1e-5;
  double bandwidth_hz = 50e6;
  double wavelength_m = 0.1;
  double region_side_tx_m = 0.2;
  double region_side_rx_m = 0.2;
  double min_spacing_m = 0.05;
  double bs_height_m = 10.0;
  double pathloss_exponent = 2.8;
  double ref_gain = 1e-4;
  double ue_distance_m = 60.0;
  double jam_distance_m = 30.0;

  void validate() const {
    auto require = [](bool ok, const char* what) {
      if (!ok) throw ConfigError(what);
    };
    require(num_ues >= 1, "num_ues must be >= 1");
    require(tx_antennas >= 1 && rx_antennas >= 1 && jam_antennas >= 1, "antenna counts must be >= 1");
    require(paths >= 1 && jam_paths >= 1, "path counts must be >= 1");
    require(tx_power_mw > 0 && jam_power_mw > 0 && noise_power_mw > 0, "powers must be positive");
    require(bandwidth_hz > 0 && wavelength_m > 0, "bandwidth and wavelength must be positive");
    require(region_side_tx_m > 0 && region_side_rx_m > 0, "region sides must be positive");
    require(min_spacing_m > 0, "min_spacing_m must be positive");
    require(min_spacing_m < region_side_tx_m && min_spacing_m < region_side_rx_m,
            "min_spacing_m must be smaller than both region sides");
    require(bs_height_m >= 0, "bs_height_m must be >= 0");
    require(pathloss_exponent > 0 && ref_gain > 0, "path-loss parameters must be positive");
    require(ue_distance_m > 0 && jam_distance_m > 0, "distances must be positive");
  }
};

struct TaskProfile {
  double task_bits = 1e7;    // Delta
  double mec_budget = 1e8;   // Psi_max, bits/s
  double local_rate = 0.4e7; // Psi_2, bits/s

  void validate() const {
    if (!(task_bits > 0 && mec_budget > 0 && local_rate > 0)) {
      throw ConfigError("task_bits, mec_budget and local_rate must be positive");
    }
  }
};

struct Scenario {
  SystemConfig config;
  TaskProfile tasks;
  std::vector<PathSet> ue_paths;  // K
  std::vector<PathSet> rx_paths;  // K, one receive-side angle set per link
  PathSet jam_rx_paths;
  MatC jam_tx_response;  // L~ x N_J
  VecC jam_signal;       // z, ||z||^2 = P_J
  std::vector<double> ue_distances;
  double jam_distance = 0.0;
  std::uint64_t rng_seed = 0;
};

struct Solution {
  AntennaLayout layout;
  std::vector<VecC> precoders;
  std::vector<VecC> combiners;
  VecD offload;     // delta_k
  VecD mec_alloc;   // Psi_{1,k}, bits/s
  VecD sinr;
  VecD rates;       // bits/s/Hz
  VecD per_ue_delay;
  double max_delay = 0.0;
};

// Spacing actually enforced for an array of `count` antennas in a square of
// side `side`: the configured d, reduced when a ceil(sqrt(count))-per-row grid
// at spacing d would not fit.
inline double effective_spacing(double side, int count, double spacing) {
  const int per_row = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count))));
  if (per_row <= 1) return spacing;
  return std::min(spacing, side / (per_row - 1));
}

// Centered square grid, row-major, `spacing` apart.
inline Mat2X grid_layout(int count, double spacing) {
  const int per_row = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(count))));
  const double offset = 0.5 * (per_row - 1);
  Mat2X p(2, count);
  for (int n = 0; n < count; ++n) {
    p(0, n) = (n % per_row - offset) * spacing;
    p(1, n) = (n / per_row - offset) * spacing;
  }
  return p;
}

inline double min_pairwise_distance(const Mat2X& p) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < p.cols(); ++a)
    for (Eigen::Index b = a + 1; b < p.cols(); ++b) best = std::min(best, (p.col(a) - p.col(b)).norm());
  return best;
}

// Sequential uniform rejection sampling. Restarts when a single antenna cannot
// be placed; gives up once `max_proposals` candidates have been drawn.
template <class Rng>
std::optional<Mat2X> sample_layout(int count, double side, double spacing, Rng& rng, long max_proposals = 100000) {
  std::uniform_real_distribution<double> coord(-0.5 * side, 0.5 * side);
  const long per_antenna = 2000;
  long used = 0;
  while (used < max_proposals) {
    Mat2X p(2, count);
    int placed = 0;
    long tries = 0;
    while (placed < count && used < max_proposals && tries < per_antenna) {
      ++used;
      ++tries;
      const Vec2 c(coord(rng), coord(rng));
      bool ok = true;
      for (int j = 0; j < placed && ok; ++j) ok = (p.col(j) - c).norm() >= spacing;
      if (ok) {
        p.col(placed++) = c;
        tries = 0;
      }
    }
    if (placed == count) return p;
  }
  return std::nullopt;
}

inline PathSet random_paths(int count, double mean_power, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, kPi);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5 * mean_power / count));
  PathSet s{VecD(count), VecD(count), VecC(count)};
  for (int l = 0; l < count; ++l) {
    s.elevations(l) = angle(rng);
    s.azimuths(l) = angle(rng);
    const double re = normal(rng);
    const double im = normal(rng);
    s.gains(l) = cd(re, im);
  }
  return s;
}

inline Scenario generate_scenario(const SystemConfig& config, const TaskProfile& tasks, std::uint64_t seed) {
  config.validate();
  tasks.validate();
  std::mt19937_64 rng(seed);
  Scenario sc;
  sc.config = config;
  sc.tasks = tasks;
  sc.rng_seed = seed;

  const double ue_power = config.ref_gain * std::pow(config.ue_distance_m, -config.pathloss_exponent);
  for (int k = 0; k < config.num_ues; ++k) {
    sc.ue_distances.push_back(config.ue_distance_m);
    sc.ue_paths.push_back(random_paths(config.paths, ue_power, rng));
    PathSet rx = random_paths(config.paths, 1.0, rng);
    rx.gains.setOnes();  // receive-side gains are not used; the link gain lives in ue_paths
    sc.rx_paths.push_back(std::move(rx));
  }

  sc.jam_distance = config.jam_distance_m;
  const double jam_power = config.ref_gain * std::pow(config.jam_distance_m, -config.pathloss_exponent);
  sc.jam_rx_paths = random_paths(config.jam_paths, jam_power, rng);

  // Jammer transmit side: fixed lambda/2 ULA along x with its own departure angles.
  PathSet departures = random_paths(config.jam_paths, 1.0, rng);
  Mat2X ula = Mat2X::Zero(2, config.jam_antennas);
  for (int n = 0; n < config.jam_antennas; ++n) {
    ula(0, n) = (n - 0.5 * (config.jam_antennas - 1)) * 0.5 * config.wavelength_m;
  }
  sc.jam_tx_response = field_response_matrix(ula, 0.0, departures, config.wavelength_m);

  std::normal_distribution<double> normal(0.0, 1.0);
  VecC u(config.jam_antennas);
  for (int n = 0; n < config.jam_antennas; ++n) {
    const double re = normal(rng);
    const double im = normal(rng);
    u(n) = cd(re, im);
  }
  sc.jam_signal = std::sqrt(config.jam_power_mw) * u / u.norm();
  return sc;
}

inline constexpr double kInfiniteDelay = std::numeric_limits<double>::infinity();

struct DelayReport {
  VecD per_ue;
  double max_delay = 0.0;
};

inline DelayReport delay_objective(const TaskProfile& tasks, const VecD& rates, double bandwidth, const VecD& offload,
                                   const VecD& mec_alloc) {
  const Eigen::Index k_count = rates.size();
  DelayReport r{VecD(k_count), 0.0};
  for (Eigen::Index k = 0; k < k_count; ++k) {
    const double d = offload(k);
    const double local = (1.0 - d) * tasks.task_bits / tasks.local_rate;
    double remote = 0.0;
    if (d > 0.0) {
      if (mec_alloc(k) <= 0.0 || rates(k) <= 0.0) {
        remote = kInfiniteDelay;
      } else {
        remote = d * tasks.task_bits * (1.0 / mec_alloc(k) + 1.0 / (bandwidth * rates(k)));
      }
    }
    r.per_ue(k) = std::max(remote, local);
    r.max_delay = std::max(r.max_delay, r.per_ue(k));
  }
  return r;
}

struct ConstraintViolation {
  std::string kind;  // power, budget, offload, mec_alloc, region, spacing
  int ue = -1;       // -1 for the BS array or global constraints
  int antenna_a = -1;
  int antenna_b = -1;
  double amount = 0.0;
};

inline std::vector<ConstraintViolation> validate_solution(const Scenario& sc, const Solution& sol) {
  constexpr double kPowerTol = 1e-9;
  constexpr double kSpacingTol = 1e-9;
  constexpr double kBudgetTol = 1e-6;
  const SystemConfig& c = sc.config;
  std::vector<ConstraintViolation> out;

  for (std::size_t k = 0; k < sol.precoders.size(); ++k) {
    const double excess = sol.precoders[k].squaredNorm() - c.tx_power_mw;
    if (excess > kPowerTol) out.push_back({"power", int(k), -1, -1, excess});
  }
  const double over = sol.mec_alloc.sum() - sc.tasks.mec_budget;
  if (over > kBudgetTol) out.push_back({"budget", -1, -1, -1, over});
  for (Eigen::Index k = 0; k < sol.offload.size(); ++k) {
    const double d = sol.offload(k);
    if (d < 0.0 || d > 1.0) out.push_back({"offload", int(k), -1, -1, d < 0.0 ? -d : d - 1.0});
    if (sol.mec_alloc(k) < 0.0) out.push_back({"mec_alloc", int(k), -1, -1, -sol.mec_alloc(k)});
  }

  auto check_array = [&](const Mat2X& p, double side, int ue) {
    const double half = 0.5 * side;
    for (Eigen::Index n = 0; n < p.cols(); ++n) {
      const double outside = std::max(p.col(n).cwiseAbs().maxCoeff() - half, 0.0);
      if (outside > kSpacingTol) out.push_back({"region", ue, int(n), -1, outside});
    }
    const double d = effective_spacing(side, int(p.cols()), c.min_spacing_m);
    for (Eigen::Index a = 0; a < p.cols(); ++a)
      for (Eigen::Index b = a + 1; b < p.cols(); ++b) {
        const double shortfall = d - (p.col(a) - p.col(b)).norm();
        if (shortfall > kSpacingTol) out.push_back({"spacing", ue, int(a), int(b), shortfall});
      }
  };
  for (std::size_t k = 0; k < sol.layout.ue_positions.size(); ++k) {
    check_array(sol.layout.ue_positions[k], c.region_side_tx_m, int(k));
  }
  check_array(sol.layout.bs_positions, c.region_side_rx_m, -1);
  return out;
}

}  // namespace mamec
