#pragma once

// Nondimensionalized instance the solver works on.
//
//   path gains      * sqrt(P_k) / sigma   (UE links)
//   jammer gains    / sigma
//   precoders       / sqrt(P_k)           -> power budget ||w|| <= 1, noise power 1
//   MEC allocation  / Psi_max             -> budget sum(Psi) <= 1
//
// Times stay in seconds: compute_scale = Delta/Psi_max, tx_scale = Delta/B and
// local_time = Delta/Psi_2.

#include <cmath>
#include <utility>
#include <vector>

#include "mamec/channel.hpp"
#include "mamec/scenario.hpp"

namespace mamec {

using PairList = std::vector<std::pair<int, int>>;

// Ordered pairs (a, b), a != b.
inline PairList ordered_pairs(int count) {
  PairList p;
  for (int a = 0; a < count; ++a)
    for (int b = 0; b < count; ++b)
      if (a != b) p.emplace_back(a, b);
  return p;
}

struct Problem {
  int K = 0, Nt = 0, Nr = 0, NJ = 0, L = 0, Lj = 0;
  double wavelength = 0.1;
  double bs_height = 0.0;

  std::vector<PathSet> ue_paths;  // normalized gains
  std::vector<PathSet> rx_paths;
  PathSet jam_paths;              // normalized gains
  VecC jam_beam;                  // v = diag(jammer gains) * A~_J * z, normalized

  double compute_scale = 0.0;  // Delta / Psi_max
  double tx_scale = 0.0;       // Delta / B
  double local_time = 0.0;     // Delta / Psi_2

  double half_side_tx = 0.0, half_side_rx = 0.0;
  double spacing_tx = 0.0, spacing_rx = 0.0;
  PairList ue_pairs, bs_pairs;

  double power_scale = 1.0;  // sqrt(P_k)
  double mec_budget = 1.0;   // Psi_max, bits/s
};

inline Problem make_problem(const Scenario& sc) {
  const SystemConfig& c = sc.config;
  Problem p;
  p.K = c.num_ues;
  p.Nt = c.tx_antennas;
  p.Nr = c.rx_antennas;
  p.NJ = c.jam_antennas;
  p.L = c.paths;
  p.Lj = c.jam_paths;
  p.wavelength = c.wavelength_m;
  p.bs_height = c.bs_height_m;

  const double sigma = std::sqrt(c.noise_power_mw);
  p.power_scale = std::sqrt(c.tx_power_mw);
  for (int k = 0; k < p.K; ++k) {
    PathSet ue = sc.ue_paths[k];
    ue.gains *= p.power_scale / sigma;
    p.ue_paths.push_back(std::move(ue));
    p.rx_paths.push_back(sc.rx_paths[k]);
  }
  p.jam_paths = sc.jam_rx_paths;
  p.jam_paths.gains /= sigma;
  p.jam_beam = p.jam_paths.gains.asDiagonal() * (sc.jam_tx_response * sc.jam_signal);

  p.compute_scale = sc.tasks.task_bits / sc.tasks.mec_budget;
  p.tx_scale = sc.tasks.task_bits / c.bandwidth_hz;
  p.local_time = sc.tasks.task_bits / sc.tasks.local_rate;
  p.mec_budget = sc.tasks.mec_budget;

  p.half_side_tx = 0.5 * c.region_side_tx_m;
  p.half_side_rx = 0.5 * c.region_side_rx_m;
  p.spacing_tx = effective_spacing(c.region_side_tx_m, p.Nt, c.min_spacing_m);
  p.spacing_rx = effective_spacing(c.region_side_rx_m, p.Nr, c.min_spacing_m);
  p.ue_pairs = ordered_pairs(p.Nt);
  p.bs_pairs = ordered_pairs(p.Nr);
  return p;
}

// Normalized channels for the current layout.
inline MatC ue_response(const Problem& p, const AntennaLayout& lay, int k) {
  return field_response_matrix(lay.ue_positions[k], 0.0, p.ue_paths[k], p.wavelength);
}
inline MatC bs_response(const Problem& p, const AntennaLayout& lay, int k) {
  return field_response_matrix(lay.bs_positions, p.bs_height, p.rx_paths[k], p.wavelength);
}
inline MatC jam_response(const Problem& p, const AntennaLayout& lay) {
  return field_response_matrix(lay.bs_positions, p.bs_height, p.jam_paths, p.wavelength);
}
inline MatC normalized_channel(const Problem& p, const AntennaLayout& lay, int k) {
  return bs_response(p, lay, k).adjoint() * p.ue_paths[k].gains.asDiagonal() * ue_response(p, lay, k);
}
inline VecC normalized_jam_rx(const Problem& p, const AntennaLayout& lay) {
  return jam_response(p, lay).adjoint() * p.jam_beam;
}

}  // namespace mamec
