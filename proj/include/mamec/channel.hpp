#pragma once

// Field-response channel model for planar movable-antenna arrays.
//
// Every path l carries an elevation theta_l and azimuth psi_l in [0, pi].
// An antenna at planar position p = (x, y) (plus the BS height h on the
// receive side) sees the phase
//
//   phase_l(p) = (2 pi / lambda) * (x cos(theta) cos(psi) + y cos(theta) sin(psi) + h sin(theta))
//
// and the field-response matrix stacks exp(j phase_l(p_n)) as an L x N array.
// The uplink channel is H = A(p_r)^H diag(gains) A(p_k).

#include <cmath>
#include <span>
#include <vector>

#include "mamec/types.hpp"

namespace mamec {

struct PathSet {
  VecD elevations;  // theta_l, radians
  VecD azimuths;    // psi_l, radians
  VecC gains;       // diagonal of the path-response matrix

  Eigen::Index size() const { return elevations.size(); }

  // Planar direction pi_l = (cos theta cos psi, cos theta sin psi).
  Vec2 direction(Eigen::Index l) const {
    const double c = std::cos(elevations(l));
    return {c * std::cos(azimuths(l)), c * std::sin(azimuths(l))};
  }

  double height_coefficient(Eigen::Index l) const { return std::sin(elevations(l)); }

  bool consistent() const {
    return azimuths.size() == elevations.size() && gains.size() == elevations.size();
  }

  bool angles_in_range() const {
    for (Eigen::Index l = 0; l < size(); ++l) {
      if (elevations(l) < 0.0 || elevations(l) > kPi) return false;
      if (azimuths(l) < 0.0 || azimuths(l) > kPi) return false;
    }
    return true;
  }
};

struct AntennaLayout {
  std::vector<Mat2X> ue_positions;  // K arrays, 2 x N_t each, meters
  Mat2X bs_positions;               // 2 x N_r, meters
  double bs_height = 0.0;           // meters
};

inline double wave_number(double wavelength) { return 2.0 * kPi / wavelength; }

inline double path_phase(const Vec2& position, double height_term, const PathSet& paths, Eigen::Index l,
                         double wavelength) {
  return wave_number(wavelength) *
         (paths.direction(l).dot(position) + height_term * paths.height_coefficient(l));
}

inline VecC field_response_vector(const Vec2& position, double height_term, const PathSet& paths,
                                  double wavelength) {
  if (!(wavelength > 0.0)) throw InvalidGeometry("wavelength must be positive");
  VecC a(paths.size());
  for (Eigen::Index l = 0; l < paths.size(); ++l) {
    a(l) = std::polar(1.0, path_phase(position, height_term, paths, l, wavelength));
  }
  return a;
}

// L x N matrix whose column n is the field-response vector at positions.col(n).
inline MatC field_response_matrix(const Mat2X& positions, double height_term, const PathSet& paths,
                                  double wavelength) {
  MatC a(paths.size(), positions.cols());
  for (Eigen::Index n = 0; n < positions.cols(); ++n) {
    a.col(n) = field_response_vector(positions.col(n), height_term, paths, wavelength);
  }
  return a;
}

// H(p_k, p_r) = A(p_r)^H diag(ue_paths.gains) A(p_k). Receive-side gains are ignored.
inline MatC uplink_channel(const AntennaLayout& layout, std::size_t ue_index, const PathSet& ue_paths,
                           const PathSet& rx_paths, double wavelength) {
  if (ue_paths.size() != rx_paths.size()) {
    throw InvalidGeometry("uplink_channel: transmit and receive path counts differ");
  }
  if (!ue_paths.consistent() || !rx_paths.consistent()) {
    throw InvalidGeometry("uplink_channel: path set field lengths differ");
  }
  if (ue_index >= layout.ue_positions.size()) throw InvalidGeometry("uplink_channel: UE index out of range");
  const MatC tx = field_response_matrix(layout.ue_positions[ue_index], 0.0, ue_paths, wavelength);
  const MatC rx = field_response_matrix(layout.bs_positions, layout.bs_height, rx_paths, wavelength);
  return rx.adjoint() * ue_paths.gains.asDiagonal() * tx;
}

// H_J(p_r) = A_J(p_r)^H diag(jam_rx_paths.gains) A~_J, with A~_J fixed (L~ x N_J).
inline MatC jammer_channel(const AntennaLayout& layout, const PathSet& jam_rx_paths, const MatC& jam_tx_response,
                           double wavelength) {
  if (!jam_rx_paths.consistent() || jam_tx_response.rows() != jam_rx_paths.size()) {
    throw InvalidGeometry("jammer_channel: jammer response rows must equal the jammer path count");
  }
  const MatC rx = field_response_matrix(layout.bs_positions, layout.bs_height, jam_rx_paths, wavelength);
  return rx.adjoint() * jam_rx_paths.gains.asDiagonal() * jam_tx_response;
}

struct LinkQuality {
  double sinr = 0.0;
  double rate = 0.0;  // bits/s/Hz
  bool degenerate = false;  // zero combiner
};

inline std::vector<LinkQuality> sinr_and_rate(std::span<const MatC> channels, const MatC& jam,
                                              std::span<const VecC> precoders, std::span<const VecC> combiners,
                                              const VecC& jam_signal, double noise_power) {
  if (!(noise_power > 0.0)) throw InvalidGeometry("sinr_and_rate: noise power must be positive");
  const std::size_t k_count = channels.size();
  if (precoders.size() != k_count || combiners.size() != k_count) {
    throw InvalidGeometry("sinr_and_rate: one precoder and one combiner per channel required");
  }
  const VecC jam_rx = jam * jam_signal;
  std::vector<LinkQuality> out(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const VecC& f = combiners[k];
    if (f.squaredNorm() == 0.0) {
      out[k] = {0.0, 0.0, true};
      continue;
    }
    const double signal = std::norm(f.dot(channels[k] * precoders[k]));
    double interference = f.squaredNorm() * noise_power + std::norm(f.dot(jam_rx));
    for (std::size_t j = 0; j < k_count; ++j) {
      if (j != k) interference += std::norm(f.dot(channels[j] * precoders[j]));
    }
    const double sinr = signal / interference;
    out[k] = {sinr, std::log2(1.0 + sinr), false};
  }
  return out;
}

}  // namespace mamec
