#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mamec/problem.hpp"

namespace mamec {

// Every primal variable of the split problem. Per-UE scalars are length-K
// vectors; "aux" members are the decoupled copies tied back by a coupling.
struct PrimalState {
  double delay_bound = 0.0;  // gamma

  VecD offload_bound;  // gamma_k  >= compute + transmit time
  VecD local_bound;    // gamma~_k >= local time
  VecD compute_time, compute_time_aux;  // alpha_1, alpha~_1
  VecD tx_time, tx_time_aux;            // alpha_2, alpha~_2
  VecD offload;                         // delta
  VecD offload_compute, offload_local, offload_tx;  // delta bar, hat, tilde
  VecD mec_alloc, mec_alloc_aux;        // Psi_1 (units of Psi_max), Psi~_1
  VecD rate, rate_aux;                  // Gamma, Gamma~
  VecD sinr, sinr_aux;                  // nu, nu~

  MatC cross_gain;  // u~_{k,k'} = f_k^H mu~_{k'}
  VecC jam_gain;    // u_k = f_k^H u_J

  std::vector<VecC> precoder, precoder_aux;  // w, w~ (N_t)
  std::vector<VecC> combiner, combiner_aux;  // f, f~ (N_r)
  std::vector<VecC> tx_beam;                 // mu_k = B_k w~_k (L)
  std::vector<VecC> rx_beam;                 // mu~_k = B_{r,k}^H Sigma_k mu_k (N_r)
  VecC jam_rx;                               // u_J = B_J^H v (N_r)

  std::vector<Mat2X> ue_gaps;  // per UE, column i is the gap for ordered pair i
  Mat2X bs_gaps;

  std::vector<MatC> ue_response;  // B_k   (L x N_t)
  std::vector<MatC> bs_response;  // B_r,k (L x N_r)
  MatC jam_response;              // B_J   (L~ x N_r)

  AntennaLayout layout;
};

// One slot per coupling equality. Used both for residuals and multipliers.
struct Couplings {
  VecD offload_bound, local_bound, compute_time, tx_time;
  VecD offload_compute, offload_local, offload_tx;
  VecD mec_alloc, rate, sinr;
  MatC cross_gain;
  std::vector<VecC> tx_beam, rx_beam, precoder, combiner;
  VecC jam_gain, jam_rx;
  std::vector<Mat2X> ue_gaps;
  Mat2X bs_gaps;
  std::vector<MatC> ue_response, bs_response;
  MatC jam_response;

  // Calls fn(a_field, b_field) for every matching pair of Eigen objects.
  template <class A, class B, class F>
  static void zip(A& a, B& b, F&& fn) {
    fn(a.offload_bound, b.offload_bound);
    fn(a.local_bound, b.local_bound);
    fn(a.compute_time, b.compute_time);
    fn(a.tx_time, b.tx_time);
    fn(a.offload_compute, b.offload_compute);
    fn(a.offload_local, b.offload_local);
    fn(a.offload_tx, b.offload_tx);
    fn(a.mec_alloc, b.mec_alloc);
    fn(a.rate, b.rate);
    fn(a.sinr, b.sinr);
    fn(a.cross_gain, b.cross_gain);
    for (std::size_t i = 0; i < a.tx_beam.size(); ++i) fn(a.tx_beam[i], b.tx_beam[i]);
    for (std::size_t i = 0; i < a.rx_beam.size(); ++i) fn(a.rx_beam[i], b.rx_beam[i]);
    for (std::size_t i = 0; i < a.precoder.size(); ++i) fn(a.precoder[i], b.precoder[i]);
    for (std::size_t i = 0; i < a.combiner.size(); ++i) fn(a.combiner[i], b.combiner[i]);
    fn(a.jam_gain, b.jam_gain);
    fn(a.jam_rx, b.jam_rx);
    for (std::size_t i = 0; i < a.ue_gaps.size(); ++i) fn(a.ue_gaps[i], b.ue_gaps[i]);
    fn(a.bs_gaps, b.bs_gaps);
    for (std::size_t i = 0; i < a.ue_response.size(); ++i) fn(a.ue_response[i], b.ue_response[i]);
    for (std::size_t i = 0; i < a.bs_response.size(); ++i) fn(a.bs_response[i], b.bs_response[i]);
    fn(a.jam_response, b.jam_response);
  }

  template <class F>
  void for_each(F&& fn) const {
    zip(*this, *this, [&](const auto& x, const auto&) { fn(x); });
  }

  // Same shapes as `shape`, all zero.
  static Couplings zeros_like(const Couplings& shape) {
    Couplings z = shape;
    zip(z, shape, [](auto& x, const auto&) { x.setZero(); });
    return z;
  }
};

using DualState = Couplings;

inline Couplings residuals(const PrimalState& s, const Problem& p) {
  Couplings r;
  const Eigen::Index K = p.K;
  r.offload_bound = VecD::Constant(K, s.delay_bound) - s.offload_bound;
  r.local_bound = VecD::Constant(K, s.delay_bound) - s.local_bound;
  r.compute_time = s.compute_time - s.compute_time_aux;
  r.tx_time = s.tx_time - s.tx_time_aux;
  r.offload_compute = s.offload - s.offload_compute;
  r.offload_local = s.offload - s.offload_local;
  r.offload_tx = s.offload - s.offload_tx;
  r.mec_alloc = s.mec_alloc - s.mec_alloc_aux;
  r.rate = s.rate - s.rate_aux;
  r.sinr = s.sinr - s.sinr_aux;

  r.cross_gain.resize(K, K);
  r.jam_gain.resize(K);
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < K; ++j) r.cross_gain(k, j) = s.cross_gain(k, j) - s.combiner[k].dot(s.rx_beam[j]);
    r.jam_gain(k) = s.jam_gain(k) - s.combiner[k].dot(s.jam_rx);
    r.tx_beam.push_back(s.tx_beam[k] - s.ue_response[k] * s.precoder_aux[k]);
    r.rx_beam.push_back(s.rx_beam[k] -
                        s.bs_response[k].adjoint() * (p.ue_paths[k].gains.cwiseProduct(s.tx_beam[k])));
    r.precoder.push_back(s.precoder[k] - s.precoder_aux[k]);
    r.combiner.push_back(s.combiner[k] - s.combiner_aux[k]);

    const Mat2X& pos = s.layout.ue_positions[k];
    Mat2X gap(2, p.ue_pairs.size());
    for (std::size_t i = 0; i < p.ue_pairs.size(); ++i) {
      const auto [a, b] = p.ue_pairs[i];
      gap.col(i) = s.ue_gaps[k].col(i) - (pos.col(a) - pos.col(b));
    }
    r.ue_gaps.push_back(std::move(gap));
    r.ue_response.push_back(ue_response(p, s.layout, k) - s.ue_response[k]);
    r.bs_response.push_back(bs_response(p, s.layout, k) - s.bs_response[k]);
  }
  r.jam_rx = s.jam_rx - s.jam_response.adjoint() * p.jam_beam;

  const Mat2X& bs = s.layout.bs_positions;
  r.bs_gaps.resize(2, p.bs_pairs.size());
  for (std::size_t i = 0; i < p.bs_pairs.size(); ++i) {
    const auto [a, b] = p.bs_pairs[i];
    r.bs_gaps.col(i) = s.bs_gaps.col(i) - (bs.col(a) - bs.col(b));
  }
  r.jam_response = jam_response(p, s.layout) - s.jam_response;
  return r;
}

inline double violation(const Couplings& r) {
  double v = 0.0;
  r.for_each([&](const auto& x) {
    if (x.size() > 0) v = std::max(v, double(x.cwiseAbs().maxCoeff()));
  });
  return v;
}

inline double violation(const PrimalState& s, const Problem& p) { return violation(residuals(s, p)); }

// Penalty part of the AL: (1/2 kappa) * sum ||r + kappa lambda||^2.
inline double penalty_value(const Couplings& r, const DualState& lambda, double kappa) {
  double acc = 0.0;
  Couplings::zip(r, lambda, [&](const auto& x, const auto& l) { acc += (x + kappa * l).squaredNorm(); });
  return acc / (2.0 * kappa);
}

inline double al_objective(const PrimalState& s, const DualState& lambda, double kappa, const Problem& p) {
  return s.delay_bound + penalty_value(residuals(s, p), lambda, kappa);
}

struct PenaltySchedule {
  double kappa = 2.0;
  double shrink = 0.6;      // c
  double kappa_min = 1e-8;
  double eps2 = 0.1;
  double eps2_shrink = 0.7;
  double eps1 = 1e-3;

  bool valid() const {
    return shrink > 0 && shrink < 1 && kappa_min > 0 && kappa >= kappa_min && eps2 > 0 && eps2_shrink > 0 &&
           eps2_shrink < 1 && eps1 > 0;
  }
};

// Returns true when the multipliers were updated, false when the penalty shrank.
inline bool dual_or_penalty_step(const Couplings& r, DualState& lambda, PenaltySchedule& sched) {
  if (violation(r) <= sched.eps2) {
    Couplings::zip(lambda, r, [&](auto& l, const auto& x) { l += x / sched.kappa; });
    sched.eps2 *= sched.eps2_shrink;
    return true;
  }
  sched.kappa = std::max(sched.shrink * sched.kappa, sched.kappa_min);
  return false;
}

inline bool dual_or_penalty_step(const PrimalState& s, DualState& lambda, PenaltySchedule& sched, const Problem& p) {
  return dual_or_penalty_step(residuals(s, p), lambda, sched);
}

// Rebuilds every auxiliary from the physical variables (layout, w, f, delta,
// Psi, nu, Gamma, alpha) so that all coupling residuals vanish. The
// delay bounds are set to the tightest value satisfying both timing constraints
// for every UE.
inline void propagate_auxiliaries(PrimalState& s, const Problem& p) {
  const int K = p.K;
  s.compute_time_aux = s.compute_time;
  s.tx_time_aux = s.tx_time;
  s.offload_compute = s.offload;
  s.offload_local = s.offload;
  s.offload_tx = s.offload;
  s.mec_alloc_aux = s.mec_alloc;
  s.rate_aux = s.rate;
  s.sinr_aux = s.sinr;

  s.precoder_aux = s.precoder;
  s.combiner_aux = s.combiner;
  s.ue_response.clear();
  s.bs_response.clear();
  s.tx_beam.clear();
  s.rx_beam.clear();
  s.ue_gaps.clear();
  for (int k = 0; k < K; ++k) {
    s.ue_response.push_back(ue_response(p, s.layout, k));
    s.bs_response.push_back(bs_response(p, s.layout, k));
    s.tx_beam.push_back(s.ue_response[k] * s.precoder_aux[k]);
    s.rx_beam.push_back(s.bs_response[k].adjoint() * p.ue_paths[k].gains.cwiseProduct(s.tx_beam[k]));
    const Mat2X& pos = s.layout.ue_positions[k];
    Mat2X gap(2, p.ue_pairs.size());
    for (std::size_t i = 0; i < p.ue_pairs.size(); ++i) gap.col(i) = pos.col(p.ue_pairs[i].first) - pos.col(p.ue_pairs[i].second);
    s.ue_gaps.push_back(std::move(gap));
  }
  s.jam_response = jam_response(p, s.layout);
  s.jam_rx = s.jam_response.adjoint() * p.jam_beam;
  s.cross_gain.resize(K, K);
  s.jam_gain.resize(K);
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < K; ++j) s.cross_gain(k, j) = s.combiner[k].dot(s.rx_beam[j]);
    s.jam_gain(k) = s.combiner[k].dot(s.jam_rx);
  }
  const Mat2X& bs = s.layout.bs_positions;
  s.bs_gaps.resize(2, p.bs_pairs.size());
  for (std::size_t i = 0; i < p.bs_pairs.size(); ++i) s.bs_gaps.col(i) = bs.col(p.bs_pairs[i].first) - bs.col(p.bs_pairs[i].second);

  double g = 0.0;
  for (int k = 0; k < K; ++k) {
    g = std::max({g, s.compute_time(k) + s.tx_time(k), (1.0 - s.offload(k)) * p.local_time});
  }
  s.delay_bound = g;
  s.offload_bound = VecD::Constant(K, g);
  s.local_bound = VecD::Constant(K, g);
}

}  // namespace mamec
