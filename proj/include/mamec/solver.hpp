#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "mamec/blocks.hpp"

namespace mamec {

enum class Mode { FullMA, FPA, ReceiveOnlyMA, LocalOnly };

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::FullMA: return "full-ma";
    case Mode::FPA: return "fpa";
    case Mode::ReceiveOnlyMA: return "receive-only-ma";
    case Mode::LocalOnly: return "local-only";
  }
  return "?";
}

inline Mode parse_mode(const std::string& s) {
  if (s == "full-ma" || s == "ma") return Mode::FullMA;
  if (s == "fpa") return Mode::FPA;
  if (s == "receive-only-ma" || s == "rma") return Mode::ReceiveOnlyMA;
  if (s == "local-only" || s == "local") return Mode::LocalOnly;
  throw ConfigError("unknown mode '" + s + "' (expected full-ma, fpa, receive-only-ma, local-only)");
}

struct SolverOptions {
  int max_outer = 200;
  int max_inner = 200;
  double inner_tol = 1e-6;
  double violation_tol = 1e-5;
  PenaltySchedule schedule;
  Mode mode = Mode::FullMA;
  std::uint64_t seed = 0;
  int unit_modulus_sweeps = 1;
  // global lattice search for antenna positions on every n-th inner sweep of
  // an outer iteration, counting from the first; the rest refine locally
  int position_scan_every = 200;
  bool return_best = true;  // converged runs report the best validated iterate, not the last

  void validate() const {
    if (max_outer < 1 || max_inner < 1 || unit_modulus_sweeps < 1 || position_scan_every < 1) throw ConfigError("solver counts must be >= 1");
    if (!(inner_tol > 0 && violation_tol > 0)) throw ConfigError("solver tolerances must be positive");
    if (!schedule.valid()) throw ConfigError("invalid penalty schedule");
  }
};

struct TraceRow {
  int outer_iter = 0;
  int inner_iters_used = 0;
  double al_objective = 0;
  double delay_bound = 0;
  double max_delay = 0;
  double violation = 0;
  double kappa = 0;
  double eps2 = 0;
};

using ConvergenceTrace = std::vector<TraceRow>;

struct SolveResult {
  Solution solution;
  ConvergenceTrace trace;
  bool converged = false;
  int outer_iterations = 0;
};

inline bool moves_ue(Mode m) { return m == Mode::FullMA; }
inline bool moves_bs(Mode m) { return m == Mode::FullMA || m == Mode::ReceiveOnlyMA; }

inline Mat2X initial_array(int count, double side, double spacing, bool movable, std::mt19937_64& rng) {
  if (!movable) return grid_layout(count, spacing);
  if (auto p = sample_layout(count, side, spacing, rng)) return *p;
  const Mat2X g = grid_layout(count, spacing);
  if (g.cwiseAbs().maxCoeff() > 0.5 * side + 1e-12) {
    throw InvalidGeometry("mobile region cannot host the requested array at the minimum spacing");
  }
  return g;
}

inline AntennaLayout initial_layout(const Problem& p, Mode mode, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  AntennaLayout lay;
  lay.bs_height = p.bs_height;
  for (int k = 0; k < p.K; ++k) {
    lay.ue_positions.push_back(initial_array(p.Nt, 2 * p.half_side_tx, p.spacing_tx, moves_ue(mode), rng));
  }
  lay.bs_positions = initial_array(p.Nr, 2 * p.half_side_rx, p.spacing_rx, moves_bs(mode), rng);
  return lay;
}

// SINR of every link in the normalized problem (noise power 1).
inline std::vector<LinkQuality> normalized_links(const Problem& p, const AntennaLayout& lay,
                                                 const std::vector<VecC>& w, const std::vector<VecC>& f) {
  std::vector<MatC> H;
  for (int k = 0; k < p.K; ++k) H.push_back(normalized_channel(p, lay, k));
  const MatC Hj = jam_response(p, lay).adjoint();
  return sinr_and_rate(H, Hj, w, f, p.jam_beam, 1.0);
}

inline PrimalState initialize(const Problem& p, Mode mode, std::uint64_t seed) {
  PrimalState s;
  s.layout = initial_layout(p, mode, seed);
  for (int k = 0; k < p.K; ++k) {
    const MatC H = normalized_channel(p, s.layout, k);
    Eigen::JacobiSVD<MatC> svd(H, Eigen::ComputeFullV);
    VecC w = svd.matrixV().col(0);
    VecC hw = H * w;
    VecC f = hw.norm() > 0 ? VecC(hw / hw.norm()) : VecC(VecC::Unit(p.Nr, 0));
    s.precoder.push_back(w);
    s.combiner.push_back(f);
  }
  const auto links = normalized_links(p, s.layout, s.precoder, s.combiner);
  s.sinr.resize(p.K);
  s.rate.resize(p.K);
  for (int k = 0; k < p.K; ++k) {
    s.sinr(k) = std::max(links[k].sinr, kSinrFloor);
    s.rate(k) = std::log2(1.0 + s.sinr(k));
  }
  s.offload = VecD::Constant(p.K, 0.5);
  s.mec_alloc = VecD::Constant(p.K, 1.0 / p.K);
  s.compute_time = 0.5 * (s.offload.array().square() + (p.compute_scale / s.mec_alloc.array()).square());
  s.tx_time = 0.5 * (s.offload.array().square() + (p.tx_scale / s.rate.array()).square());
  propagate_auxiliaries(s, p);
  return s;
}

inline DualState zero_duals(const PrimalState& s, const Problem& p) { return Couplings::zeros_like(residuals(s, p)); }

inline SweepContext make_context(const Problem& p, const DualState& duals, double kappa, Mode mode,
                                 const PrimalState& s, int unit_modulus_sweeps = 1, bool global_positions = true) {
  SweepContext cx;
  cx.problem = &p;
  cx.duals = &duals;
  cx.kappa = kappa;
  cx.anchor = make_anchor(s);
  cx.move_ue = moves_ue(mode);
  cx.move_bs = moves_bs(mode);
  cx.unit_modulus_sweeps = unit_modulus_sweeps;
  cx.global_positions = global_positions;
  return cx;
}

// One pass over every sub-block in the fixed order, anchors refreshed first.
inline void inner_sweep(PrimalState& s, const DualState& duals, double kappa, const Problem& p, Mode mode,
                        int unit_modulus_sweeps = 1, bool global_positions = true) {
  const SweepContext cx = make_context(p, duals, kappa, mode, s, unit_modulus_sweeps, global_positions);
  for (SubBlock b : kSweepOrder) apply_sub_block(b, s, cx);
}

// Physical solution from the primal state: channels, rates and delays are
// recomputed from positions, w, f, delta and Psi only.
inline Solution extract_solution(const Scenario& sc, const Problem& p, const PrimalState& s) {
  Solution sol;
  sol.layout = s.layout;
  for (auto& pos : sol.layout.ue_positions) pos = pos.cwiseMax(-p.half_side_tx).cwiseMin(p.half_side_tx);
  sol.layout.bs_positions = sol.layout.bs_positions.cwiseMax(-p.half_side_rx).cwiseMin(p.half_side_rx);
  for (int k = 0; k < p.K; ++k) sol.precoders.push_back(p.power_scale * s.precoder[k]);
  sol.combiners = s.combiner;
  sol.offload = s.offload.cwiseMax(0.0).cwiseMin(1.0);
  sol.mec_alloc = s.mec_alloc * p.mec_budget;

  std::vector<MatC> H;
  for (int k = 0; k < p.K; ++k) H.push_back(uplink_channel(sol.layout, k, sc.ue_paths[k], sc.rx_paths[k], p.wavelength));
  const MatC Hj = jammer_channel(sol.layout, sc.jam_rx_paths, sc.jam_tx_response, p.wavelength);
  const auto links = sinr_and_rate(H, Hj, sol.precoders, sol.combiners, sc.jam_signal, sc.config.noise_power_mw);
  sol.sinr.resize(p.K);
  sol.rates.resize(p.K);
  for (int k = 0; k < p.K; ++k) {
    sol.sinr(k) = links[k].sinr;
    sol.rates(k) = links[k].rate;
  }
  const DelayReport d = delay_objective(sc.tasks, sol.rates, sc.config.bandwidth_hz, sol.offload, sol.mec_alloc);
  sol.per_ue_delay = d.per_ue;
  sol.max_delay = d.max_delay;
  return sol;
}

inline Solution local_only_solution(const Scenario& sc, const Problem& p, std::uint64_t seed) {
  PrimalState s = initialize(p, Mode::FPA, seed);
  s.offload.setZero();
  return extract_solution(sc, p, s);
}

inline SolveResult solve(const Scenario& sc, const SolverOptions& opt) {
  opt.validate();
  const Problem p = make_problem(sc);
  SolveResult out;
  if (opt.mode == Mode::LocalOnly) {
    out.solution = local_only_solution(sc, p, opt.seed);
    out.converged = true;
    return out;
  }

  PrimalState s = initialize(p, opt.mode, opt.seed);
  DualState duals = zero_duals(s, p);
  PenaltySchedule sched = opt.schedule;
  double prev_gamma = s.delay_bound;
  Solution best;
  bool have_best = false;

  for (int outer = 1; outer <= opt.max_outer; ++outer) {
    double al = al_objective(s, duals, sched.kappa, p);
    int used = 0;
    for (int it = 0; it < opt.max_inner; ++it) {
      inner_sweep(s, duals, sched.kappa, p, opt.mode, opt.unit_modulus_sweeps, it % opt.position_scan_every == 0);
      ++used;
      const double next = al_objective(s, duals, sched.kappa, p);
      const bool settled = std::abs(al - next) <= opt.inner_tol * std::max(1.0, std::abs(al));
      al = next;
      if (settled) break;
    }
    const Couplings r = residuals(s, p);
    const double viol = violation(r);
    TraceRow row;
    row.outer_iter = outer;
    row.inner_iters_used = used;
    row.al_objective = al;
    row.delay_bound = s.delay_bound;
    row.violation = viol;
    row.kappa = sched.kappa;
    row.eps2 = sched.eps2;

    Solution sol = extract_solution(sc, p, s);
    row.max_delay = sol.max_delay;
    out.trace.push_back(row);
    if (validate_solution(sc, sol).empty() && (!have_best || sol.max_delay < best.max_delay)) {
      best = sol;
      have_best = true;
    }

    dual_or_penalty_step(r, duals, sched);
    out.outer_iterations = outer;
    const bool done = std::abs(s.delay_bound - prev_gamma) < sched.eps1 && viol < opt.violation_tol;
    prev_gamma = s.delay_bound;
    if (done) {
      out.converged = true;
      // every extracted iterate is a feasible physical solution; report the
      // best one unless the final iterate is asked for
      out.solution = opt.return_best && have_best && best.max_delay < sol.max_delay ? best : std::move(sol);
      return out;
    }
  }
  out.solution = have_best ? best : extract_solution(sc, p, s);
  return out;
}

}  // namespace mamec
