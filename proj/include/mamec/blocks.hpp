#pragma once

// Exact minimizers for the sub-blocks of the inner loop.
//
// Each pure function solves one small subproblem given its proximal centers,
// i.e. the value every coupling term would like the variable to take
// (for ||x - y + kappa*lambda||^2 the center of x is y - kappa*lambda). Subproblem
// objectives are the plain sums of squared distances to those centers; the
// common 1/(2 kappa) factor does not move the minimizer. Multipliers are
// reported for constraints written as g(x) <= 0 with Lagrangian obj + mu*g.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "mamec/al_core.hpp"

namespace mamec {

// ---------------------------------------------------------------- projections

// Multiplier search for a decreasing slack g: the smallest x >= 0 with g(x) <= 0,
// bracketed by doubling from 1 and refined by Illinois false position. The
// returned point is always on the feasible side.
template <class G>
double decreasing_root(G&& g, const char* where) {
  double lo = 0.0, hi = 1.0;
  double flo = g(lo), fhi = g(hi);
  int doublings = 0;
  while (fhi > 0.0) {
    lo = hi;
    flo = fhi;
    hi *= 2.0;
    fhi = g(hi);
    if (++doublings > 200) throw NumericFailure(where, "no multiplier bracket");
  }
  int kept = 0;
  for (int it = 0; it < 400; ++it) {
    if (hi - lo <= 1e-14 * std::max(1.0, hi) || fhi >= -1e-15) break;
    double x = std::isfinite(flo) ? lo + flo * (hi - lo) / (flo - fhi) : 0.5 * (lo + hi);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = g(x);
    if (fx > 0.0) {
      lo = x;
      flo = fx;
      if (kept == 1) fhi *= 0.5;
      kept = 1;
    } else {
      hi = x;
      fhi = fx;
      if (kept == -1) flo *= 0.5;
      kept = -1;
    }
  }
  return hi;
}

inline VecC project_to_ball(const VecC& v, double radius) {
  const double n = v.norm();
  if (!std::isfinite(radius) || n <= radius) return v;
  if (n == 0.0) return v;
  return (radius / n) * v;
}

// argmin ||x - center||^2 + ||G x - target||^2, via (I + G^H G) x = center + G^H target.
inline VecC regularized_least_squares(const VecC& center, const MatC& G, const VecC& target) {
  MatC normal = G.adjoint() * G;
  normal.diagonal().array() += 1.0;
  return normal.llt().solve(center + G.adjoint() * target);
}

// ------------------------------------------------------------- unit modulus

inline double unit_modulus_objective(const MatC& B, const MatC& D, const MatC& C) {
  return (B.adjoint() * B * D).trace().real() - 2.0 * (B.adjoint() * C).trace().real();
}

// Cyclic entry-wise minimization of tr(B^H B D) - 2 Re tr(B^H C) over |b_ij| = 1.
inline MatC update_unit_modulus(const MatC& D, const MatC& C, MatC B, int sweeps = 1) {
  const Eigen::Index rows = B.rows(), cols = B.cols();
  for (int s = 0; s < sweeps; ++s) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      for (Eigen::Index j = 0; j < cols; ++j) {
        cd q = 0.0;
        for (Eigen::Index l = 0; l < cols; ++l)
          if (l != j) q += B(i, l) * D(l, j);
        const cd t = C(i, j) - q;
        const double mag = std::abs(t);
        if (mag > 0.0) B(i, j) = t / mag;
      }
    }
  }
  return B;
}

// ------------------------------------------------------------- timing block

struct TimingInput {
  // centers
  double offload_bound = 0, local_bound = 0, compute_time_aux = 0, tx_time_aux = 0;
  double offload_compute = 0, offload_local = 0, offload_tx = 0, mec_alloc_aux = 0, rate_aux = 0;
  double compute_scale = 0, tx_scale = 0, local_time = 0;
};

struct TimingOutput {
  double offload_bound = 0, local_bound = 0, compute_time_aux = 0, tx_time_aux = 0;
  double offload_compute = 0, offload_local = 0, offload_tx = 0, mec_alloc_aux = 0, rate_aux = 0;
  // 0: aux times <= offload bound, 1: local time <= local bound,
  // 2: compute-time restriction, 3: transmit-time restriction
  std::array<double, 4> multipliers{};
};

inline std::array<double, 4> timing_constraints(const TimingInput& in, const TimingOutput& o) {
  return {o.compute_time_aux + o.tx_time_aux - o.offload_bound,
          (1.0 - o.offload_local) * in.local_time - o.local_bound,
          o.offload_compute * o.offload_compute +
              in.compute_scale * in.compute_scale / (o.mec_alloc_aux * o.mec_alloc_aux) - 2.0 * o.compute_time_aux,
          o.offload_tx * o.offload_tx + in.tx_scale * in.tx_scale / (o.rate_aux * o.rate_aux) - 2.0 * o.tx_time_aux};
}

inline double timing_objective(const TimingInput& in, const TimingOutput& o) {
  auto sq = [](double x) { return x * x; };
  return sq(o.offload_bound - in.offload_bound) + sq(o.local_bound - in.local_bound) +
         sq(o.compute_time_aux - in.compute_time_aux) + sq(o.tx_time_aux - in.tx_time_aux) +
         sq(o.offload_compute - in.offload_compute) + sq(o.offload_local - in.offload_local) +
         sq(o.offload_tx - in.offload_tx) + sq(o.mec_alloc_aux - in.mec_alloc_aux) + sq(o.rate_aux - in.rate_aux);
}

// Positive root of x^4 - b x^3 - c = 0 (c > 0), which lies above max(b, 0).
inline double quartic_root(double b, double c) {
  const double m = std::max(b, 0.0);
  double x = m + std::pow(c, 0.25);
  for (int it = 0; it < 200; ++it) {
    const double h = x * x * x * (x - b) - c;
    const double dh = x * x * (4.0 * x - 3.0 * b);
    const double next = x - h / dh;
    if (!(next > m) || !(next < x)) break;  // Newton from the right decreases monotonically
    x = next;
  }
  return x;
}

struct TimeProjection {
  double time, offload, resource, multiplier;
};

// Euclidean projection of (c, a, b) onto {(t, d, s) : d^2 + D^2/s^2 <= 2t, s > 0}.
inline TimeProjection project_time_set(double c, double a, double b, double D) {
  auto g = [&](const TimeProjection& x) {
    return x.offload * x.offload + D * D / (x.resource * x.resource) - 2.0 * x.time;
  };
  if (b > 0.0 && g({c, a, b, 0.0}) <= 0.0) return {c, a, b, 0.0};
  auto at = [&](double nu) { return TimeProjection{c + nu, a / (1.0 + nu), quartic_root(b, nu * D * D), nu}; };
  return at(decreasing_root([&](double nu) { return g(at(nu)); }, "timing_aux"));
}

inline TimingOutput update_timing_aux(const TimingInput& in) {
  TimingOutput o;
  // (1 - delta^) T_loc <= gamma~_k, a half-space in (gamma~_k, delta^).
  {
    const double g = (1.0 - in.offload_local) * in.local_time - in.local_bound;
    const double t = std::max(g, 0.0) / (1.0 + in.local_time * in.local_time);
    o.local_bound = in.local_bound + t;
    o.offload_local = in.offload_local + in.local_time * t;
    o.multipliers[1] = 2.0 * t;
  }
  // alpha~_1 + alpha~_2 <= gamma_k with each alpha~ bounding its time restriction.
  // For a fixed multiplier mu of the sum constraint the two restrictions are
  // independent projections; the sum slack is decreasing in mu.
  struct Pieces {
    TimeProjection compute, tx;
    double bound;
  };
  auto at = [&](double mu) {
    return Pieces{project_time_set(in.compute_time_aux - 0.5 * mu, in.offload_compute, in.mec_alloc_aux, in.compute_scale),
                  project_time_set(in.tx_time_aux - 0.5 * mu, in.offload_tx, in.rate_aux, in.tx_scale),
                  in.offload_bound + 0.5 * mu};
  };
  auto slack = [](const Pieces& x) { return x.compute.time + x.tx.time - x.bound; };
  Pieces best = at(0.0);
  double mu = 0.0;
  if (slack(best) > 0.0) {
    mu = decreasing_root([&](double m) { return slack(at(m)); }, "timing_aux");
    best = at(mu);
  }
  o.offload_bound = best.bound;
  o.compute_time_aux = best.compute.time;
  o.offload_compute = best.compute.offload;
  o.mec_alloc_aux = best.compute.resource;
  o.tx_time_aux = best.tx.time;
  o.offload_tx = best.tx.offload;
  o.rate_aux = best.tx.resource;
  o.multipliers[0] = mu;
  o.multipliers[2] = best.compute.multiplier;
  o.multipliers[3] = best.tx.multiplier;
  return o;
}

// -------------------------------------------------------------- spacing aux

struct SpacingOutput {
  Vec2 gap;
  double multiplier;
};

// min ||x - center||^2  s.t.  d - (anchor/||anchor||) . x <= 0.
inline SpacingOutput update_spacing_aux(const Vec2& center, const Vec2& anchor, double d) {
  const double an = anchor.norm();
  if (!(an > 0.0)) throw NumericFailure("spacing_aux", "anchor gap has zero length");
  const Vec2 n = anchor / an;
  const double g = d - n.dot(center);
  if (g <= 0.0) return {center, 0.0};
  return {center + g * n, 2.0 * g};
}

// ------------------------------------------------------- interference block

inline constexpr double kSinrFloor = 1e-12;

struct InterferenceInput {
  VecC cross_center;       // centers of u~_{k,.}
  int self = 0;            // index k inside cross_center
  double sinr_center = 0;  // center of nu~_k
  cd jam_center = 0.0;     // center of u_k
  VecC combiner_center;    // center of f~_k
  cd anchor_gain = 0.0;    // u~_{k,k} at the anchor
  double anchor_sinr = 1;  // nu~_k at the anchor
};

struct InterferenceOutput {
  VecC cross_gain;
  double sinr_aux = 0;
  cd jam_gain = 0.0;
  VecC combiner_aux;
  double multiplier = 0;
};

// Linearized SINR restriction (noise power normalized to 1); <= 0 is feasible.
inline double interference_constraint(const InterferenceInput& in, const VecC& cross, double sinr_aux, cd jam,
                                      double combiner_aux_energy) {
  const cd a = in.anchor_gain;
  const double na = in.anchor_sinr;
  double v = combiner_aux_energy + std::norm(jam);
  for (Eigen::Index j = 0; j < cross.size(); ++j)
    if (j != in.self) v += std::norm(cross(j));
  v -= 2.0 * std::real(std::conj(a) * cross(in.self)) / na;
  v += std::norm(a) * sinr_aux / (na * na);
  return v;
}

inline double interference_constraint(const InterferenceInput& in, const InterferenceOutput& o) {
  return interference_constraint(in, o.cross_gain, o.sinr_aux, o.jam_gain, o.combiner_aux.squaredNorm());
}

inline double interference_objective(const InterferenceInput& in, const InterferenceOutput& o) {
  return (o.cross_gain - in.cross_center).squaredNorm() + std::pow(o.sinr_aux - in.sinr_center, 2) +
         std::norm(o.jam_gain - in.jam_center) + (o.combiner_aux - in.combiner_center).squaredNorm();
}

inline InterferenceOutput interference_at(const InterferenceInput& in, double mu) {
  InterferenceOutput o;
  o.multiplier = mu;
  o.cross_gain = in.cross_center / (1.0 + mu);
  o.cross_gain(in.self) = in.cross_center(in.self) + mu * in.anchor_gain / in.anchor_sinr;
  o.jam_gain = in.jam_center / (1.0 + mu);
  o.combiner_aux = in.combiner_center / (1.0 + mu);
  const double na = in.anchor_sinr;
  o.sinr_aux = std::max(in.sinr_center - mu * std::norm(in.anchor_gain) / (2.0 * na * na), kSinrFloor);
  return o;
}

inline InterferenceOutput update_interference_aux(const InterferenceInput& in) {
  if (!(in.anchor_sinr > 0.0)) throw NumericFailure("interference_aux", "anchor SINR must be positive");
  auto q = [&](double mu) { return interference_constraint(in, interference_at(in, mu)); };
  if (q(0.0) <= 0.0) return interference_at(in, 0.0);
  double lo = 0.0, hi = 1.0;
  int doublings = 0;
  while (q(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > 60) throw NumericFailure("interference_aux", "no multiplier bracket after 60 doublings");
  }
  for (int it = 0; it < 300; ++it) {
    if (q(hi) >= -1e-10 || hi - lo <= 1e-16 * hi) break;
    const double mid = 0.5 * (lo + hi);
    if (q(mid) > 0.0) lo = mid; else hi = mid;
  }
  return interference_at(in, hi);
}

// ----------------------------------------------------------- scalar updates

// gamma = argmin gamma + (1/2 kappa) sum_k [(gamma - a_k)^2 + (gamma - b_k)^2].
inline double update_global_delay(const VecD& offload_centers, const VecD& local_centers, double kappa) {
  const double K = static_cast<double>(offload_centers.size());
  return (offload_centers.sum() + local_centers.sum() - kappa) / (2.0 * K);
}

inline double update_offload_ratio(double c1, double c2, double c3) {
  return std::clamp((c1 + c2 + c3) / 3.0, 0.0, 1.0);
}

struct RateSinrProjection {
  double rate, sinr, multiplier;
};

// Projection of (rate_center, sinr_center) onto {Gamma <= log2(1 + nu)}.
inline RateSinrProjection project_rate_sinr(double rate_center, double sinr_center) {
  auto feasible_gap = [](double r, double s) { return s > -1.0 ? r - std::log2(1.0 + s) : kInfiniteDelay; };
  if (feasible_gap(rate_center, sinr_center) <= 0.0) return {rate_center, sinr_center, 0.0};
  auto at = [&](double eta) {
    const double root = std::sqrt((1.0 + sinr_center) * (1.0 + sinr_center) + 2.0 * eta / std::log(2.0));
    return RateSinrProjection{rate_center - 0.5 * eta, 0.5 * (sinr_center - 1.0 + root), eta};
  };
  auto gap = [&](const RateSinrProjection& x) { return feasible_gap(x.rate, x.sinr); };
  return at(decreasing_root([&](double eta) { return gap(at(eta)); }, "rate_slack"));
}

struct RateSlackInput {
  double compute_center = 0, tx_center = 0, sinr_center = 0, rate_center = 0;
};

struct RateSlackOutput {
  double compute_time = 0, tx_time = 0, sinr = 0, rate = 0;
  double multiplier = 0;  // rate <= log2(1 + sinr)
};

inline RateSlackOutput update_rate_slack(const RateSlackInput& in) {
  const RateSinrProjection rs = project_rate_sinr(in.rate_center, in.sinr_center);
  return {in.compute_center, in.tx_center, rs.sinr, rs.rate, rs.multiplier};
}

struct ComputeAllocOutput {
  VecD alloc;
  double multiplier;
};

// min ||x - centers||^2  s.t.  sum(x) <= budget.
inline ComputeAllocOutput update_compute_alloc(const VecD& centers, double budget) {
  const double K = static_cast<double>(centers.size());
  const double mu = std::max(0.0, 2.0 * (centers.sum() - budget) / K);
  return {(centers.array() - 0.5 * mu).matrix(), mu};
}

struct RateVarOutput {
  double rate, multiplier;
};

// min (Gamma - center)^2  s.t.  Gamma <= log2(1 + nu).
inline RateVarOutput update_rate_var(double center, double sinr) {
  const double cap = std::log2(1.0 + sinr);
  if (center <= cap) return {center, 0.0};
  return {cap, 2.0 * (center - cap)};
}

// Projection of the center onto the lower bound on Gamma implied by
// delta~^2 + D^2/Gamma^2 <= 2 alpha_2 (cross-block form of the transmit-time restriction).
inline RateVarOutput update_rate_var_time_bound(double center, double offload_tx, double tx_time, double tx_scale) {
  const double room = 2.0 * tx_time - offload_tx * offload_tx;
  if (!(room > 0.0)) throw NumericFailure("rate_var", "transmit-time restriction infeasible for every rate");
  const double bound = tx_scale / std::sqrt(room);
  if (center >= bound) return {center, 0.0};
  return {bound, 2.0 * (bound - center)};
}

// Combiner: min ||f - center||^2 + sum_j |t_j - f^H m_j|^2, columns m_j of `beams`.
inline VecC update_receive_combiner(const VecC& center, const MatC& beams, const VecC& targets) {
  return regularized_least_squares(center, beams.adjoint(), targets.conjugate());
}

// Same objective with ||f|| = 1. The SINR is invariant to the combiner scale,
// so fixing it loses nothing and keeps the noise term from being scaled away.
// Minimizes f^H M f - 2 Re(b^H f), M = I + B B^H, via the secular equation
// sum_i |q_i^H b|^2 / (l_i - theta)^2 = 1 on theta < l_min.
inline VecC update_receive_combiner_on_sphere(const VecC& center, const MatC& beams, const VecC& targets) {
  const Eigen::Index n = center.size();
  MatC M = beams * beams.adjoint();
  M.diagonal().array() += 1.0;
  const VecC b = center + beams * targets.conjugate();
  Eigen::SelfAdjointEigenSolver<MatC> eig(M);
  if (eig.info() != Eigen::Success) throw NumericFailure("receive_combiner", "eigendecomposition failed");
  const VecD& l = eig.eigenvalues();
  const MatC& Q = eig.eigenvectors();
  const VecC beta = Q.adjoint() * b;
  const double bn = b.norm();
  if (bn == 0.0) return Q.col(0);
  const double lmin = l(0);
  // s = l_min - theta > 0; phi(s) decreases in s and phi(||b||) <= 1.
  auto phi = [&](double s) {
    double v = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) v += std::norm(beta(i)) / std::pow(l(i) - lmin + s, 2);
    return v;
  };
  auto at = [&](double s) {
    VecC y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = beta(i) / (l(i) - lmin + s);
    return VecC(Q * y);
  };
  const double s_min = 1e-14 * std::max(1.0, lmin);
  if (phi(s_min) < 1.0) {
    // Hard case: b has (almost) no weight on the bottom eigenspace.
    VecC y = VecC::Zero(n);
    double used = 0.0;
    Eigen::Index bottom = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double gap = l(i) - lmin;
      if (gap <= 1e-12 * std::max(1.0, lmin)) {
        bottom = i;
        continue;
      }
      y(i) = beta(i) / gap;
      used += std::norm(y(i));
    }
    y(bottom) = std::sqrt(std::max(0.0, 1.0 - used));
    return Q * y;
  }
  double lo = s_min, hi = bn;
  for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (phi(mid) > 1.0) lo = mid; else hi = mid;
  }
  const VecC f = at(hi);
  return f / f.norm();
}

// mu: min ||mu - center||^2 + ||target - G mu||^2 with G = B_r^H diag(gains).
inline VecC update_effective_channels(const VecC& center, const MatC& G, const VecC& target) {
  return regularized_least_squares(center, G, target);
}

// w~: min ||w~ - center||^2 + ||target - B w~||^2.
inline VecC update_precoder_aux(const VecC& center, const MatC& B, const VecC& target) {
  return regularized_least_squares(center, B, target);
}

// mu~_{k'} or u_J: min ||x - center||^2 + sum_k |t_k - f_k^H x|^2, columns f_k of `combiners`.
inline VecC update_mu_tilde_uj(const VecC& center, const MatC& combiners, const VecC& targets) {
  return regularized_least_squares(center, combiners.adjoint(), targets);
}

// ---------------------------------------------------------------- positions

// Local cost of one antenna: sum_l |exp(j phi_l(p)) - c_l|^2 + sum_i ||p - t_i||^2,
// phi_l(p) = g_l . p + o_l.
struct AntennaCost {
  Mat2X slopes;       // 2 x n, g_l = (2 pi / lambda) * direction
  VecD offsets;       // o_l
  VecC targets;       // c_l
  Mat2X pair_targets; // t_i

  double value(const Vec2& p) const {
    double v = (pair_targets.colwise() - p).colwise().squaredNorm().sum();
    for (Eigen::Index l = 0; l < slopes.cols(); ++l) {
      v += std::norm(std::polar(1.0, slopes.col(l).dot(p) + offsets(l)) - targets(l));
    }
    return v;
  }
};

// Quadratic surrogate J(p) = p^T M p - 2 r^T p + const.
struct PositionQuadratic {
  Eigen::Matrix2d M;
  Vec2 r;
  double constant = 0.0;
  double value(const Vec2& p) const { return p.dot(M * p) - 2.0 * r.dot(p) + constant; }
};

// Phase terms |c_l| (phi_l(p) - theta_l)^2 with theta_l the branch of arg(c_l)
// nearest the phase at `current`; pair terms kept as they are.
inline PositionQuadratic position_surrogate(const AntennaCost& cost, const Vec2& current) {
  PositionQuadratic q;
  const double pairs = static_cast<double>(cost.pair_targets.cols());
  q.M = pairs * Eigen::Matrix2d::Identity();
  q.r = cost.pair_targets.rowwise().sum();
  q.constant = cost.pair_targets.colwise().squaredNorm().sum();
  for (Eigen::Index l = 0; l < cost.slopes.cols(); ++l) {
    const double w = std::abs(cost.targets(l));
    if (w == 0.0) continue;
    const Vec2 g = cost.slopes.col(l);
    const double phi = g.dot(current) + cost.offsets(l);
    double theta = std::arg(cost.targets(l));
    theta += 2.0 * kPi * std::round((phi - theta) / (2.0 * kPi));
    const double tau = theta - cost.offsets(l);
    q.M += w * g * g.transpose();
    q.r += w * tau * g;
    q.constant += w * tau * tau;
  }
  return q;
}

// Exact minimizer of a convex 2-D quadratic over the square [-h, h]^2.
inline Vec2 minimize_on_box(const PositionQuadratic& q, double h) {
  const Eigen::Matrix2d& M = q.M;
  const double tr = M.trace();
  // rank-deficient when no pair terms and the phase slopes are parallel: take the min-norm minimizer
  const Vec2 free = M.determinant() <= 1e-14 * tr * tr ? Vec2(M.completeOrthogonalDecomposition().solve(q.r))
                                                        : Vec2(M.ldlt().solve(q.r));
  if (free.cwiseAbs().maxCoeff() <= h) return free;
  Vec2 best = Vec2::Zero();
  double best_val = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 2; ++axis) {
    const int other = 1 - axis;
    for (double side : {-h, h}) {
      Vec2 p;
      p(axis) = side;
      p(other) = std::clamp((q.r(other) - M(other, axis) * side) / M(other, other), -h, h);
      const double v = p.dot(M * p) - 2.0 * q.r.dot(p);
      if (v < best_val) {
        best_val = v;
        best = p;
      }
    }
  }
  return best;
}

inline Vec2 solve_position_qp(const AntennaCost& cost, const Vec2& current, double half_side) {
  return minimize_on_box(position_surrogate(cost, current), half_side);
}

// Majorizer of the phase terms tight at `current` (uses 1 - cos x <= quadratic
// upper bound around x0); pair terms exact.
inline PositionQuadratic position_majorizer(const AntennaCost& cost, const Vec2& current) {
  PositionQuadratic q;
  const double pairs = static_cast<double>(cost.pair_targets.cols());
  q.M = pairs * Eigen::Matrix2d::Identity();
  q.r = cost.pair_targets.rowwise().sum();
  for (Eigen::Index l = 0; l < cost.slopes.cols(); ++l) {
    const double w = std::abs(cost.targets(l));
    if (w == 0.0) continue;
    const Vec2 g = cost.slopes.col(l);
    const double phi = g.dot(current) + cost.offsets(l);
    const double x0 = std::remainder(phi - std::arg(cost.targets(l)), 2.0 * kPi);
    const double tau = phi - std::sin(x0) - cost.offsets(l);
    q.M += w * g * g.transpose();
    q.r += w * tau * g;
  }
  return q;
}

inline bool spacing_ok(const Mat2X& positions, Eigen::Index n, const Vec2& p, double d) {
  for (Eigen::Index j = 0; j < positions.cols(); ++j)
    if (j != n && (positions.col(j) - p).norm() < d) return false;
  return true;
}

// Moves p radially out of every exclusion disc of radius d around the other
// antennas, then clamps to the box. The caller re-checks spacing.
inline Vec2 push_out_of_discs(const Mat2X& positions, Eigen::Index n, Vec2 p, double d, double half_side) {
  for (Eigen::Index j = 0; j < positions.cols(); ++j) {
    if (j == n) continue;
    const Vec2 r = p - positions.col(j);
    const double len = r.norm();
    if (len < d && len > 0.0) p = positions.col(j) + r * (d * (1.0 + 1e-12) / len);
  }
  return p.cwiseMax(-half_side).cwiseMin(half_side);
}

// Majorize-minimize iterations from a feasible p. Each step goes toward the
// majorizer minimum, pushed out of the exclusion discs and backtracked until
// it is feasible and lowers the cost. When that stalls (typically in a corner
// between two discs) a compass search takes over, then MM resumes. With
// probe_first the compass only runs if a tiny move already helps. The cost
// is nonincreasing throughout.
inline Vec2 polish_position(const AntennaCost& cost, const Mat2X& positions, Eigen::Index n, Vec2 p, double half_side,
                            double d, int iters, double first_step = 0.05, bool probe_first = false) {
  double val = cost.value(p);
  auto try_point = [&](const Vec2& q) {
    if (q.cwiseAbs().maxCoeff() > half_side || !spacing_ok(positions, n, q, d)) return false;
    const double v = cost.value(q);
    if (v >= val) return false;
    p = q;
    val = v;
    return true;
  };
  for (int round = 0; round < 8; ++round) {
    for (int it = 0; it < iters; ++it) {
      const Vec2 target = minimize_on_box(position_majorizer(cost, p), half_side);
      bool moved = false;
      double t = 1.0;
      for (int bt = 0; bt < 30 && !moved; ++bt, t *= 0.5) {
        const Vec2 q = push_out_of_discs(positions, n, p + t * (target - p), d, half_side);
        if ((q - p).norm() <= 1e-13) break;
        moved = try_point(q);
      }
      if (!moved) break;
    }
    if (!(first_step > 0.0)) break;
    // one compass move of the given step, including slides along any
    // exclusion circle p sits on
    auto compass_move = [&](double step) {
      for (int a = 0; a < 8; ++a) {
        const double ang = kPi * a / 4;
        if (try_point(p + step * Vec2(std::cos(ang), std::sin(ang)))) return true;
      }
      for (Eigen::Index j = 0; j < positions.cols(); ++j) {
        const Vec2 r = p - positions.col(j);
        if (j == n || r.norm() > d * (1.0 + 1e-6)) continue;
        const double base = std::atan2(r(1), r(0));
        for (double sgn : {-1.0, 1.0}) {
          const double ang = base + sgn * step / d;
          if (try_point(positions.col(j) + d * (1.0 + 1e-12) * Vec2(std::cos(ang), std::sin(ang)))) return true;
        }
      }
      return false;
    };
    // cheap local-minimum test: skip the full compass when no small move helps
    if (probe_first && !compass_move(1e-7 * d)) break;
    bool improved = false;
    for (double step = first_step * d; step > 1e-11 * std::max(d, half_side); step *= 0.5) {
      while (compass_move(step)) improved = true;
    }
    if (!improved) break;
  }
  return p;
}

// Best of: a backtracked step toward the surrogate minimizer, the same for the
// majorizer, and the polished best few points of a grid x grid lattice over
// the box. grid < 2 skips the global part and only polishes the incumbent. The
// local cost never increases and the spacing to every other antenna stays >= d.
inline Vec2 update_antenna_position(const AntennaCost& cost, const Mat2X& positions, Eigen::Index n, double half_side,
                                    double d, int grid = 16, int seeds = 4) {
  const Vec2 p0 = positions.col(n);
  Vec2 best = p0;
  double best_val = cost.value(p0);
  auto consider = [&](const Vec2& p) {
    if (!spacing_ok(positions, n, p, d)) return false;
    const double v = cost.value(p);
    if (v < best_val) {
      best_val = v;
      best = p;
    }
    return true;
  };
  const double e0 = best_val;
  for (const Vec2& target : {minimize_on_box(position_surrogate(cost, p0), half_side),
                             minimize_on_box(position_majorizer(cost, p0), half_side)}) {
    double t = 1.0;
    for (int it = 0; it < 12; ++it, t *= 0.5) {
      const Vec2 p = p0 + t * (target - p0);
      if (cost.value(p) <= e0 && consider(p)) break;
    }
  }
  if (grid < 2) {
    // local refinement only
    return polish_position(cost, positions, n, best, half_side, d, 100, 0.05, true);
  }
  {
    std::vector<std::pair<double, Vec2>> scan;
    const double step = 2.0 * half_side / (grid - 1);
    for (int a = 0; a < grid; ++a)
      for (int b = 0; b < grid; ++b) {
        const Vec2 p(-half_side + a * step, -half_side + b * step);
        if (spacing_ok(positions, n, p, d)) scan.emplace_back(cost.value(p), p);
      }
    // pockets between crowded discs may hold no lattice point, but each is
    // bounded by exclusion circles
    for (Eigen::Index j = 0; j < positions.cols(); ++j) {
      if (j == n) continue;
      for (int a = 0; a < 2 * grid; ++a) {
        const double ang = kPi * a / grid;
        const Vec2 p = positions.col(j) + d * (1.0 + 1e-12) * Vec2(std::cos(ang), std::sin(ang));
        if (p.cwiseAbs().maxCoeff() <= half_side && spacing_ok(positions, n, p, d)) scan.emplace_back(cost.value(p), p);
      }
    }
    std::sort(scan.begin(), scan.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    // best candidates at least one lattice step apart, so the polished seeds
    // tend to land in different basins
    std::vector<Vec2> picked;
    for (const auto& [v, p] : scan) {
      if (static_cast<int>(picked.size()) >= seeds) break;
      bool near = false;
      for (const Vec2& q : picked) near |= (p - q).norm() < step;
      if (!near) picked.push_back(p);
    }
    for (const Vec2& p : picked) consider(polish_position(cost, positions, n, p, half_side, d, 100));
  }
  // the incumbent may itself sit in a better basin than any lattice point
  consider(polish_position(cost, positions, n, best, half_side, d, 100));
  // a minimizer pinned to an exclusion circle can sit in the wrong ripple of
  // the phase terms along it; rescan each active circle
  for (Eigen::Index j = 0; j < positions.cols(); ++j) {
    if (j == n || (positions.col(j) - best).norm() > d * (1.0 + 1e-6)) continue;
    Vec2 seed = best;
    double seed_val = best_val;
    for (int a = 0; a < 64; ++a) {
      const double ang = 2.0 * kPi * a / 64;
      const Vec2 p = positions.col(j) + d * (1.0 + 1e-12) * Vec2(std::cos(ang), std::sin(ang));
      if (p.cwiseAbs().maxCoeff() > half_side || !spacing_ok(positions, n, p, d)) continue;
      const double v = cost.value(p);
      if (v < seed_val) {
        seed_val = v;
        seed = p;
      }
    }
    if (seed != best) consider(polish_position(cost, positions, n, seed, half_side, d, 100));
  }
  return best;
}

// ------------------------------------------------------ state-level wrappers

struct SCAAnchor {
  VecC self_gain;  // u~_{k,k}
  VecD sinr_aux;   // nu~_k
  std::vector<Mat2X> ue_gaps;
  Mat2X bs_gaps;
};

inline SCAAnchor make_anchor(const PrimalState& s) {
  SCAAnchor a;
  a.self_gain = s.cross_gain.diagonal();
  a.sinr_aux = s.sinr_aux;
  a.ue_gaps = s.ue_gaps;
  a.bs_gaps = s.bs_gaps;
  return a;
}

struct SweepContext {
  const Problem* problem = nullptr;
  const DualState* duals = nullptr;
  double kappa = 1.0;
  SCAAnchor anchor;
  bool move_ue = true;
  bool move_bs = true;
  int unit_modulus_sweeps = 1;
  bool global_positions = true;  // lattice search in the position block
};

enum class SubBlock {
  PrecoderAndCombinerAux,
  UnitModulus,
  TimingAux,
  SpacingAux,
  InterferenceAux,
  GlobalDelay,
  OffloadRatio,
  RateSlack,
  ComputeAlloc,
  ReceiveCombiner,
  EffectiveChannels,
  Positions,
  BeamAux,
  RateVar,
};

inline constexpr std::array<SubBlock, 14> kSweepOrder = {
    SubBlock::PrecoderAndCombinerAux, SubBlock::UnitModulus,  SubBlock::TimingAux,      SubBlock::SpacingAux,
    SubBlock::InterferenceAux,        SubBlock::GlobalDelay,  SubBlock::OffloadRatio,   SubBlock::RateSlack,
    SubBlock::ComputeAlloc,           SubBlock::ReceiveCombiner, SubBlock::EffectiveChannels, SubBlock::Positions,
    SubBlock::BeamAux,                SubBlock::RateVar};

inline const char* sub_block_name(SubBlock b) {
  switch (b) {
    case SubBlock::PrecoderAndCombinerAux: return "precoder_combiner_aux";
    case SubBlock::UnitModulus: return "unit_modulus";
    case SubBlock::TimingAux: return "timing_aux";
    case SubBlock::SpacingAux: return "spacing_aux";
    case SubBlock::InterferenceAux: return "interference_aux";
    case SubBlock::GlobalDelay: return "global_delay";
    case SubBlock::OffloadRatio: return "offload_ratio";
    case SubBlock::RateSlack: return "rate_slack";
    case SubBlock::ComputeAlloc: return "compute_alloc";
    case SubBlock::ReceiveCombiner: return "receive_combiner";
    case SubBlock::EffectiveChannels: return "effective_channels";
    case SubBlock::Positions: return "positions";
    case SubBlock::BeamAux: return "beam_aux";
    case SubBlock::RateVar: return "rate_var";
  }
  return "?";
}

namespace detail {

// Interference input for UE k from the current state.
inline InterferenceInput interference_input(const PrimalState& s, const SweepContext& cx, int k) {
  const DualState& lam = *cx.duals;
  const double kap = cx.kappa;
  const int K = cx.problem->K;
  InterferenceInput in;
  in.cross_center.resize(K);
  for (int j = 0; j < K; ++j) in.cross_center(j) = s.combiner[k].dot(s.rx_beam[j]) - kap * lam.cross_gain(k, j);
  in.self = k;
  in.sinr_center = s.sinr(k) + kap * lam.sinr(k);
  in.jam_center = s.combiner[k].dot(s.jam_rx) - kap * lam.jam_gain(k);
  in.combiner_center = s.combiner[k] + kap * lam.combiner[k];
  in.anchor_gain = cx.anchor.self_gain(k);
  in.anchor_sinr = cx.anchor.sinr_aux(k);
  return in;
}

inline void precoder_and_combiner_aux(PrimalState& s, const SweepContext& cx) {
  const DualState& lam = *cx.duals;
  const double kap = cx.kappa;
  for (int k = 0; k < cx.problem->K; ++k) {
    s.precoder[k] = project_to_ball(s.precoder_aux[k] - kap * lam.precoder[k], 1.0);
    // Largest ||f~||^2 the linearized SINR restriction allows at the current u~, u, nu~.
    const InterferenceInput in = interference_input(s, cx, k);
    const double room =
        -interference_constraint(in, s.cross_gain.row(k).transpose(), s.sinr_aux(k), s.jam_gain(k), 0.0);
    s.combiner_aux[k] = project_to_ball(s.combiner[k] + kap * lam.combiner[k], std::sqrt(std::max(room, 0.0)));
  }
}

inline void unit_modulus(PrimalState& s, const SweepContext& cx) {
  const Problem& p = *cx.problem;
  const DualState& lam = *cx.duals;
  const double kap = cx.kappa;
  for (int k = 0; k < p.K; ++k) {
    {
      const VecC& x = s.precoder_aux[k];
      MatC D = x * x.adjoint();
      D.diagonal().array() += 1.0;
      const MatC C = (s.tx_beam[k] + kap * lam.tx_beam[k]) * x.adjoint() + ue_response(p, s.layout, k) +
                     kap * lam.ue_response[k];
      s.ue_response[k] = update_unit_modulus(D, C, s.ue_response[k], cx.unit_modulus_sweeps);
    }
    {
      const VecC x = p.ue_paths[k].gains.cwiseProduct(s.tx_beam[k]);
      MatC D = x * x.adjoint();
      D.diagonal().array() += 1.0;
      const MatC C = (s.rx_beam[k] + kap * lam.rx_beam[k]) * x.adjoint() +
                     (bs_response(p, s.layout, k) + kap * lam.bs_response[k]).adjoint();
      const MatC X = s.bs_response[k].adjoint();
      s.bs_response[k] = update_unit_modulus(D, C, X, cx.unit_modulus_sweeps).adjoint();
    }
  }
  const VecC& v = p.jam_beam;
  MatC D = v * v.adjoint();
  D.diagonal().array() += 1.0;
  const MatC C = (s.jam_rx + kap * lam.jam_rx) * v.adjoint() + (jam_response(p, s.layout) + kap * lam.jam_response).adjoint();
  const MatC X = s.jam_response.adjoint();
  s.jam_response = update_unit_modulus(D, C, X, cx.unit_modulus_sweeps).adjoint();
}

inline void timing_aux(PrimalState& s, const SweepContext& cx) {
  const Problem& p = *cx.problem;
  const DualState& lam = *cx.duals;
  const double kap = cx.kappa;
  for (int k = 0; k < p.K; ++k) {
    TimingInput in;
    in.offload_bound = s.delay_bound + kap * lam.offload_bound(k);
    in.local_bound = s.delay_bound + kap * lam.local_bound(k);
    in.compute_time_aux = s.compute_time(k) + kap * lam.compute_time(k);
    in.tx_time_aux = s.tx_time(k) + kap * lam.tx_time(k);
    in.offload_compute = s.offload(k) + kap * lam.offload_compute(k);
    in.offload_local = s.offload(k) + kap * lam.offload_local(k);
    in.offload_tx = s.offload(k) + kap * lam.offload_tx(k);
    in.mec_alloc_aux = s.mec_alloc(k) + kap * lam.mec_alloc(k);
    in.rate_aux = s.rate(k) + kap * lam.rate(k);
    in.compute_scale = p.compute_scale;
    in.tx_scale = p.tx_scale;
    in.local_time = p.local_time;
    const TimingOutput o = update_timing_aux(in);
    s.offload_bound(k) = o.offload_bound;
    s.local_bound(k) = o.local_bound;
    s.compute_time_aux(k) = o.compute_time_aux;
    s.tx_time_aux(k) = o.tx_time_aux;
    s.offload_compute(k) = o.offload_compute;
    s.offload_local(k) = o.offload_local;
    s.offload_tx(k) = o.offload_tx;
    s.mec_alloc_aux(k) = o.mec_alloc_aux;
    s.rate_aux(k) = o.rate_aux;
  }
}

inline void spacing_aux(PrimalState& s, const SweepContext& cx) {
  const Problem& p = *cx.problem;
  const DualState& lam = *cx.duals;
  const double kap = cx.kappa;
  for (int k = 0; k < p.K; ++k) {
    const Mat2X& pos = s.layout.ue_positions[k];
    for (std::size_t i = 0; i < p.ue_pairs.size(); ++i) {
      const auto [a, b] = p.ue_pairs[i];
      const Vec2 center = pos.col(a) - pos.col(b) - kap * lam.ue_gaps[k].col(i);
      s.ue_gaps[k].col(i) = update_spacing_aux(center, cx.anchor.ue_gaps[k].col(i), p.spacing_tx).gap;
    }
  }
  const Mat2X& bs = s.layout.bs_positions;
  for (std::size_t i = 0; i < p.bs_pairs.size(); ++i) {
    const auto [a, b] = p.bs_pairs[i];
    const Vec2 center = bs.col(a) - bs.col(b) - kap * lam.bs_gaps.col(i);
    s.bs_gaps.col(i) = update_spacing_aux(center, cx.anchor.bs_gaps.col(i), p.spacing_rx).gap;
  }
}

inline void interference_aux(PrimalState& s, const SweepContext& cx) {
  for (int k = 0; k < cx.problem->K; ++k) {
    const InterferenceOutput o = update_interference_aux(interference_input(s, cx, k));
    s.cross_gain.row(k) = o.cross_gain.transpose();
    s.sinr_aux(k) = o.sinr_aux;
    s.jam_gain(k) = o.jam_gain;
    s.combiner_aux[k] = o.combiner_aux;
  }
}

inline void global_delay(PrimalState& s, const SweepContext& cx) {
  const DualState& lam = *cx.duals;
  s.delay_bound = update_global_delay(s.offload_bound - cx.kappa * lam.offload_bound,
                                      s.local_bound - cx.kappa * lam.local_bound, cx.kappa);
}

inline void offload_ratio(PrimalState& s, const SweepContext& cx) {
  const DualState& lam = *cx.duals;
  const double kap = cx.kappa;
  for (int k = 0; k < cx.problem->K; ++k) {
    s.offload(k) = update_offload_ratio(s.offload_compute(k) - kap * lam.offload_compute(k),
                                        s.offload_local(k) - kap * lam.offload_local(k),
                                        s.offload_tx(k) - kap * lam.offload_tx(k));
  }
}

inline void rate_slack(PrimalState& s, const SweepContext& cx) {
  const DualState& lam = *cx.duals;
  const double kap = cx.kappa;
  for (int k = 0; k < cx.problem->K; ++k) {
    RateSlackInput in;
    in.compute_center = s.compute_time_aux(k) - kap * lam.compute_time(k);
    in.tx_center = s.tx_time_aux(k) - kap * lam.tx_time(k);
    in.sinr_center = s.sinr_aux(k) - kap * lam.sinr(k);
    in.rate_center = s.rate_aux(k) - kap * lam.rate(k);
    const RateSlackOutput o = update_rate_slack(in);
    s.compute_time(k) = o.compute_time;
    s.tx_time(k) = o.tx_time;
    s.sinr(k) = o.sinr;
    s.rate(k) = o.rate;
  }
}

inline void compute_alloc(PrimalState& s, const SweepContext& cx) {
  s.mec_alloc = update_compute_alloc(s.mec_alloc_aux - cx.kappa * cx.duals->mec_alloc, 1.0).alloc;
}

inline void receive_combiner(PrimalState& s, const SweepContext& cx) {
  const Problem& p = *cx.problem;
  const DualState& lam = *cx.duals;
  const double kap = cx.kappa;
  for (int k = 0; k < p.K; ++k) {
    MatC beams(p.Nr, p.K + 1);
    VecC targets(p.K + 1);
    for (int j = 0; j < p.K; ++j) {
      beams.col(j) = s.rx_beam[j];
      targets(j) = s.cross_gain(k, j) + kap * lam.cross_gain(k, j);
    }
    beams.col(p.K) = s.jam_rx;
    targets(p.K) = s.jam_gain(k) + kap * lam.jam_gain(k);
    s.combiner[k] = update_receive_combiner_on_sphere(s.combiner_aux[k] - kap * lam.combiner[k], beams, targets);
  }
}

inline MatC rx_beam_map(const PrimalState& s, const Problem& p, int k) {
  return s.bs_response[k].adjoint() * p.ue_paths[k].gains.asDiagonal();
}

inline void effective_channels(PrimalState& s, const SweepContext& cx) {
  const Problem& p = *cx.problem;
  const DualState& lam = *cx.duals;
  const double kap = cx.kappa;
  for (int k = 0; k < p.K; ++k) {
    s.tx_beam[k] = update_effective_channels(s.ue_response[k] * s.precoder_aux[k] - kap * lam.tx_beam[k],
                                             rx_beam_map(s, p, k), s.rx_beam[k] + kap * lam.rx_beam[k]);
  }
}

inline AntennaCost ue_antenna_cost(const PrimalState& s, const SweepContext& cx, int k, int n) {
  const Problem& p = *cx.problem;
  const DualState& lam = *cx.duals;
  const double kap = cx.kappa;
  const PathSet& paths = p.ue_paths[k];
  const double kw = wave_number(p.wavelength);
  AntennaCost c;
  c.slopes.resize(2, paths.size());
  c.offsets = VecD::Zero(paths.size());
  for (Eigen::Index l = 0; l < paths.size(); ++l) c.slopes.col(l) = kw * paths.direction(l);
  c.targets = s.ue_response[k].col(n) - kap * lam.ue_response[k].col(n);
  const Mat2X& pos = s.layout.ue_positions[k];
  std::vector<Vec2> t;
  for (std::size_t i = 0; i < p.ue_pairs.size(); ++i) {
    const auto [a, b] = p.ue_pairs[i];
    const Vec2 g = s.ue_gaps[k].col(i) + kap * lam.ue_gaps[k].col(i);
    if (a == n) t.push_back(pos.col(b) + g);
    if (b == n) t.push_back(pos.col(a) - g);
  }
  c.pair_targets.resize(2, t.size());
  for (std::size_t i = 0; i < t.size(); ++i) c.pair_targets.col(i) = t[i];
  return c;
}

inline AntennaCost bs_antenna_cost(const PrimalState& s, const SweepContext& cx, int m) {
  const Problem& p = *cx.problem;
  const DualState& lam = *cx.duals;
  const double kap = cx.kappa;
  const double kw = wave_number(p.wavelength);
  const Eigen::Index total = Eigen::Index(p.K) * p.L + p.Lj;
  AntennaCost c;
  c.slopes.resize(2, total);
  c.offsets.resize(total);
  c.targets.resize(total);
  Eigen::Index idx = 0;
  auto add = [&](const PathSet& paths, const MatC& B, const MatC& dual) {
    for (Eigen::Index l = 0; l < paths.size(); ++l, ++idx) {
      c.slopes.col(idx) = kw * paths.direction(l);
      c.offsets(idx) = kw * p.bs_height * paths.height_coefficient(l);
      c.targets(idx) = B(l, m) - kap * dual(l, m);
    }
  };
  for (int k = 0; k < p.K; ++k) add(p.rx_paths[k], s.bs_response[k], lam.bs_response[k]);
  add(p.jam_paths, s.jam_response, lam.jam_response);

  const Mat2X& pos = s.layout.bs_positions;
  std::vector<Vec2> t;
  for (std::size_t i = 0; i < p.bs_pairs.size(); ++i) {
    const auto [a, b] = p.bs_pairs[i];
    const Vec2 g = s.bs_gaps.col(i) + kap * lam.bs_gaps.col(i);
    if (a == m) t.push_back(pos.col(b) + g);
    if (b == m) t.push_back(pos.col(a) - g);
  }
  c.pair_targets.resize(2, t.size());
  for (std::size_t i = 0; i < t.size(); ++i) c.pair_targets.col(i) = t[i];
  return c;
}

inline void positions(PrimalState& s, const SweepContext& cx) {
  const Problem& p = *cx.problem;
  const int grid = cx.global_positions ? 16 : 0;
  if (cx.move_ue) {
    for (int k = 0; k < p.K; ++k) {
      Mat2X& pos = s.layout.ue_positions[k];
      for (int n = 0; n < p.Nt; ++n) {
        pos.col(n) = update_antenna_position(ue_antenna_cost(s, cx, k, n), pos, n, p.half_side_tx, p.spacing_tx, grid);
      }
    }
  }
  if (cx.move_bs) {
    Mat2X& pos = s.layout.bs_positions;
    for (int m = 0; m < p.Nr; ++m) {
      pos.col(m) = update_antenna_position(bs_antenna_cost(s, cx, m), pos, m, p.half_side_rx, p.spacing_rx, grid);
    }
  }
}

inline void beam_aux(PrimalState& s, const SweepContext& cx) {
  const Problem& p = *cx.problem;
  const DualState& lam = *cx.duals;
  const double kap = cx.kappa;
  MatC F(p.Nr, p.K);
  for (int k = 0; k < p.K; ++k) F.col(k) = s.combiner[k];
  for (int k = 0; k < p.K; ++k) {
    s.precoder_aux[k] = update_precoder_aux(s.precoder[k] + kap * lam.precoder[k], s.ue_response[k],
                                            s.tx_beam[k] + kap * lam.tx_beam[k]);
  }
  for (int j = 0; j < p.K; ++j) {
    const VecC center = rx_beam_map(s, p, j) * s.tx_beam[j] - kap * lam.rx_beam[j];
    VecC targets(p.K);
    for (int k = 0; k < p.K; ++k) targets(k) = s.cross_gain(k, j) + kap * lam.cross_gain(k, j);
    s.rx_beam[j] = update_mu_tilde_uj(center, F, targets);
  }
  const VecC center = s.jam_response.adjoint() * p.jam_beam - kap * lam.jam_rx;
  VecC targets(p.K);
  for (int k = 0; k < p.K; ++k) targets(k) = s.jam_gain(k) + kap * lam.jam_gain(k);
  s.jam_rx = update_mu_tilde_uj(center, F, targets);
}

inline void rate_var(PrimalState& s, const SweepContext& cx) {
  for (int k = 0; k < cx.problem->K; ++k) {
    s.rate(k) = update_rate_var(s.rate_aux(k) - cx.kappa * cx.duals->rate(k), s.sinr(k)).rate;
  }
}

}  // namespace detail

inline void apply_sub_block(SubBlock b, PrimalState& s, const SweepContext& cx) {
  switch (b) {
    case SubBlock::PrecoderAndCombinerAux: detail::precoder_and_combiner_aux(s, cx); break;
    case SubBlock::UnitModulus: detail::unit_modulus(s, cx); break;
    case SubBlock::TimingAux: detail::timing_aux(s, cx); break;
    case SubBlock::SpacingAux: detail::spacing_aux(s, cx); break;
    case SubBlock::InterferenceAux: detail::interference_aux(s, cx); break;
    case SubBlock::GlobalDelay: detail::global_delay(s, cx); break;
    case SubBlock::OffloadRatio: detail::offload_ratio(s, cx); break;
    case SubBlock::RateSlack: detail::rate_slack(s, cx); break;
    case SubBlock::ComputeAlloc: detail::compute_alloc(s, cx); break;
    case SubBlock::ReceiveCombiner: detail::receive_combiner(s, cx); break;
    case SubBlock::EffectiveChannels: detail::effective_channels(s, cx); break;
    case SubBlock::Positions: detail::positions(s, cx); break;
    case SubBlock::BeamAux: detail::beam_aux(s, cx); break;
    case SubBlock::RateVar: detail::rate_var(s, cx); break;
  }
}

}  // namespace mamec
