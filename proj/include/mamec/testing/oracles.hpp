#pragma once

// Slow reference computations used by the test suite and the `oracle` CLI
// command. Nothing in the solver path includes this header.
//
// Each oracle reaches its answer by a different route than the production
// code: explicit triple loops instead of matrix products, a generic
// log-barrier Newton method instead of multiplier searches, QR on the stacked
// least-squares system instead of Cholesky on the normal equations, and plain
// grids or random sampling for the non-convex pieces.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "mamec/blocks.hpp"
#include "mamec/channel.hpp"

namespace mamec::oracle {

// ------------------------------------------------------------------ channels

inline double phase(double x, double y, double h, double theta, double psi, double wavelength) {
  return 2.0 * kPi / wavelength * (x * std::cos(theta) * std::cos(psi) + y * std::cos(theta) * std::sin(psi) + h * std::sin(theta));
}

// H(m, n) = sum_l g_l exp(-j phase_rx(l, m)) exp(j phase_tx(l, n)).
inline MatC uplink_triple_loop(const Mat2X& tx, const Mat2X& rx, double h, const PathSet& tx_paths,
                               const PathSet& rx_paths, double wavelength) {
  MatC H = MatC::Zero(rx.cols(), tx.cols());
  for (Eigen::Index l = 0; l < tx_paths.size(); ++l)
    for (Eigen::Index m = 0; m < rx.cols(); ++m)
      for (Eigen::Index n = 0; n < tx.cols(); ++n) {
        const double pr = phase(rx(0, m), rx(1, m), h, rx_paths.elevations(l), rx_paths.azimuths(l), wavelength);
        const double pt = phase(tx(0, n), tx(1, n), 0.0, tx_paths.elevations(l), tx_paths.azimuths(l), wavelength);
        H(m, n) += tx_paths.gains(l) * std::exp(cd(0.0, pt - pr));
      }
  return H;
}

inline MatC jammer_triple_loop(const Mat2X& rx, double h, const PathSet& paths, const MatC& tx_response,
                               double wavelength) {
  MatC H = MatC::Zero(rx.cols(), tx_response.cols());
  for (Eigen::Index l = 0; l < paths.size(); ++l)
    for (Eigen::Index m = 0; m < rx.cols(); ++m)
      for (Eigen::Index n = 0; n < tx_response.cols(); ++n) {
        const double pr = phase(rx(0, m), rx(1, m), h, paths.elevations(l), paths.azimuths(l), wavelength);
        H(m, n) += paths.gains(l) * std::exp(cd(0.0, -pr)) * tx_response(l, n);
      }
  return H;
}

// Scalar re-evaluation of the SINR formula.
inline double sinr_direct(const std::vector<MatC>& H, const MatC& Hj, const std::vector<VecC>& w,
                          const std::vector<VecC>& f, const VecC& z, double noise, std::size_t k) {
  auto inner = [](const VecC& a, const VecC& b) {
    cd s = 0.0;
    for (Eigen::Index i = 0; i < a.size(); ++i) s += std::conj(a(i)) * b(i);
    return s;
  };
  double fn = 0.0;
  for (Eigen::Index i = 0; i < f[k].size(); ++i) fn += std::norm(f[k](i));
  if (fn == 0.0) return 0.0;
  double interf = 0.0;
  for (std::size_t j = 0; j < H.size(); ++j)
    if (j != k) interf += std::norm(inner(f[k], VecC(H[j] * w[j])));
  const double jam = std::norm(inner(f[k], VecC(Hj * z)));
  return std::norm(inner(f[k], VecC(H[k] * w[k]))) / (interf + fn * noise + jam);
}

// ----------------------------------------------------- log-barrier projection

// A smooth convex constraint g(x) <= 0 with its derivatives.
struct Constraint {
  std::function<double(const VecD&)> value;
  std::function<VecD(const VecD&)> grad;
  std::function<MatD(const VecD&)> hess;
};

inline Constraint linear_constraint(VecD a, double b) {  // a.x - b <= 0
  const Eigen::Index n = a.size();
  return {[a, b](const VecD& x) { return a.dot(x) - b; }, [a](const VecD&) { return a; },
          [n](const VecD&) { return MatD(MatD::Zero(n, n)); }};
}

struct BarrierResult {
  VecD x;
  VecD multipliers;  // for ||x - c||^2 + sum mu_i g_i(x)
  double objective = 0;
};

// min ||x - center||^2 s.t. every g_i(x) <= 0, from a strictly feasible x0.
// Damped Newton on t ||x - c||^2 - sum log(-g_i), t raised tenfold per stage.
inline BarrierResult barrier_projection(const VecD& center, const std::vector<Constraint>& cons, VecD x,
                                        double final_t = 1e13) {
  const Eigen::Index n = x.size();
  auto feasible = [&](const VecD& y) {
    for (const Constraint& c : cons)
      if (!(c.value(y) < 0.0)) return false;
    return true;
  };
  if (!feasible(x)) throw NumericFailure("oracle", "barrier start is not strictly feasible");
  auto phi = [&](const VecD& y, double t) {
    double v = t * (y - center).squaredNorm();
    for (const Constraint& c : cons) v -= std::log(-c.value(y));
    return v;
  };
  for (double t = 1.0; t <= final_t * 1.0000001; t *= 10.0) {
    for (int it = 0; it < 200; ++it) {
      VecD g = 2.0 * t * (x - center);
      MatD H = 2.0 * t * MatD::Identity(n, n);
      for (const Constraint& c : cons) {
        const double v = c.value(x);
        const VecD dg = c.grad(x);
        g += dg / (-v);
        H += dg * dg.transpose() / (v * v) + c.hess(x) / (-v);
      }
      const VecD dx = -H.ldlt().solve(g);
      const double dec = -g.dot(dx);
      if (dec <= 1e-14) break;
      double step = 1.0;
      const double f0 = phi(x, t);
      while (step > 1e-16) {
        const VecD y = x + step * dx;
        if (feasible(y) && phi(y, t) <= f0 - 0.25 * step * dec) break;
        step *= 0.5;
      }
      if (step <= 1e-16) break;
      x += step * dx;
    }
  }
  BarrierResult r;
  r.x = x;
  r.objective = (x - center).squaredNorm();
  r.multipliers.resize(cons.size());
  for (std::size_t i = 0; i < cons.size(); ++i) r.multipliers(i) = 1.0 / (final_t * -cons[i].value(x));
  return r;
}

// ---------------------------------------------------------- block oracles

inline VecD realify(const VecC& v) {
  VecD r(2 * v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    r(2 * i) = v(i).real();
    r(2 * i + 1) = v(i).imag();
  }
  return r;
}

inline VecC complexify(const VecD& r) {
  VecC v(r.size() / 2);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cd(r(2 * i), r(2 * i + 1));
  return v;
}

inline VecC ball_projection(const VecC& v, double radius) {
  const Eigen::Index n = 2 * v.size();
  Constraint ball{[radius](const VecD& x) { return x.squaredNorm() - radius * radius; },
                  [](const VecD& x) { return VecD(2.0 * x); },
                  [n](const VecD&) { return MatD(2.0 * MatD::Identity(n, n)); }};
  return complexify(barrier_projection(realify(v), {ball}, VecD::Zero(n)).x);
}

// Timing sub-block on x = (gamma_k, gamma~_k, a1, a2, dbar, dhat, dtil, Psi~, Gamma~).
inline TimingOutput timing(const TimingInput& in) {
  VecD c(9);
  c << in.offload_bound, in.local_bound, in.compute_time_aux, in.tx_time_aux, in.offload_compute, in.offload_local,
      in.offload_tx, in.mec_alloc_aux, in.rate_aux;
  std::vector<Constraint> cons;
  VecD a = VecD::Zero(9);
  a(2) = 1;
  a(3) = 1;
  a(0) = -1;
  cons.push_back(linear_constraint(a, 0.0));
  a.setZero();
  a(5) = -in.local_time;
  a(1) = -1;
  cons.push_back(linear_constraint(a, -in.local_time));
  auto am_gm = [](int t, int d, int s, double D) {
    return Constraint{
        [=](const VecD& x) { return x(s) > 0 ? x(d) * x(d) + D * D / (x(s) * x(s)) - 2 * x(t) : 1.0; },
        [=](const VecD& x) {
          VecD g = VecD::Zero(9);
          g(d) = 2 * x(d);
          g(s) = -2 * D * D / std::pow(x(s), 3);
          g(t) = -2;
          return g;
        },
        [=](const VecD& x) {
          MatD h = MatD::Zero(9, 9);
          h(d, d) = 2;
          h(s, s) = 6 * D * D / std::pow(x(s), 4);
          return h;
        }};
  };
  cons.push_back(am_gm(2, 4, 7, in.compute_scale));
  cons.push_back(am_gm(3, 6, 8, in.tx_scale));

  VecD x0 = c;
  x0(7) = std::max(c(7), 0.5);
  x0(8) = std::max(c(8), 0.5);
  x0(2) = 0.5 * (x0(4) * x0(4) + std::pow(in.compute_scale / x0(7), 2)) + 1.0;
  x0(3) = 0.5 * (x0(6) * x0(6) + std::pow(in.tx_scale / x0(8), 2)) + 1.0;
  x0(0) = x0(2) + x0(3) + 1.0;
  x0(1) = (1.0 - x0(5)) * in.local_time + 1.0;
  const BarrierResult r = barrier_projection(c, cons, x0);
  TimingOutput o;
  o.offload_bound = r.x(0);
  o.local_bound = r.x(1);
  o.compute_time_aux = r.x(2);
  o.tx_time_aux = r.x(3);
  o.offload_compute = r.x(4);
  o.offload_local = r.x(5);
  o.offload_tx = r.x(6);
  o.mec_alloc_aux = r.x(7);
  o.rate_aux = r.x(8);
  o.multipliers = {r.multipliers(0), r.multipliers(1), r.multipliers(2), r.multipliers(3)};
  return o;
}

inline Vec2 spacing(const Vec2& center, const Vec2& anchor, double d) {
  const VecD a = -anchor / anchor.norm();
  const Vec2 start = center + (std::abs(d - anchor.normalized().dot(center)) + 1.0) * anchor.normalized();
  return barrier_projection(center, {linear_constraint(a, -d)}, start).x;
}

// Interference sub-block on the real vector (cross, sinr, jam, combiner_aux).
inline InterferenceOutput interference(const InterferenceInput& in) {
  const Eigen::Index K = in.cross_center.size(), N = in.combiner_center.size();
  const Eigen::Index n = 2 * K + 1 + 2 + 2 * N;
  const Eigen::Index is = 2 * K, ij = 2 * K + 1;
  VecD c(n);
  c.head(2 * K) = realify(in.cross_center);
  c(is) = in.sinr_center;
  c(ij) = in.jam_center.real();
  c(ij + 1) = in.jam_center.imag();
  c.tail(2 * N) = realify(in.combiner_center);
  const cd a = in.anchor_gain;
  const double na = in.anchor_sinr;
  const Eigen::Index sr = 2 * in.self, si = 2 * in.self + 1;
  // Quadratic part: every cross entry except the own one, jam and combiner.
  VecD quad = VecD::Ones(n);
  quad(sr) = quad(si) = 0;
  quad(is) = 0;
  VecD lin = VecD::Zero(n);
  lin(sr) = -2.0 * a.real() / na;
  lin(si) = -2.0 * a.imag() / na;
  lin(is) = std::norm(a) / (na * na);
  Constraint q{[=](const VecD& x) { return x.cwiseProduct(quad).dot(x) + lin.dot(x); },
               [=](const VecD& x) { return VecD(2.0 * x.cwiseProduct(quad) + lin); },
               [=](const VecD&) { return MatD(2.0 * quad.asDiagonal()); }};
  VecD floor_a = VecD::Zero(n);
  floor_a(is) = -1.0;
  VecD x0 = VecD::Zero(n);
  x0(is) = 1.0;
  x0(sr) = (1.0 / na + 1.0) * a.real();
  x0(si) = (1.0 / na + 1.0) * a.imag();
  const BarrierResult r = barrier_projection(c, {q, linear_constraint(floor_a, -kSinrFloor)}, x0);
  InterferenceOutput o;
  o.cross_gain = complexify(r.x.head(2 * K));
  o.sinr_aux = r.x(is);
  o.jam_gain = cd(r.x(ij), r.x(ij + 1));
  o.combiner_aux = complexify(r.x.tail(2 * N));
  o.multiplier = r.multipliers(0);
  return o;
}

// (rate, sinr) projected onto rate <= log2(1 + sinr).
inline RateSinrProjection rate_sinr(double rate_center, double sinr_center) {
  const double ln2 = std::log(2.0);
  Constraint g{[=](const VecD& x) { return x(1) > -1.0 ? x(0) - std::log(1.0 + x(1)) / ln2 : 1.0; },
               [=](const VecD& x) { return VecD((VecD(2) << 1.0, -1.0 / ((1.0 + x(1)) * ln2)).finished()); },
               [=](const VecD& x) {
                 MatD h = MatD::Zero(2, 2);
                 h(1, 1) = 1.0 / ((1.0 + x(1)) * (1.0 + x(1)) * ln2);
                 return h;
               }};
  VecD x0(2);
  x0(1) = std::max(sinr_center, 0.0) + 1.0;
  x0(0) = std::log2(1.0 + x0(1)) - 1.0;
  const BarrierResult r = barrier_projection((VecD(2) << rate_center, sinr_center).finished(), {g}, x0);
  return {r.x(0), r.x(1), r.multipliers(0)};
}

inline VecD compute_alloc(const VecD& centers, double budget) {
  const VecD x0 = VecD::Constant(centers.size(), (budget - 1.0) / centers.size());
  return barrier_projection(centers, {linear_constraint(VecD::Ones(centers.size()), budget)}, x0).x;
}

// argmin of f on [lo, hi] over an even grid, then golden-section refinement
// inside the neighbouring cells.
template <class F>
double grid_argmin(F&& f, double lo, double hi, int points = 100000) {
  const double h = (hi - lo) / (points - 1);
  double best = lo, best_v = f(lo);
  for (int i = 1; i < points; ++i) {
    const double x = lo + i * h;
    const double v = f(x);
    if (v < best_v) {
      best_v = v;
      best = x;
    }
  }
  double a = std::max(lo, best - h), b = std::min(hi, best + h);
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    const double x1 = b - r * (b - a), x2 = a + r * (b - a);
    if (f(x1) < f(x2)) b = x2; else a = x1;
  }
  const double x = 0.5 * (a + b);
  return f(x) < best_v ? x : best;
}

// min ||x - center||^2 + ||G x - target||^2 as one stacked least-squares
// problem [I; G] x = [center; target], solved by Householder QR.
inline VecC stacked_least_squares(const VecC& center, const MatC& G, const VecC& target) {
  const Eigen::Index n = center.size(), m = G.rows();
  MatC A(n + m, n);
  A << MatC::Identity(n, n), G;
  VecC b(n + m);
  b << center, target;
  return A.colPivHouseholderQr().solve(b);
}

// min f^H M f - 2 Re(b^H f) on ||f|| = 1 with M = I + beams beams^H. Stationary
// points are f = (M - theta I)^{-1} b; the minimizer has theta below the smallest
// eigenvalue of M, located here by Cholesky success, with ||f(theta)|| = 1
// found by bisection.
inline VecC combiner_on_sphere(const VecC& center, const MatC& beams, const VecC& targets) {
  const Eigen::Index n = center.size();
  MatC M = beams * beams.adjoint();
  M.diagonal().array() += 1.0;
  const VecC b = center + beams * targets.conjugate();
  auto solve_at = [&](double theta, VecC& f) {
    MatC S = M;
    S.diagonal().array() -= theta;
    Eigen::LLT<MatC> llt(S);
    if (llt.info() != Eigen::Success) return false;
    f = llt.solve(b);
    return f.allFinite();
  };
  double lo = 1.0 - b.norm() - 1.0, hi = M.trace().real() + 1.0;
  VecC f = VecC::Zero(n);
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    VecC g;
    if (solve_at(mid, g) && g.norm() <= 1.0) {
      lo = mid;
      f = g;
    } else {
      hi = mid;
    }
  }
  return f / f.norm();
}

inline double combiner_sphere_objective(const VecC& f, const VecC& center, const MatC& beams, const VecC& targets) {
  double v = (f - center).squaredNorm();
  for (Eigen::Index j = 0; j < beams.cols(); ++j) v += std::norm(targets(j) - f.dot(beams.col(j)));
  return v;
}

// One cyclic sweep over the entries of B, each entry set by a 4096-point phase
// grid followed by golden refinement of the full objective.
inline MatC unit_modulus_sweep(const MatC& D, const MatC& C, MatC B) {
  for (Eigen::Index i = 0; i < B.rows(); ++i)
    for (Eigen::Index j = 0; j < B.cols(); ++j) {
      auto f = [&](double t) {
        MatC X = B;
        X(i, j) = std::polar(1.0, t);
        return unit_modulus_objective(X, D, C);
      };
      const double before = f(std::arg(B(i, j)));
      // padded so a minimum near the +-pi seam is not clipped by the refinement bracket
      const double pad = 2 * kPi / 4096;
      double t = grid_argmin(f, -kPi - pad, kPi + pad, 4098);
      // With one entry free on the unit circle the objective is a + b cos t + c sin t.
      // Fit it from three evaluations; golden search alone stalls near 1e-8 rad,
      // which later entries of the sweep would amplify.
      const double f0 = f(0.0), f1 = f(2 * kPi / 3), f2 = f(4 * kPi / 3);
      const double b = (2 * f0 - f1 - f2) / 3, c = (f1 - f2) / std::sqrt(3.0);
      if (std::hypot(b, c) > 0) {
        const double fit = std::atan2(-c, -b);
        if (f(fit) <= f(t) + 1e-12 * std::max(1.0, std::abs(f(t)))) t = fit;
      }
      if (f(t) < before) B(i, j) = std::polar(1.0, t);
    }
  return B;
}

// Best of `samples` uniform points of the box that keep spacing >= d to the
// other antennas.
inline double position_sampling_min(const AntennaCost& cost, const Mat2X& positions, Eigen::Index n, double half_side,
                                    double d, int samples, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-half_side, half_side);
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const Vec2 p(u(rng), u(rng));
    if (spacing_ok(positions, n, p, d)) best = std::min(best, cost.value(p));
  }
  return best;
}

}  // namespace mamec::oracle
