#pragma once

#include <random>

#include "mamec/channel.hpp"

namespace mamec::test {

inline PathSet random_path_set(int L, std::mt19937_64& rng, double gain_scale = 1.0) {
  std::uniform_real_distribution<double> angle(0.0, kPi);
  std::normal_distribution<double> n(0.0, gain_scale);
  PathSet s{VecD(L), VecD(L), VecC(L)};
  for (int l = 0; l < L; ++l) {
    s.elevations(l) = angle(rng);
    s.azimuths(l) = angle(rng);
    s.gains(l) = cd(n(rng), n(rng));
  }
  return s;
}

inline Mat2X random_positions(int n, double half_side, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-half_side, half_side);
  Mat2X p(2, n);
  for (int i = 0; i < n; ++i) p.col(i) = Vec2(u(rng), u(rng));
  return p;
}

inline VecC random_vec(Eigen::Index n, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  VecC v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cd(g(rng), g(rng));
  return v;
}

inline MatC random_mat(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  MatC m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = cd(g(rng), g(rng));
  return m;
}

inline MatC random_unit_modulus(Eigen::Index r, Eigen::Index c, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> t(-kPi, kPi);
  MatC m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = std::polar(1.0, t(rng));
  return m;
}

inline double rel_fro(const MatC& a, const MatC& b) { return (a - b).norm() / std::max(b.norm(), 1e-300); }

}  // namespace mamec::test
