#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace mamec {

using cd = std::complex<double>;

using VecD = Eigen::VectorXd;
using VecC = Eigen::VectorXcd;
using MatD = Eigen::MatrixXd;
using MatC = Eigen::MatrixXcd;
using Mat2X = Eigen::Matrix2Xd;
using Vec2 = Eigen::Vector2d;

inline constexpr double kPi = 3.14159265358979323846;

// Geometry or shape inconsistency in the inputs (path counts, matrix sizes,
// regions that cannot host the requested array).
class InvalidGeometry : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A sub-block could not produce a KKT point. `where()` names the sub-block.
class NumericFailure : public std::runtime_error {
 public:
  NumericFailure(std::string where, const std::string& what)
      : std::runtime_error(where + ": " + what), where_(std::move(where)) {}

  const std::string& where() const noexcept { return where_; }

 private:
  std::string where_;
};

// Malformed or out-of-range configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mamec
