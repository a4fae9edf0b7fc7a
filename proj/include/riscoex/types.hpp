#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace riscoex {

using cd = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

/// Endpoints coincide, or a distance is otherwise non-positive.
class InvalidGeometry : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Vector or matrix sizes disagree with the scenario dimensions.
class DimensionMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The radar SINR targets cannot be met within the power budget.
class InfeasibleScenario : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A numerical sub-solver could not bracket or converge.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument of a complex number with the convention arg(0) = 0.
inline double angle_of(cd z) { return (z == cd{0.0, 0.0}) ? 0.0 : std::arg(z); }

inline cd unit_phasor(double phase) { return std::polar(1.0, phase); }

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace riscoex
