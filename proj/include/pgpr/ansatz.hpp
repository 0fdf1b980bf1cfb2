#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "pgpr/circuit.hpp"
#include "pgpr/embedding.hpp"
#include "pgpr/simulator.hpp"

namespace pgpr {

inline constexpr double kPi = std::numbers::pi;

class ThetaRangeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The two free ansatz angles: theta1 drives the tied single excitations,
/// theta2 the double excitation.
struct ThetaPoint {
  double theta1 = 0.0;
  double theta2 = 0.0;

  /// Throws ThetaRangeError unless both angles lie in [-pi, pi].
  void validate() const;

  friend auto operator<=>(const ThetaPoint&, const ThetaPoint&) = default;
};

/// Maps any real angle into [-pi, pi].
double wrap_angle(double a);

inline constexpr int kBasisOrder = 4;
inline constexpr int kBasisSize = (kBasisOrder + 1) * (kBasisOrder + 1);

/// T_s with s = 5 i + j.
using BasisVector = Eigen::Matrix<double, kBasisSize, 1>;

constexpr int basis_index(int i, int j) { return (kBasisOrder + 1) * i + j; }

/// c^i s^(4-i) with c = cos(x/2), s = sin(x/2), for i = 0..4.
std::array<double, kBasisOrder + 1> half_angle_powers(double x);

/// T_(i,j)(theta) = cos^i sin^(4-i)(theta1/2) * cos^j sin^(4-j)(theta2/2).
BasisVector basis_functions(const ThetaPoint& theta);

/// Basis values with their first and second angle derivatives.
struct BasisJet {
  BasisVector value, d1, d2, d11, d12, d22;
};
BasisJet basis_jet(const ThetaPoint& theta);

/// Prepares the Hartree-Fock determinant from |00> and applies, in time order,
/// exp(+i t2/2 X0Y1), exp(-i t2/2 Y0X1), exp(-i t1/2 Y0), exp(+i t1/2 Y1).
/// Two-qubit rotations are compiled to basis changes, a CNOT ladder and one
/// Z rotation, so every theta yields the same gate sequence.
Circuit build_circuit(const ThetaPoint& theta);

/// Noiseless output of build_circuit.
Eigen::Vector4cd statevector(const ThetaPoint& theta);
double statevector_expectation(const ThetaPoint& theta, const PauliSum& observable);

/// On theta2 = 0 the ansatz state is a product state; returns its factors.
std::array<Eigen::Vector2cd, 2> boundary_product_state(double theta1);
double exact_boundary_expectation(double theta1, const PauliSum& observable);
double exact_boundary_energy(double theta1, const QubitHamiltonian& h);

/// Measures `observable` on the noisy circuit for theta.
MeasurementRecord estimate_observable(const ThetaPoint& theta, const PauliSum& observable,
                                      const NoiseModel& noise, std::uint64_t seed,
                                      const MeasurementOptions& options = {});
MeasurementRecord estimate_energy(const ThetaPoint& theta, const QubitHamiltonian& h,
                                  const NoiseModel& noise, std::uint64_t seed,
                                  const MeasurementOptions& options = {});

}  // namespace pgpr
