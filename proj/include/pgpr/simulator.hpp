#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include <Eigen/Dense>

#include "pgpr/circuit.hpp"
#include "pgpr/pauli.hpp"

namespace pgpr {

/// Mixed state of up to kMaxDenseQubits qubits.
class DensityMatrix {
 public:
  explicit DensityMatrix(std::size_t qubit_count);  // |0...0><0...0|
  static DensityMatrix basis_state(std::size_t qubit_count, std::size_t index);
  static DensityMatrix pure(const Eigen::VectorXcd& psi);

  std::size_t qubit_count() const noexcept { return qubits_; }
  Eigen::Index dim() const noexcept { return rho_.rows(); }
  const Eigen::MatrixXcd& matrix() const noexcept { return rho_; }
  Eigen::MatrixXcd& matrix() noexcept { return rho_; }

  double trace() const { return rho_.trace().real(); }
  double expectation(const PauliSum& p) const;
  /// Diagonal in the computational basis, clamped at zero and renormalized.
  Eigen::VectorXd probabilities() const;

 private:
  DensityMatrix() = default;

  std::size_t qubits_ = 0;
  Eigen::MatrixXcd rho_;
};

struct ReadoutError {
  double p1_given_0 = 0.0;  // read 1 when the qubit is in |0>
  double p0_given_1 = 0.0;  // read 0 when the qubit is in |1>
};

/// Synthetic device noise: depolarizing channels after every gate (p1 on one
/// qubit, p2 on two), optional amplitude damping on all qubits after every
/// gate, and independent per-qubit readout flips.
struct NoiseModel {
  double p1 = 0.0;
  double p2 = 0.0;
  double gamma = 0.0;
  std::array<ReadoutError, kMaxDenseQubits> readout{};
  int shots = 4096;

  static NoiseModel ideal(int shots = 4096);
  /// p1 = 0.001, p2 = 0.01, symmetric readout flips of 0.02, 4096 shots.
  static NoiseModel synthetic_default();

  void validate() const;
  bool has_gate_noise() const noexcept { return p1 > 0.0 || p2 > 0.0 || gamma > 0.0; }
  void set_symmetric_readout(double flip);
};

struct MeasurementRecord {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t shots_used = 0;
  /// Bitstrings list qubit 0 first. Composite records prefix "<term>:".
  std::map<std::string, std::uint64_t> raw_counts;
};

struct MeasurementOptions {
  /// Use the exact outcome distribution instead of sampling shots.
  bool infinite_shots = false;
  /// Column-stochastic confusion matrix for readout mitigation, or null.
  const Eigen::MatrixXd* calibration = nullptr;
};

/// Applies `circuit` gate by gate, each followed by its noise channel.
DensityMatrix evolve(DensityMatrix state, const Circuit& circuit, const NoiseModel& noise);

/// Channel helpers, exposed for tests.
void apply_depolarizing_1q(DensityMatrix& rho, std::size_t qubit, double p);
void apply_depolarizing_2q(DensityMatrix& rho, std::size_t a, std::size_t b, double p);
void apply_amplitude_damping(DensityMatrix& rho, std::size_t qubit, double gamma);

/// Rotates into the eigenbasis of `term` (ideal basis change), passes the
/// outcome distribution through the readout confusion and samples shots.
MeasurementRecord measure_pauli(const DensityMatrix& state, const PauliString& term,
                                const NoiseModel& noise, std::uint64_t seed,
                                const MeasurementOptions& options = {});

/// Evolves |0...0> through `circuit` once and measures every non-identity
/// term independently (stream seed derived from (seed, term index)); the
/// identity coefficient is added exactly and standard errors combine in
/// quadrature.
MeasurementRecord estimate_expectation(const Circuit& circuit, const PauliSum& observable,
                                       const NoiseModel& noise, std::uint64_t seed,
                                       const MeasurementOptions& options = {});

/// Same as estimate_expectation for a state that has already been evolved.
MeasurementRecord estimate_expectation(const DensityMatrix& state, const PauliSum& observable,
                                       const NoiseModel& noise, std::uint64_t seed,
                                       const MeasurementOptions& options = {});

/// Bitstring (qubit 0 first) of a computational basis index.
std::string bitstring(std::size_t index, std::size_t qubit_count);

}  // namespace pgpr
