#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pgpr/rng.hpp"
#include "pgpr/simulator.hpp"

namespace pgpr {

class SingularCalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Kronecker product of the per-qubit 2x2 confusion matrices; entry (r, t) is
/// the probability of reading r when t is prepared.
Eigen::MatrixXd exact_confusion_matrix(std::size_t qubit_count, const NoiseModel& noise);

/// Estimates the confusion matrix by preparing each basis state and sampling
/// `shots` readouts of it. Column j is the empirical read distribution of j.
Eigen::MatrixXd calibrate_readout(std::size_t qubit_count, const NoiseModel& noise, int shots,
                                  std::uint64_t seed);

/// Multinomial draw of `shots` outcomes.
std::vector<std::uint64_t> sample_counts(const Eigen::VectorXd& probabilities, int shots, Rng& rng);

/// Nonnegative, normalized q minimizing ||A q - observed||_2 where `observed`
/// is a probability vector. Throws SingularCalibrationError when A is singular.
Eigen::VectorXd mitigate_distribution(const Eigen::VectorXd& observed, const Eigen::MatrixXd& calibration);

/// mitigate_distribution applied to raw counts indexed by basis state.
Eigen::VectorXd mitigate_counts(std::span<const std::uint64_t> raw, const Eigen::MatrixXd& calibration);

/// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v);

/// "bitstring,count" rows with a header, for debugging dumps.
std::string counts_to_csv(const std::map<std::string, std::uint64_t>& counts);

}  // namespace pgpr
