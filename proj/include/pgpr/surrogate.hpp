#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pgpr/ansatz.hpp"
#include "pgpr/gram.hpp"
#include "pgpr/kernels/basis.hpp"

namespace pgpr {

struct Sample {
  ThetaPoint theta;
  double value = 0.0;
  double sigma = 0.0;
  bool exact = false;
};

class TrainingSet {
 public:
  void add_noisy(const ThetaPoint& theta, double value, double sigma);
  void add_exact(const ThetaPoint& theta, double value);

  const std::vector<Sample>& samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  std::size_t exact_count() const;
  std::size_t noisy_count() const { return size() - exact_count(); }

 private:
  std::vector<Sample> samples_;
};

class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
/// Normal equations singular on the constraint manifold.
class RankDeficientError : public FitError {
 public:
  using FitError::FitError;
};
/// Exact samples contradict each other.
class InconsistentConstraintsError : public FitError {
 public:
  using FitError::FitError;
};

enum class ExactHandling {
  constraints,  // hard linear equality constraints (null-space elimination)
  sigma_floor,  // treat exact samples as noisy with sigma = FitOptions::sigma_floor
};

enum class VarianceForm {
  posterior,          // T^T Cov T
  moment_difference,  // T^T (Cov - xi xi^T) T, clamped at zero
};

struct FitOptions {
  double t = 0.0;
  ExactHandling exact = ExactHandling::constraints;
  double sigma_floor = 1e-8;
  VarianceForm variance = VarianceForm::posterior;
  /// Relative singular-value cutoff for the constraint and normal matrices.
  double rank_tolerance = 1e-11;
};

struct FitDiagnostics {
  int constraint_rank = 0;
  int free_dimensions = kBasisSize;
  /// 2-norm condition number of the reduced normal matrix.
  double condition = 1.0;
};

class SurrogateModel {
 public:
  SurrogateModel() = default;
  SurrogateModel(BasisVector xi_bar, BasisMatrix coeff_cov, double t, VarianceForm form = VarianceForm::posterior);

  const BasisVector& xi_bar() const noexcept { return xi_; }
  const BasisMatrix& coeff_cov() const noexcept { return cov_; }
  double t() const noexcept { return t_; }
  VarianceForm variance_form() const noexcept { return form_; }
  const FitDiagnostics& diagnostics() const noexcept { return diag_; }
  const std::vector<Sample>& constraints() const noexcept { return constraints_; }

  double mean(const ThetaPoint& theta) const;
  double variance(const ThetaPoint& theta) const;
  Eigen::Vector2d gradient(const ThetaPoint& theta) const;
  Eigen::Matrix2d hessian(const ThetaPoint& theta) const;

  /// Batched mean and variance through the dispatched SIMD kernels.
  std::vector<double> mean(const kernels::HalfAngles& points) const;
  std::vector<double> variance(const kernels::HalfAngles& points) const;

  /// Versioned text form ("pgpr-surrogate v1"); parse() inverts it exactly.
  std::string dump() const;
  static SurrogateModel parse(const std::string& text);

 private:
  friend SurrogateModel fit(const TrainingSet&, const FitOptions&);
  friend SurrogateModel fit_weighted_design(const TrainingSet&, const FitOptions&);

  BasisVector xi_ = BasisVector::Zero();
  BasisMatrix cov_ = BasisMatrix::Zero();
  BasisMatrix variance_matrix_ = BasisMatrix::Zero();  // matrix used by variance()
  double t_ = 0.0;
  VarianceForm form_ = VarianceForm::posterior;
  FitDiagnostics diag_;
  std::vector<Sample> constraints_;
};

/// Weighted least squares over the 25-function basis. Noisy samples enter with
/// weight 1/sigma^2, exact samples as equality constraints, t adds t*M.
SurrogateModel fit(const TrainingSet& data, const FitOptions& options = {});
/// Same contract as fit(); used for the observable landscapes.
SurrogateModel fit_observable(const TrainingSet& data, const FitOptions& options = {});

inline double predict_mean(const SurrogateModel& m, const ThetaPoint& theta) { return m.mean(theta); }
inline double predict_variance(const SurrogateModel& m, const ThetaPoint& theta) { return m.variance(theta); }

}  // namespace pgpr
