#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pgpr/ansatz.hpp"
#include "pgpr/embedding.hpp"
#include "pgpr/optimizers.hpp"
#include "pgpr/simulator.hpp"
#include "pgpr/surrogate.hpp"

namespace pgpr {

enum class NoiseKind {
  none,       // exact expectation values
  gaussian,   // exact value plus N(0, sigma_alpha^2)
  simulator,  // noisy density-matrix circuit, sampled shots, readout mitigation
};

struct BackendConfig {
  NoiseKind kind = NoiseKind::simulator;
  NoiseModel noise = NoiseModel::synthetic_default();
  /// Noise level of interior samples; <= 0 selects 0.2 |d_hyb|.
  double sigma_alpha = 0.0;
  bool mitigate_readout = true;
  /// Shots per basis state for readout calibration; <= 0 uses noise.shots.
  int calibration_shots = 0;
};

/// The four quantities a circuit evaluation reports, in a fixed order.
enum Quantity : int { kEnergy = 0, kDocc = 1, kF1 = 2, kF2 = 3 };
inline constexpr int kQuantityCount = 4;
using QuantityValues = std::array<double, kQuantityCount>;

/// Evaluates the ansatz for one embedding problem under a noise backend. Every
/// call is addressed by a stream path so results do not depend on call order.
class Backend {
 public:
  Backend(QubitEmbedding embedding, BackendConfig config, std::uint64_t seed);

  const QubitEmbedding& embedding() const noexcept { return embedding_; }
  const BackendConfig& config() const noexcept { return config_; }
  double sigma_alpha() const noexcept { return sigma_alpha_; }

  /// Noisy estimate of one quantity; equal to measure_all(theta, stream)[q].
  double measure(const ThetaPoint& theta, Quantity q, std::uint64_t stream) const;
  /// Noisy estimates of all four quantities from a single state preparation.
  QuantityValues measure_all(const ThetaPoint& theta, std::uint64_t stream) const;
  /// Noiseless values (statevector).
  QuantityValues exact(const ThetaPoint& theta) const;
  /// Exact values on theta2 = 0 from the product-state form.
  QuantityValues boundary(double theta1) const;

 private:
  const PauliSum& observable(Quantity q) const;
  double exact_value(const Eigen::Vector4cd& psi, Quantity q) const;
  double noisy_value(const ThetaPoint& theta, const Eigen::Vector4cd* psi, const DensityMatrix* rho, Quantity q,
                     std::uint64_t stream) const;

  QubitEmbedding embedding_;
  BackendConfig config_;
  std::uint64_t seed_;
  double sigma_alpha_;
  Eigen::MatrixXd calibration_;
  std::array<Eigen::Matrix4cd, kQuantityCount> dense_;
};

struct Mesh {
  std::vector<ThetaPoint> points;

  /// {(pi a / 5, pi b / 5) : a, b in -5..4}; the ten points with b = 0 lie on
  /// the exactly known boundary line.
  static Mesh standard();
};

struct PipelineOptions {
  Mesh mesh = Mesh::standard();
  FitOptions fit;
  SurrogateSearchOptions search;
};

struct PipelineResult {
  OptimizationResult optimum;
  EhSolution estimate;
  std::array<SurrogateModel, kQuantityCount> models;
  std::size_t noisy_evals = 0;
  std::size_t exact_evals = 0;
};

/// Learns the energy and observable landscapes on the mesh (interior points
/// through the backend, boundary points exactly), minimizes the energy
/// surrogate and reads every observable surrogate at the minimizer.
PipelineResult mitigated_pipeline(const Backend& backend, const PipelineOptions& options = {});

enum class Method { exact, gpr, seq1d, baseline };
std::string_view method_name(Method m);
Method method_from_name(std::string_view name);

struct MethodOptions {
  PipelineOptions pipeline;
  int seq1d_iterations = 20;
  Sequential1dOptions seq1d;
  std::size_t baseline_evals = 20;
  TrustRegionOptions trust_region;
};

struct MethodResult {
  EhSolution estimate;
  ThetaPoint theta_star;
  std::size_t noisy_evals = 0;
  std::size_t exact_evals = 0;
};

/// Solves one embedding problem with the chosen method. Iterative methods
/// start from the Hartree-Fock point, whose energy is known exactly; their
/// reported energy and observables come from one extra measurement at the
/// final point, outside the optimizer's budget.
MethodResult solve_embedding(Method method, const EmbeddingParams& params, const BackendConfig& backend,
                             std::uint64_t seed, const MethodOptions& options = {});

}  // namespace pgpr
