#include "pgpr/pipeline.hpp"

#include <cmath>
#include <random>

#include <fmt/format.h>

#include "pgpr/readout.hpp"
#include "pgpr/rng.hpp"

namespace pgpr {

namespace {

// Stream families; a stream id is (family << 32) | index.
enum StreamFamily : std::uint64_t { kMeshStream = 1, kSeq1dStream = 2, kBaselineStream = 3, kFinalStream = 4 };
constexpr std::uint64_t kCalibrationPath = 0xCA11B;

constexpr std::uint64_t stream_id(StreamFamily family, std::uint64_t index) { return (std::uint64_t{family} << 32) | index; }

}  // namespace

Backend::Backend(QubitEmbedding embedding, BackendConfig config, std::uint64_t seed)
    : embedding_(std::move(embedding)), config_(std::move(config)), seed_(seed) {
  config_.noise.validate();
  sigma_alpha_ = config_.sigma_alpha > 0.0 ? config_.sigma_alpha : 0.2 * std::abs(embedding_.params.d_hyb);
  if (config_.kind == NoiseKind::simulator && config_.mitigate_readout) {
    const int shots = config_.calibration_shots > 0 ? config_.calibration_shots : config_.noise.shots;
    calibration_ = calibrate_readout(2, config_.noise, shots, derive_seed(seed_, {kCalibrationPath}));
  }
  for (int q = 0; q < kQuantityCount; ++q) dense_[q] = matrix(observable(static_cast<Quantity>(q)));
}

const PauliSum& Backend::observable(Quantity q) const {
  switch (q) {
    case kEnergy: return embedding_.hamiltonian.sum;
    case kDocc: return embedding_.double_occupancy;
    case kF1: return embedding_.f1;
    case kF2: return embedding_.f2;
  }
  throw std::invalid_argument("unknown quantity");
}

double Backend::exact_value(const Eigen::Vector4cd& psi, Quantity q) const {
  return (psi.adjoint() * dense_[q] * psi)(0, 0).real();
}

QuantityValues Backend::exact(const ThetaPoint& theta) const {
  const Eigen::Vector4cd psi = statevector(theta);
  QuantityValues v{};
  for (int q = 0; q < kQuantityCount; ++q) v[q] = exact_value(psi, static_cast<Quantity>(q));
  return v;
}

QuantityValues Backend::boundary(double theta1) const {
  QuantityValues v{};
  for (int q = 0; q < kQuantityCount; ++q) v[q] = exact_boundary_expectation(theta1, observable(static_cast<Quantity>(q)));
  return v;
}

double Backend::noisy_value(const ThetaPoint& theta, const Eigen::Vector4cd* psi, const DensityMatrix* rho, Quantity q,
                            std::uint64_t stream) const {
  const std::uint64_t seed = derive_seed(seed_, {stream, static_cast<std::uint64_t>(q)});
  switch (config_.kind) {
    case NoiseKind::none:
      return psi ? exact_value(*psi, q) : exact_value(statevector(theta), q);
    case NoiseKind::gaussian: {
      Rng rng = make_rng(seed);
      const double exact = psi ? exact_value(*psi, q) : exact_value(statevector(theta), q);
      return exact + std::normal_distribution<double>(0.0, sigma_alpha_)(rng);
    }
    case NoiseKind::simulator: {
      MeasurementOptions opts;
      opts.calibration = config_.mitigate_readout ? &calibration_ : nullptr;
      if (rho) return estimate_expectation(*rho, observable(q), config_.noise, seed, opts).estimate;
      return estimate_expectation(build_circuit(theta), observable(q), config_.noise, seed, opts).estimate;
    }
  }
  throw std::invalid_argument("unknown noise kind");
}

double Backend::measure(const ThetaPoint& theta, Quantity q, std::uint64_t stream) const {
  return noisy_value(theta, nullptr, nullptr, q, stream);
}

QuantityValues Backend::measure_all(const ThetaPoint& theta, std::uint64_t stream) const {
  QuantityValues v{};
  if (config_.kind == NoiseKind::simulator) {
    // One state preparation shared by all four estimates.
    const DensityMatrix rho = evolve(DensityMatrix(2), build_circuit(theta), config_.noise);
    for (int q = 0; q < kQuantityCount; ++q) v[q] = noisy_value(theta, nullptr, &rho, static_cast<Quantity>(q), stream);
  } else {
    const Eigen::Vector4cd psi = statevector(theta);
    for (int q = 0; q < kQuantityCount; ++q) v[q] = noisy_value(theta, &psi, nullptr, static_cast<Quantity>(q), stream);
  }
  return v;
}

Mesh Mesh::standard() {
  Mesh m;
  for (int a = -5; a <= 4; ++a)
    for (int b = -5; b <= 4; ++b) m.points.push_back({kPi * a / 5.0, kPi * b / 5.0});
  return m;
}

PipelineResult mitigated_pipeline(const Backend& backend, const PipelineOptions& options) {
  std::array<TrainingSet, kQuantityCount> data;
  PipelineResult result;
  for (std::size_t k = 0; k < options.mesh.points.size(); ++k) {
    const ThetaPoint& theta = options.mesh.points[k];
    if (theta.theta2 == 0.0) {
      const auto v = backend.boundary(theta.theta1);
      for (int q = 0; q < kQuantityCount; ++q) data[q].add_exact(theta, v[q]);
      ++result.exact_evals;
    } else {
      const auto v = backend.measure_all(theta, stream_id(kMeshStream, k));
      for (int q = 0; q < kQuantityCount; ++q) data[q].add_noisy(theta, v[q], backend.sigma_alpha());
      ++result.noisy_evals;
    }
  }
  for (int q = 0; q < kQuantityCount; ++q) result.models[q] = fit(data[q], options.fit);
  result.optimum = minimize_surrogate(result.models[kEnergy], options.search);
  const ThetaPoint& star = result.optimum.theta_star;
  result.estimate = {result.optimum.value, result.models[kDocc].mean(star), result.models[kF1].mean(star),
                     result.models[kF2].mean(star)};
  return result;
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::exact: return "exact";
    case Method::gpr: return "gpr";
    case Method::seq1d: return "seq1d";
    case Method::baseline: return "baseline";
  }
  return "?";
}

Method method_from_name(std::string_view name) {
  for (Method m : {Method::exact, Method::gpr, Method::seq1d, Method::baseline})
    if (method_name(m) == name) return m;
  throw std::invalid_argument(fmt::format("unknown optimizer '{}'", name));
}

MethodResult solve_embedding(Method method, const EmbeddingParams& params, const BackendConfig& backend_config,
                             std::uint64_t seed, const MethodOptions& options) {
  MethodResult r;
  if (method == Method::exact) {
    r.estimate = exact_ground_state(params);
    return r;
  }
  const Backend backend(embed(params), backend_config, seed);
  if (method == Method::gpr) {
    const auto p = mitigated_pipeline(backend, options.pipeline);
    r.estimate = p.estimate;
    r.theta_star = p.optimum.theta_star;
    r.noisy_evals = p.noisy_evals;
    r.exact_evals = p.exact_evals;
    return r;
  }

  const StreamFamily family = method == Method::seq1d ? kSeq1dStream : kBaselineStream;
  Objective objective([&](const ThetaPoint& theta, std::size_t index) {
    return Evaluation{backend.measure(theta, kEnergy, stream_id(family, index)), backend.sigma_alpha()};
  });
  const ThetaPoint start{0.0, 0.0};
  OptimizationResult opt;
  if (method == Method::seq1d) {
    opt = sequential_1d(objective, start, options.seq1d_iterations, backend.boundary(0.0)[kEnergy], options.seq1d);
  } else {
    opt = derivative_free_baseline(objective, start, options.baseline_evals, options.trust_region);
  }
  const auto final_values = backend.measure_all(opt.theta_star, stream_id(kFinalStream, 0));
  r.estimate = {final_values[kEnergy], final_values[kDocc], final_values[kF1], final_values[kF2]};
  r.theta_star = opt.theta_star;
  r.noisy_evals = opt.evals_used;
  return r;
}

}  // namespace pgpr
