#include "pgpr/readout.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

namespace pgpr {

Eigen::MatrixXd exact_confusion_matrix(std::size_t qubit_count, const NoiseModel& noise) {
  if (qubit_count == 0 || qubit_count > kMaxDenseQubits) throw std::invalid_argument("bad qubit count");
  Eigen::MatrixXd full = Eigen::MatrixXd::Ones(1, 1);
  // Little-endian: qubit q is the (q+1)-th factor from the right.
  for (std::size_t q = 0; q < qubit_count; ++q) {
    const auto& r = noise.readout[q];
    Eigen::Matrix2d a;
    a << 1.0 - r.p1_given_0, r.p0_given_1, r.p1_given_0, 1.0 - r.p0_given_1;
    Eigen::MatrixXd next(full.rows() * 2, full.cols() * 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) next.block(i * full.rows(), j * full.cols(), full.rows(), full.cols()) = a(i, j) * full;
    full = std::move(next);
  }
  return full;
}

std::vector<std::uint64_t> sample_counts(const Eigen::VectorXd& probabilities, int shots, Rng& rng) {
  if (shots < 0) throw std::invalid_argument("negative shot count");
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(probabilities.size()), 0);
  double remaining_mass = 1.0;
  std::int64_t remaining = shots;
  for (Eigen::Index k = 0; k < probabilities.size() && remaining > 0; ++k) {
    const double p = std::max(0.0, probabilities(k));
    if (k + 1 == probabilities.size() || remaining_mass <= 0.0) {
      counts[static_cast<std::size_t>(k)] = static_cast<std::uint64_t>(remaining);
      break;
    }
    const double frac = std::clamp(p / remaining_mass, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> draw(remaining, frac);
    const auto c = draw(rng);
    counts[static_cast<std::size_t>(k)] = static_cast<std::uint64_t>(c);
    remaining -= c;
    remaining_mass -= p;
  }
  return counts;
}

Eigen::MatrixXd calibrate_readout(std::size_t qubit_count, const NoiseModel& noise, int shots,
                                  std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("calibration needs at least one shot");
  const Eigen::MatrixXd exact = exact_confusion_matrix(qubit_count, noise);
  Eigen::MatrixXd est(exact.rows(), exact.cols());
  for (Eigen::Index j = 0; j < exact.cols(); ++j) {
    Rng rng = make_rng(derive_seed(seed, {static_cast<std::uint64_t>(j)}));
    const auto counts = sample_counts(exact.col(j), shots, rng);
    for (Eigen::Index i = 0; i < exact.rows(); ++i)
      est(i, j) = static_cast<double>(counts[static_cast<std::size_t>(i)]) / shots;
  }
  return est;
}

Eigen::VectorXd project_to_simplex(const Eigen::VectorXd& v) {
  std::vector<double> u(v.data(), v.data() + v.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, tau = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double t = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (u[k] - t > 0.0) tau = t;
  }
  return (v.array() - tau).cwiseMax(0.0);
}

Eigen::VectorXd mitigate_distribution(const Eigen::VectorXd& observed, const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols() || a.rows() != observed.size()) {
    throw std::invalid_argument("calibration matrix does not match the distribution");
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  if (s(s.size() - 1) < 1e-12 * std::max(1.0, s(0))) {
    throw SingularCalibrationError(
        fmt::format("readout calibration matrix is singular (smallest singular value {:.3e})", s(s.size() - 1)));
  }
  Eigen::VectorXd x = a.colPivHouseholderQr().solve(observed);
  if (x.minCoeff() >= -1e-12) {
    x = x.cwiseMax(0.0);
    return x / x.sum();
  }

  // Constrained least squares on the simplex by accelerated projected gradient.
  const double lipschitz = s(0) * s(0);
  const Eigen::MatrixXd ata = a.transpose() * a;
  const Eigen::VectorXd atb = a.transpose() * observed;
  Eigen::VectorXd q = project_to_simplex(x);
  Eigen::VectorXd y = q;
  double t = 1.0;
  for (int it = 0; it < 20000; ++it) {
    const Eigen::VectorXd next = project_to_simplex(y - (ata * y - atb) / lipschitz);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    y = next + ((t - 1.0) / t_next) * (next - q);
    const double step = (next - q).lpNorm<Eigen::Infinity>();
    q = next;
    t = t_next;
    if (step < 1e-15) break;
  }
  return q;
}

Eigen::VectorXd mitigate_counts(std::span<const std::uint64_t> raw, const Eigen::MatrixXd& calibration) {
  const double total = std::accumulate(raw.begin(), raw.end(), 0.0);
  if (total <= 0.0) throw std::invalid_argument("no counts to mitigate");
  Eigen::VectorXd observed(static_cast<Eigen::Index>(raw.size()));
  for (std::size_t k = 0; k < raw.size(); ++k) observed(static_cast<Eigen::Index>(k)) = static_cast<double>(raw[k]) / total;
  return mitigate_distribution(observed, calibration);
}

std::string counts_to_csv(const std::map<std::string, std::uint64_t>& counts) {
  std::string out = "bitstring,count\n";
  for (const auto& [bits, c] : counts) out += fmt::format("{},{}\n", bits, c);
  return out;
}

}  // namespace pgpr
