#include "pgpr/simulator.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "pgpr/readout.hpp"
#include "pgpr/rng.hpp"

namespace pgpr {

namespace {

void conjugate(Eigen::MatrixXcd& rho, const Eigen::MatrixXcd& u) { rho = u * rho * u.adjoint(); }

}  // namespace

DensityMatrix::DensityMatrix(std::size_t qubit_count) : DensityMatrix(basis_state(qubit_count, 0)) {}

DensityMatrix DensityMatrix::basis_state(std::size_t qubit_count, std::size_t index) {
  if (qubit_count == 0 || qubit_count > kMaxDenseQubits) {
    throw std::invalid_argument(fmt::format("density matrices support 1..{} qubits", kMaxDenseQubits));
  }
  const Eigen::Index dim = Eigen::Index{1} << qubit_count;
  if (static_cast<Eigen::Index>(index) >= dim) throw std::invalid_argument("basis index out of range");
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi(static_cast<Eigen::Index>(index)) = 1.0;
  return pure(psi);
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  std::size_t n = 0;
  while ((Eigen::Index{1} << n) < psi.size()) ++n;
  if ((Eigen::Index{1} << n) != psi.size() || n == 0 || n > kMaxDenseQubits) {
    throw std::invalid_argument("state vector length must be 2^n with 1 <= n <= 4");
  }
  DensityMatrix d;
  d.qubits_ = n;
  d.rho_ = psi * psi.adjoint();
  return d;
}

double DensityMatrix::expectation(const PauliSum& p) const {
  if (p.qubit_count() != qubits_) throw std::invalid_argument("observable size mismatch");
  return (pgpr::matrix(p) * rho_).trace().real();
}

Eigen::VectorXd DensityMatrix::probabilities() const {
  Eigen::VectorXd p = rho_.diagonal().real().cwiseMax(0.0);
  return p / p.sum();
}

NoiseModel NoiseModel::ideal(int shots) {
  NoiseModel n;
  n.shots = shots;
  return n;
}

NoiseModel NoiseModel::synthetic_default() {
  NoiseModel n;
  n.p1 = 0.001;
  n.p2 = 0.01;
  n.set_symmetric_readout(0.02);
  return n;
}

void NoiseModel::set_symmetric_readout(double flip) {
  for (auto& r : readout) r = {flip, flip};
}

void NoiseModel::validate() const {
  auto prob = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(fmt::format("{} must lie in [0, 1]", name));
  };
  prob(p1, "p1");
  prob(p2, "p2");
  prob(gamma, "gamma");
  for (const auto& r : readout) {
    prob(r.p1_given_0, "readout p(1|0)");
    prob(r.p0_given_1, "readout p(0|1)");
  }
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
}

namespace {

// (1 - p) rho + p (I / 2^k on the masked qubits) (x) Tr_masked(rho), which
// equals the uniform Pauli-twirl form of the depolarizing channel.
void depolarize(Eigen::MatrixXcd& m, Eigen::Index mask, double p) {
  const Eigen::Index dim = m.rows();
  const double w = p / static_cast<double>(Eigen::Index{1} << std::popcount(static_cast<std::uint64_t>(mask)));
  Eigen::MatrixXcd out = (1.0 - p) * m;
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      if ((i & mask) != (j & mask)) continue;
      const Eigen::Index io = i & ~mask, jo = j & ~mask;
      Complex acc = 0.0;
      Eigen::Index sub = 0;
      do {
        acc += m(io | sub, jo | sub);
        sub = (sub - mask) & mask;
      } while (sub != 0);
      out(i, j) += w * acc;
    }
  }
  m = std::move(out);
}

}  // namespace

void apply_depolarizing_1q(DensityMatrix& rho, std::size_t qubit, double p) {
  if (p == 0.0) return;
  if (qubit >= rho.qubit_count()) throw std::out_of_range("qubit index out of range");
  depolarize(rho.matrix(), Eigen::Index{1} << qubit, p);
}

void apply_depolarizing_2q(DensityMatrix& rho, std::size_t a, std::size_t b, double p) {
  if (p == 0.0) return;
  if (a >= rho.qubit_count() || b >= rho.qubit_count() || a == b) throw std::out_of_range("invalid qubit pair");
  depolarize(rho.matrix(), (Eigen::Index{1} << a) | (Eigen::Index{1} << b), p);
}

void apply_amplitude_damping(DensityMatrix& rho, std::size_t qubit, double gamma) {
  if (gamma == 0.0) return;
  const Eigen::Index dim = rho.dim();
  const Eigen::Index bit = Eigen::Index{1} << qubit;
  Eigen::MatrixXcd k0 = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd k1 = Eigen::MatrixXcd::Zero(dim, dim);
  const double keep = std::sqrt(1.0 - gamma);
  const double decay = std::sqrt(gamma);
  for (Eigen::Index col = 0; col < dim; ++col) {
    if (col & bit) {
      k0(col, col) = keep;
      k1(col ^ bit, col) = decay;
    } else {
      k0(col, col) = 1.0;
    }
  }
  auto& m = rho.matrix();
  m = k0 * m * k0.adjoint() + k1 * m * k1.adjoint();
}

DensityMatrix evolve(DensityMatrix state, const Circuit& circuit, const NoiseModel& noise) {
  const auto n = state.qubit_count();
  for (const auto& g : circuit) {
    conjugate(state.matrix(), gate_unitary(g, n));
    const auto support = gate_support(g);
    if (support.size() == 2) {
      apply_depolarizing_2q(state, support[0], support[1], noise.p2);
    } else {
      for (auto q : support) apply_depolarizing_1q(state, q, noise.p1);
    }
    if (noise.gamma > 0.0) {
      for (std::size_t q = 0; q < n; ++q) apply_amplitude_damping(state, q, noise.gamma);
    }
  }
  return state;
}

std::string bitstring(std::size_t index, std::size_t qubit_count) {
  std::string s(qubit_count, '0');
  for (std::size_t q = 0; q < qubit_count; ++q)
    if ((index >> q) & 1u) s[q] = '1';
  return s;
}

MeasurementRecord measure_pauli(const DensityMatrix& state, const PauliString& term,
                                const NoiseModel& noise, std::uint64_t seed,
                                const MeasurementOptions& options) {
  const auto n = state.qubit_count();
  if (term.qubit_count() != n) throw std::invalid_argument("measured term size mismatch");
  if (term.is_identity()) throw std::invalid_argument("identity term needs no measurement");

  DensityMatrix rotated = state;
  for (const auto& g : measurement_basis_change(term)) conjugate(rotated.matrix(), gate_unitary(g, n));
  const Eigen::VectorXd read = exact_confusion_matrix(n, noise) * rotated.probabilities();

  MeasurementRecord rec;
  Eigen::VectorXd q;
  if (options.infinite_shots) {
    q = options.calibration ? mitigate_distribution(read, *options.calibration) : read;
  } else {
    Rng rng = make_rng(seed);
    const auto counts = sample_counts(read, noise.shots, rng);
    for (std::size_t b = 0; b < counts.size(); ++b)
      if (counts[b] > 0) rec.raw_counts[bitstring(b, n)] = counts[b];
    rec.shots_used = static_cast<std::size_t>(noise.shots);
    if (options.calibration) {
      q = mitigate_counts(counts, *options.calibration);
    } else {
      q.resize(static_cast<Eigen::Index>(counts.size()));
      for (std::size_t b = 0; b < counts.size(); ++b)
        q(static_cast<Eigen::Index>(b)) = static_cast<double>(counts[b]) / noise.shots;
    }
  }

  std::size_t mask = 0;
  for (auto s : term.support()) mask |= std::size_t{1} << s;
  double e = 0.0;
  for (Eigen::Index b = 0; b < q.size(); ++b) {
    const bool odd = std::popcount(static_cast<std::size_t>(b) & mask) % 2 == 1;
    e += odd ? -q(b) : q(b);
  }
  rec.estimate = e;
  rec.std_error = rec.shots_used > 0 ? std::sqrt(std::max(0.0, 1.0 - e * e) / static_cast<double>(rec.shots_used))
                                     : 0.0;
  return rec;
}

MeasurementRecord estimate_expectation(const DensityMatrix& state, const PauliSum& observable,
                                       const NoiseModel& noise, std::uint64_t seed,
                                       const MeasurementOptions& options) {
  MeasurementRecord total;
  double variance = 0.0;
  const auto& terms = observable.terms();
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const auto& t = terms[k];
    if (t.string.is_identity()) {
      total.estimate += t.coefficient;
      continue;
    }
    const auto rec = measure_pauli(state, t.string, noise, derive_seed(seed, {k}), options);
    total.estimate += t.coefficient * rec.estimate;
    variance += t.coefficient * t.coefficient * rec.std_error * rec.std_error;
    total.shots_used += rec.shots_used;
    for (const auto& [bits, c] : rec.raw_counts) total.raw_counts[t.string.to_string() + ":" + bits] += c;
  }
  total.std_error = std::sqrt(variance);
  return total;
}

MeasurementRecord estimate_expectation(const Circuit& circuit, const PauliSum& observable,
                                       const NoiseModel& noise, std::uint64_t seed,
                                       const MeasurementOptions& options) {
  const DensityMatrix rho = evolve(DensityMatrix(observable.qubit_count()), circuit, noise);
  return estimate_expectation(rho, observable, noise, seed, options);
}

}  // namespace pgpr
