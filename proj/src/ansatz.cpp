#include "pgpr/ansatz.hpp"

#include <cmath>

#include <fmt/format.h>

namespace pgpr {

namespace {

constexpr double kRangeSlack = 1e-12;

// k-th derivative of c^a s^b in x, with c = cos(x/2), s = sin(x/2).
double monomial_derivative(int a, int b, int order, double c, double s) {
  if (order == 0) return std::pow(c, a) * std::pow(s, b);
  double v = 0.0;
  if (a > 0) v -= 0.5 * a * monomial_derivative(a - 1, b + 1, order - 1, c, s);
  if (b > 0) v += 0.5 * b * monomial_derivative(a + 1, b - 1, order - 1, c, s);
  return v;
}

std::array<std::array<double, kBasisOrder + 1>, 3> power_jet(double x) {
  const double c = std::cos(0.5 * x), s = std::sin(0.5 * x);
  std::array<std::array<double, kBasisOrder + 1>, 3> out{};
  for (int k = 0; k < 3; ++k)
    for (int i = 0; i <= kBasisOrder; ++i) out[k][i] = monomial_derivative(i, kBasisOrder - i, k, c, s);
  return out;
}

}  // namespace

void ThetaPoint::validate() const {
  for (double a : {theta1, theta2}) {
    if (!(std::abs(a) <= kPi + kRangeSlack)) {
      throw ThetaRangeError(fmt::format("angle {} outside [-pi, pi]", a));
    }
  }
}

double wrap_angle(double a) {
  if (a >= -kPi && a <= kPi) return a;
  double r = std::remainder(a, 2.0 * kPi);
  if (r < -kPi) r = -kPi;
  if (r > kPi) r = kPi;
  return r;
}

std::array<double, kBasisOrder + 1> half_angle_powers(double x) {
  const double c = std::cos(0.5 * x), s = std::sin(0.5 * x);
  std::array<double, kBasisOrder + 1> p{};
  for (int i = 0; i <= kBasisOrder; ++i) p[i] = std::pow(c, i) * std::pow(s, kBasisOrder - i);
  return p;
}

BasisVector basis_functions(const ThetaPoint& theta) {
  theta.validate();
  const auto a = half_angle_powers(theta.theta1);
  const auto b = half_angle_powers(theta.theta2);
  BasisVector t;
  for (int i = 0; i <= kBasisOrder; ++i)
    for (int j = 0; j <= kBasisOrder; ++j) t(basis_index(i, j)) = a[i] * b[j];
  return t;
}

BasisJet basis_jet(const ThetaPoint& theta) {
  theta.validate();
  const auto a = power_jet(theta.theta1);
  const auto b = power_jet(theta.theta2);
  BasisJet jet;
  for (int i = 0; i <= kBasisOrder; ++i) {
    for (int j = 0; j <= kBasisOrder; ++j) {
      const int s = basis_index(i, j);
      jet.value(s) = a[0][i] * b[0][j];
      jet.d1(s) = a[1][i] * b[0][j];
      jet.d2(s) = a[0][i] * b[1][j];
      jet.d11(s) = a[2][i] * b[0][j];
      jet.d12(s) = a[1][i] * b[1][j];
      jet.d22(s) = a[0][i] * b[2][j];
    }
  }
  return jet;
}

Circuit build_circuit(const ThetaPoint& theta) {
  theta.validate();
  auto P = [](const char* s) { return PauliString::parse(s); };
  Circuit c;
  c.emplace_back(PauliRotation{P("XI"), kPi});
  for (const auto& rot : {PauliRotation{P("XY"), -theta.theta2}, PauliRotation{P("YX"), theta.theta2}}) {
    const auto compiled = compile_rotation(rot);
    c.insert(c.end(), compiled.begin(), compiled.end());
  }
  c.emplace_back(PauliRotation{P("YI"), theta.theta1});
  c.emplace_back(PauliRotation{P("IY"), -theta.theta1});
  return c;
}

Eigen::Vector4cd statevector(const ThetaPoint& theta) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(0) = 1.0;
  return pgpr::apply(build_circuit(theta), psi);
}

double statevector_expectation(const ThetaPoint& theta, const PauliSum& observable) {
  const Eigen::Vector4cd psi = statevector(theta);
  return (psi.adjoint() * matrix(observable) * psi)(0, 0).real();
}

std::array<Eigen::Vector2cd, 2> boundary_product_state(double theta1) {
  ThetaPoint{theta1, 0.0}.validate();
  const double c = std::cos(0.5 * theta1), s = std::sin(0.5 * theta1);
  // RY(theta1)|1> on qubit 0 and RY(-theta1)|0> on qubit 1.
  return {Eigen::Vector2cd(-s, c), Eigen::Vector2cd(c, -s)};
}

double exact_boundary_expectation(double theta1, const PauliSum& observable) {
  const auto state = boundary_product_state(theta1);
  return expectation_product_state(observable, state);
}

double exact_boundary_energy(double theta1, const QubitHamiltonian& h) {
  return exact_boundary_expectation(theta1, h.sum);
}

MeasurementRecord estimate_observable(const ThetaPoint& theta, const PauliSum& observable,
                                      const NoiseModel& noise, std::uint64_t seed,
                                      const MeasurementOptions& options) {
  if (observable.qubit_count() != 2) throw std::invalid_argument("ansatz acts on two qubits");
  return estimate_expectation(build_circuit(theta), observable, noise, seed, options);
}

MeasurementRecord estimate_energy(const ThetaPoint& theta, const QubitHamiltonian& h,
                                  const NoiseModel& noise, std::uint64_t seed,
                                  const MeasurementOptions& options) {
  return estimate_observable(theta, h.sum, noise, seed, options);
}

}  // namespace pgpr
