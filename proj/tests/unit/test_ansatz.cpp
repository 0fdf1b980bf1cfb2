#include <doctest.h>

#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "pgpr/ansatz.hpp"
#include "pgpr/circuit.hpp"

using namespace pgpr;
using cd = std::complex<double>;

namespace {

// exp(-i a/2 P) = cos(a/2) I - i sin(a/2) P for any Pauli string P.
Eigen::Matrix4cd pauli_exp(const char* s, double a) {
  return std::cos(a / 2) * Eigen::Matrix4cd::Identity() - cd(0, 1) * std::sin(a / 2) * Eigen::Matrix4cd(matrix(PauliString::parse(s)));
}

// Ansatz state written directly from the four exponentials, rightmost first.
Eigen::Vector4cd oracle_state(const ThetaPoint& t) {
  Eigen::Vector4cd hf = Eigen::Vector4cd::Zero();
  hf(kHartreeFockBasisIndex) = 1.0;
  return pauli_exp("IY", -t.theta1) * pauli_exp("YI", t.theta1) * pauli_exp("YX", t.theta2) * pauli_exp("XY", -t.theta2) * hf;
}

double phase_insensitive_distance(const Eigen::Vector4cd& a, const Eigen::Vector4cd& b) {
  return std::sqrt(std::max(0.0, 1.0 - std::norm(a.dot(b))));
}

}  // namespace

TEST_SUITE("ansatz") {
  TEST_CASE("theta range") {
    CHECK_THROWS_AS(ThetaPoint({3.2, 0.0}).validate(), ThetaRangeError);
    CHECK_THROWS_AS(build_circuit({0.0, -3.2}), ThetaRangeError);
    CHECK_NOTHROW(ThetaPoint({kPi, -kPi}).validate());
    CHECK(wrap_angle(3 * kPi / 2) == doctest::Approx(-kPi / 2));
    CHECK(wrap_angle(-5 * kPi / 2) == doctest::Approx(-kPi / 2));
    CHECK(wrap_angle(0.3) == 0.3);
  }

  TEST_CASE("basis function examples") {
    const BasisVector at0 = basis_functions({0, 0});
    for (int s = 0; s < kBasisSize; ++s) CHECK(at0(s) == (s == basis_index(4, 4) ? 1.0 : 0.0));
    const BasisVector atpi = basis_functions({kPi, 0});
    for (int s = 0; s < kBasisSize; ++s) CHECK(std::abs(atpi(s) - (s == basis_index(0, 4) ? 1.0 : 0.0)) <= 1e-15);
    const BasisVector half = basis_functions({kPi / 2, kPi / 2});
    for (int s = 0; s < kBasisSize; ++s) CHECK(half(s) == doctest::Approx(1.0 / 16));
    CHECK(half.sum() == doctest::Approx(25.0 / 16));
  }

  TEST_CASE("property: basis entries follow the half-angle definition") {
    auto g = test::rng(41);
    for (int trial = 0; trial < 50; ++trial) {
      const auto t = test::random_theta(g);
      const BasisVector b = basis_functions(t);
      const double c1 = std::cos(t.theta1 / 2), s1 = std::sin(t.theta1 / 2);
      const double c2 = std::cos(t.theta2 / 2), s2 = std::sin(t.theta2 / 2);
      for (int i = 0; i <= 4; ++i)
        for (int j = 0; j <= 4; ++j)
          CHECK(b(basis_index(i, j)) == doctest::Approx(std::pow(c1, i) * std::pow(s1, 4 - i) * std::pow(c2, j) * std::pow(s2, 4 - j)).epsilon(1e-13));
    }
  }

  TEST_CASE("property: basis jet matches central differences") {
    auto g = test::rng(42);
    const double h = 1e-5;
    for (int trial = 0; trial < 20; ++trial) {
      ThetaPoint t = test::random_theta(g);
      t.theta1 *= 0.9;
      t.theta2 *= 0.9;
      const BasisJet j = basis_jet(t);
      auto at = [&](double a, double b) { return basis_functions({t.theta1 + a, t.theta2 + b}); };
      CHECK((j.value - basis_functions(t)).norm() <= 1e-15);
      CHECK((j.d1 - (at(h, 0) - at(-h, 0)) / (2 * h)).norm() <= 1e-8);
      CHECK((j.d2 - (at(0, h) - at(0, -h)) / (2 * h)).norm() <= 1e-8);
      CHECK((j.d11 - (at(h, 0) - 2 * j.value + at(-h, 0)) / (h * h)).norm() <= 1e-4);
      CHECK((j.d22 - (at(0, h) - 2 * j.value + at(0, -h)) / (h * h)).norm() <= 1e-4);
      CHECK((j.d12 - (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h)).norm() <= 1e-4);
    }
  }

  TEST_CASE("circuit at theta = 0 prepares the Hartree-Fock state") {
    const Eigen::Vector4cd psi = statevector({0, 0});
    CHECK(std::norm(psi(kHartreeFockBasisIndex)) == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("theta = (pi, 0) flips both qubits") {
    // |q0 = 1, q1 = 0> -> |q0 = 0, q1 = 1>
    CHECK(std::norm(statevector({kPi, 0})(2)) == doctest::Approx(1.0).epsilon(1e-14));
  }

  TEST_CASE("property: circuit realizes the exponential product") {
    auto g = test::rng(43);
    const std::size_t gates = build_circuit({0, 0}).size();
    for (int trial = 0; trial < 100; ++trial) {
      const auto t = test::random_theta(g);
      const Eigen::Vector4cd psi = statevector(t);
      CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(phase_insensitive_distance(psi, oracle_state(t)) <= 1e-7);
      CHECK(build_circuit(t).size() == gates);
    }
  }

  TEST_CASE("golden: circuit dump") {
    CHECK(dump_circuit(build_circuit({0.25, -1.5})) == test::read_text("circuit_theta_0.25_-1.5.txt"));
  }

  TEST_CASE("boundary energy examples") {
    CHECK(exact_boundary_energy(0.0, map_to_qubits({0.0, 0.5, 0.0})) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(exact_boundary_energy(0.0, map_to_qubits({1.0, 0.5, 0.0})) == doctest::Approx(-0.75).epsilon(1e-12));
    auto g = test::rng(44);
    for (int trial = 0; trial < 20; ++trial) {
      const auto h = map_to_qubits(test::random_params(g));
      CHECK(std::abs(exact_boundary_energy(kPi / 2, h) - statevector_expectation({kPi / 2, 0}, h.sum)) <= 1e-12);
    }
  }

  TEST_CASE("property: boundary oracle agrees with the statevector") {
    auto g = test::rng(45);
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = test::random_params(g);
      const auto e = embed(p);
      const double t1 = test::uniform(g, -kPi, kPi);
      CHECK(std::abs(exact_boundary_energy(t1, e.hamiltonian) - statevector_expectation({t1, 0}, e.hamiltonian.sum)) <= 1e-12);
      for (const PauliSum* o : {&e.double_occupancy, &e.f1, &e.f2})
        CHECK(std::abs(exact_boundary_expectation(t1, *o) - statevector_expectation({t1, 0}, *o)) <= 1e-12);
      CHECK(statevector_expectation({0, 0}, e.hamiltonian.sum) == doctest::Approx(e.hf.energy).epsilon(1e-12));
    }
  }

  TEST_CASE("property: landscape lies in the 25-function span") {
    auto g = test::rng(46);
    for (int trial = 0; trial < 10; ++trial) {
      const auto h = map_to_qubits(test::random_params(g));
      Eigen::MatrixXd a(60, kBasisSize);
      Eigen::VectorXd y(60);
      for (int k = 0; k < 60; ++k) {
        const auto t = test::random_theta(g);
        a.row(k) = basis_functions(t).transpose();
        y(k) = statevector_expectation(t, h.sum);
      }
      const Eigen::VectorXd xi = a.completeOrthogonalDecomposition().solve(y);
      double worst = 0.0;
      for (int k = 0; k < 100; ++k) {
        const auto t = test::random_theta(g);
        worst = std::max(worst, std::abs(basis_functions(t).dot(xi) - statevector_expectation(t, h.sum)));
      }
      CHECK(worst <= 1e-10);
    }
  }

  TEST_CASE("property: periodicity across the theta edges") {
    auto g = test::rng(47);
    for (int trial = 0; trial < 20; ++trial) {
      const auto h = map_to_qubits(test::random_params(g));
      const double x = test::uniform(g, -kPi, kPi);
      CHECK(std::abs(statevector_expectation({-kPi, x}, h.sum) - statevector_expectation({kPi, x}, h.sum)) <= 1e-12);
      CHECK(std::abs(statevector_expectation({x, -kPi}, h.sum) - statevector_expectation({x, kPi}, h.sum)) <= 1e-12);
    }
  }

  TEST_CASE("golden: landscape samples from the NumPy reference") {
    const auto rows = test::read_csv("landscape_samples.csv");
    REQUIRE(rows.size() == 32);
    for (const auto& r : rows) {
      const auto e = embed({r[0], r[1], r[2]});
      const ThetaPoint t{r[3], r[4]};
      CAPTURE(r[0]);
      CHECK(statevector_expectation(t, e.hamiltonian.sum) == doctest::Approx(r[5]).epsilon(1e-10));
      CHECK(statevector_expectation(t, e.double_occupancy) == doctest::Approx(r[6]).epsilon(1e-10));
      CHECK(statevector_expectation(t, e.f1) == doctest::Approx(r[7]).epsilon(1e-10));
      CHECK(statevector_expectation(t, e.f2) == doctest::Approx(r[8]).epsilon(1e-10));
    }
  }
}
