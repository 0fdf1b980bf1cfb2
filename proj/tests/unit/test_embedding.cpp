#include <doctest.h>

#include <bit>
#include <cmath>

#include "helpers.hpp"
#include "pgpr/embedding.hpp"
#include "pgpr/fermion.hpp"

using namespace pgpr;

namespace {

Eigen::MatrixXd number_operator() {
  Eigen::MatrixXd n = Eigen::MatrixXd::Zero(16, 16);
  for (std::size_t m = 0; m < kSpinOrbitals; ++m) n += ladder_matrix(m, true) * ladder_matrix(m, false);
  return n;
}

Eigen::MatrixXd spin_z_operator() {
  Eigen::MatrixXd sz = Eigen::MatrixXd::Zero(16, 16);
  for (std::size_t m = 0; m < kSpinOrbitals; ++m) sz += (m < 2 ? 0.5 : -0.5) * ladder_matrix(m, true) * ladder_matrix(m, false);
  return sz;
}

// All six two-electron Fock states, independent of the spin-resolved helper.
Eigen::VectorXd two_electron_spectrum(const EmbeddingParams& p) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < 16; ++i)
    if (std::popcount(static_cast<unsigned>(i)) == 2) idx.push_back(i);
  const Eigen::MatrixXd h = build_fermionic_hamiltonian(p).dense();
  Eigen::MatrixXd block(idx.size(), idx.size());
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = 0; b < idx.size(); ++b) block(a, b) = h(idx[a], idx[b]);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(block).eigenvalues();
}

// Half-filled two-site ground energy at lambda_c = 0: U/4 - sqrt((U/4)^2 + 4 D^2).
double closed_form_ground(double u, double d) { return u / 4 - std::sqrt(u * u / 16 + 4 * d * d); }

}  // namespace

TEST_SUITE("embedding") {
  TEST_CASE("params validation") {
    CHECK_THROWS_AS(EmbeddingParams({1.0, 0.0, 0.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(EmbeddingParams({std::nan(""), 0.5, 0.0}).validate(), std::invalid_argument);
    CHECK_NOTHROW(EmbeddingParams({1.0, 0.5, 0.2}).validate());
  }

  TEST_CASE("U = 0 Hamiltonian is quadratic") {
    const auto h = build_fermionic_hamiltonian({0.0, 0.5, 0.3});
    for (const auto& t : h.terms())
      if (t.coefficient != 0.0) CHECK(t.ops.size() <= 2);
  }

  TEST_CASE("property: Hamiltonian is Hermitian and conserves N and Sz") {
    auto g = test::rng(21);
    const Eigen::MatrixXd n = number_operator(), sz = spin_z_operator();
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::MatrixXd h = build_fermionic_hamiltonian(test::random_params(g)).dense();
      CHECK((h - h.transpose()).norm() <= 1e-14);
      CHECK((h * n - n * h).norm() <= 1e-12);
      CHECK((h * sz - sz * h).norm() <= 1e-12);
    }
  }

  TEST_CASE("U = 1 two-electron ground energy") {
    const double e = two_electron_spectrum({1.0, 0.5, 0.0})(0);
    CHECK(e == doctest::Approx(closed_form_ground(1.0, 0.5)).epsilon(1e-12));
    CHECK(exact_ground_state({1.0, 0.5, 0.0}).energy == doctest::Approx(e).epsilon(1e-12));
  }

  TEST_CASE("Hartree-Fock reference energies") {
    for (double lc : {0.0, 0.2, -0.35}) {
      const double expected = lc - std::sqrt(lc * lc + 1.0);
      CHECK(hartree_fock({0.0, 0.5, lc}).energy == doctest::Approx(expected).epsilon(1e-12));
    }
    CHECK(hartree_fock({1.0, 0.5, 0.0}).energy == doctest::Approx(-0.75).epsilon(1e-12));
    for (double u : {0.0, 0.7, 2.0, 5.0}) CHECK(hartree_fock({u, 0.5, 0.0}).impurity_occupation == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("qubit Hamiltonian spectra at U = 0") {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix(map_to_qubits({0.0, 0.5, 0.0}).sum));
    CHECK(es.eigenvalues()(0) == doctest::Approx(-1.0).epsilon(1e-12));
    es.compute(matrix(map_to_qubits({0.0, 0.5, 0.2}).sum));
    CHECK(es.eigenvalues()(0) == doctest::Approx(0.2 - std::sqrt(0.04 + 1.0)).epsilon(1e-12));
  }

  TEST_CASE("qubit Hamiltonian has the six-term structure") {
    auto g = test::rng(22);
    for (int trial = 0; trial < 20; ++trial) {
      const auto q = map_to_qubits(test::random_params(g));
      const auto& z = q.zeta;
      auto c = [&](const char* s) { return q.sum.coefficient(PauliString::parse(s)); };
      CHECK(c("II") == doctest::Approx(z[0]));
      CHECK(c("ZI") == doctest::Approx(z[1]));
      CHECK(c("IZ") == doctest::Approx(-z[1]));
      CHECK(c("XI") == doctest::Approx(z[2]));
      CHECK(c("IX") == doctest::Approx(z[2]));
      CHECK(c("ZZ") == doctest::Approx(z[3]));
      CHECK(c("XZ") == doctest::Approx(z[4]));
      CHECK(c("ZX") == doctest::Approx(-z[4]));
      CHECK(c("XX") == doctest::Approx(z[5]));
      for (const auto& t : q.sum.terms()) {
        const std::string s = t.string.to_string();
        CHECK(std::string("II ZI IZ XI IX ZZ XZ ZX XX").find(s) != std::string::npos);
      }
      CHECK((matrix(QubitHamiltonian::from_zeta(z).sum) - matrix(q.sum)).norm() <= 1e-12);
    }
  }

  TEST_CASE("property: qubit spectrum equals the fermionic singlet-sector spectrum") {
    auto g = test::rng(23);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = test::random_params(g);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix(map_to_qubits(p).sum));
      const Eigen::MatrixXd h = build_fermionic_hamiltonian(p).dense();
      const auto idx = sector_indices(1, 1);
      Eigen::MatrixXd block(idx.size(), idx.size());
      for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = 0; b < idx.size(); ++b) block(a, b) = h(idx[a], idx[b]);
      const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(block).eigenvalues();
      worst = std::max(worst, (es.eigenvalues() - ref).cwiseAbs().maxCoeff());
      worst = std::max(worst, (sector_spectrum(p) - ref).cwiseAbs().maxCoeff());
    }
    CHECK(worst <= 1e-10);
  }

  TEST_CASE("Hartree-Fock determinant maps to basis state |q0 = 1, q1 = 0>") {
    auto g = test::rng(24);
    for (int trial = 0; trial < 20; ++trial) {
      const auto p = test::random_params(g);
      const Eigen::MatrixXcd h = matrix(map_to_qubits(p).sum);
      CHECK(h(kHartreeFockBasisIndex, kHartreeFockBasisIndex).real() == doctest::Approx(hartree_fock(p).energy).epsilon(1e-12));
    }
  }

  TEST_CASE("exact ground state at U = 0") {
    const auto s = exact_ground_state({0.0, 0.5, 0.0});
    CHECK(s.energy == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(std::abs(s.docc - 0.25) <= 1e-12);
    CHECK(s.f2 == doctest::Approx(0.5).epsilon(1e-12));
    // Bonding orbital (c - d)/sqrt(2) for D > 0, so <c^+ d> = -1/2 per spin.
    CHECK(s.f1 == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(exact_ground_state({0.0, -0.5, 0.0}).f1 == doctest::Approx(0.5).epsilon(1e-12));
  }

  TEST_CASE("particle-hole symmetry fixes f2 = 1/2 at lambda_c = 0") {
    for (double u = 0.0; u <= 6.0; u += 0.25) CHECK(std::abs(exact_ground_state({u, 0.5, 0.0}).f2 - 0.5) <= 1e-12);
  }

  TEST_CASE("double occupancy decreases with U") {
    double prev = 0.25 + 1e-12;
    for (double u = 0.0; u <= 4.0; u += 0.25) {
      const double d = exact_ground_state({u, 0.5, 0.0}).docc;
      CHECK(d < prev);
      prev = d;
    }
    CHECK(exact_ground_state({4.0, 0.5, 0.0}).docc < 0.25);
  }

  TEST_CASE("property: variational bound and observable ranges") {
    auto g = test::rng(25);
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = test::random_params(g);
      const auto s = exact_ground_state(p);
      CHECK(s.energy <= hartree_fock(p).energy + 1e-12);
      CHECK(s.docc >= -1e-12);
      CHECK(s.docc <= 1.0);
      CHECK(s.f2 >= -1e-12);
      CHECK(s.f2 <= 1.0 + 1e-12);
      CHECK(std::abs(s.f1) <= 0.5 + 1e-12);
    }
  }

  TEST_CASE("golden: zeta grid and ground-state observables from the NumPy reference") {
    const auto rows = test::read_csv("zeta_grid.csv");
    REQUIRE(rows.size() == 54);
    for (const auto& r : rows) {
      const EmbeddingParams p{r[0], r[1], r[2]};
      CAPTURE(r[0]);
      CAPTURE(r[1]);
      CAPTURE(r[2]);
      const auto q = map_to_qubits(p);
      for (int k = 0; k < 6; ++k) CHECK(q.zeta[k] == doctest::Approx(r[3 + k]).epsilon(1e-10));
      CHECK(hartree_fock(p).energy == doctest::Approx(r[9]).epsilon(1e-10));
      const auto s = exact_ground_state(p);
      CHECK(s.energy == doctest::Approx(r[10]).epsilon(1e-10));
      CHECK(s.docc == doctest::Approx(r[11]).epsilon(1e-9));
      CHECK(s.f1 == doctest::Approx(r[12]).epsilon(1e-9));
      CHECK(s.f2 == doctest::Approx(r[13]).epsilon(1e-9));
    }
  }
}
