#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "pgpr/pauli.hpp"

using namespace pgpr;

TEST_SUITE("pauli") {
  TEST_CASE("multiply: disjoint supports commute") {
    const auto r = multiply(PauliString::parse("XI"), PauliString::parse("IX"));
    CHECK(r.phase == Complex(1.0, 0.0));
    CHECK(r.product == PauliString::parse("XX"));
  }

  TEST_CASE("multiply: involution") {
    const auto r = multiply(PauliString::parse("Z"), PauliString::parse("Z"));
    CHECK(r.phase == Complex(1.0, 0.0));
    CHECK(r.product.is_identity());
  }

  TEST_CASE("multiply: XY = iZ") {
    const auto r = multiply(PauliString::parse("X"), PauliString::parse("Y"));
    CHECK(r.phase == Complex(0.0, 1.0));
    CHECK(r.product == PauliString::parse("Z"));
  }

  TEST_CASE("multiply: mismatched sizes throw") {
    CHECK_THROWS_AS(multiply(PauliString::parse("X"), PauliString::parse("XX")), std::invalid_argument);
  }

  TEST_CASE("matrix of Z and of II") {
    Eigen::MatrixXcd z(2, 2);
    z << 1, 0, 0, -1;
    CHECK((matrix(PauliString::parse("Z")) - z).norm() == 0.0);
    CHECK((matrix(PauliString::parse("II")) - Eigen::MatrixXcd::Identity(4, 4)).norm() == 0.0);
  }

  TEST_CASE("matrix of 0.5 X + 0.5 Z has eigenvalues +-sqrt(2)/2") {
    const PauliSum h = PauliSum::parse("0.5 * X\n0.5 * Z\n");
    // Oracle: a X + b Z has eigenvalues +-sqrt(a^2 + b^2).
    const double expected = std::sqrt(0.5 * 0.5 + 0.5 * 0.5);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix(h));
    CHECK(es.eigenvalues()(0) == doctest::Approx(-expected).epsilon(1e-14));
    CHECK(es.eigenvalues()(1) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(expected == doctest::Approx(std::sqrt(2.0) / 2.0));
  }

  TEST_CASE("matrix rejects registers above the dense limit") {
    CHECK_THROWS(matrix(PauliString::parse("XXXXX")));
  }

  TEST_CASE("product-state expectations") {
    const Eigen::Vector2cd zero(1, 0), plus(1 / std::sqrt(2.0), 1 / std::sqrt(2.0));
    CHECK(expectation_product_state(PauliSum::parse("1 * Z"), std::array{zero}) == doctest::Approx(1.0));
    CHECK(expectation_product_state(PauliSum::parse("1 * X"), std::array{plus}) == doctest::Approx(1.0));
    // exp(-i t Y / 2)|0> = (cos t/2, sin t/2).
    const double t = kPi / 3;
    const Eigen::Vector2cd rotated(std::cos(t / 2), std::sin(t / 2));
    CHECK(expectation_product_state(PauliSum::parse("1 * Z"), std::array{rotated}) == doctest::Approx(std::cos(t)));
    CHECK(std::cos(t) == doctest::Approx(0.5));
  }

  TEST_CASE("product-state expectation rejects unnormalized factors") {
    const Eigen::Vector2cd bad(1, 1);
    CHECK_THROWS(expectation_product_state(PauliSum::parse("1 * Z"), std::array{bad}));
  }

  TEST_CASE("property: multiply agrees with dense products") {
    auto g = test::rng(11);
    for (int trial = 0; trial < 300; ++trial) {
      const std::size_t n = 1 + trial % 3;
      const auto a = test::random_string(g, n), b = test::random_string(g, n);
      const auto r = multiply(a, b);
      const Eigen::MatrixXcd lhs = matrix(a) * matrix(b);
      const Eigen::MatrixXcd rhs = r.phase * matrix(r.product);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }

  TEST_CASE("property: product-state expectation matches the dense form") {
    auto g = test::rng(12);
    for (int trial = 0; trial < 100; ++trial) {
      const std::size_t n = 1 + trial % 4;
      std::vector<PauliTerm> terms;
      for (int k = 0; k < 6; ++k) terms.push_back({test::uniform(g, -1, 1), test::random_string(g, n)});
      const PauliSum h(n, terms);
      std::vector<Eigen::Vector2cd> state;
      Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
      for (std::size_t q = 0; q < n; ++q) {
        Eigen::Vector2cd v(Complex(test::uniform(g, -1, 1), test::uniform(g, -1, 1)),
                           Complex(test::uniform(g, -1, 1), test::uniform(g, -1, 1)));
        v.normalize();
        state.push_back(v);
        // Qubit q is bit q of the basis index, so later qubits are more significant.
        Eigen::VectorXcd next(psi.size() * 2);
        for (Eigen::Index hi = 0; hi < 2; ++hi) next.segment(hi * psi.size(), psi.size()) = v(hi) * psi;
        psi = next;
      }
      CHECK(expectation_product_state(h, state) == doctest::Approx(test::dense_expectation(psi, matrix(h))).epsilon(1e-12));
    }
  }

  TEST_CASE("property: Pauli sums are Hermitian") {
    auto g = test::rng(13);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<PauliTerm> terms;
      for (int k = 0; k < 8; ++k) terms.push_back({test::uniform(g, -2, 2), test::random_string(g, 3)});
      const Eigen::MatrixXcd m = matrix(PauliSum(3, terms));
      CHECK((m - m.adjoint()).norm() <= 1e-14);
    }
  }

  TEST_CASE("canonical form merges duplicates and drops zeros") {
    const PauliSum a(2, {{0.5, PauliString::parse("ZZ")}, {0.25, PauliString::parse("XI")}, {0.5, PauliString::parse("ZZ")},
                         {1.0, PauliString::parse("YY")}, {-1.0, PauliString::parse("YY")}});
    REQUIRE(a.terms().size() == 2);
    CHECK(a.terms()[0].string == PauliString::parse("XI"));
    CHECK(a.coefficient(PauliString::parse("ZZ")) == 1.0);
    CHECK(a == PauliSum(2, {{1.0, PauliString::parse("ZZ")}, {0.25, PauliString::parse("XI")}}));
  }

  TEST_CASE("text round trip") {
    auto g = test::rng(14);
    std::vector<PauliTerm> terms;
    for (int k = 0; k < 10; ++k) terms.push_back({test::uniform(g, -1, 1), test::random_string(g, 2)});
    const PauliSum h(2, terms);
    CHECK(PauliSum::parse(h.to_text()) == h);
    CHECK(PauliSum::parse("0.25 * ZZ").coefficient(PauliString::parse("ZZ")) == 0.25);
  }

  TEST_CASE("decomposition inverts matrix()") {
    auto g = test::rng(15);
    std::vector<PauliTerm> terms;
    for (int k = 0; k < 10; ++k) terms.push_back({test::uniform(g, -1, 1), test::random_string(g, 3)});
    const PauliSum h(3, terms);
    const PauliSum back = pauli_decompose(matrix(h));
    CHECK((matrix(back) - matrix(h)).norm() <= 1e-13);
    CHECK(back.terms().size() == h.terms().size());
  }
}
