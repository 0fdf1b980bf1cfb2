#include "pgpr/embedding.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace pgpr {

namespace {

// Mode index of orbital k with spin s (0 up, 1 down).
constexpr std::size_t mode(std::size_t orbital, std::size_t spin) { return 2 * spin + orbital; }

// Site operator (c or d, selected by `site`) for spin s, expanded in `basis`:
// site_s = sum_k basis(site, k) orb_{k,s}.
FermionOperator site_annihilator(const OrbitalBasis& basis, std::size_t site, std::size_t spin) {
  FermionOperator f;
  for (std::size_t k = 0; k < 2; ++k) {
    f = f + FermionOperator::annihilate(mode(k, spin)) * basis(static_cast<Eigen::Index>(site),
                                                                static_cast<Eigen::Index>(k));
  }
  return f;
}

// Fixes the arbitrary eigenvector signs: first nonzero (c, then d) amplitude positive.
void canonicalize_signs(OrbitalBasis& b) {
  for (int k = 0; k < 2; ++k) {
    const double lead = std::abs(b(0, k)) > 1e-14 ? b(0, k) : b(1, k);
    if (lead < 0) b.col(k) *= -1.0;
  }
}

// Mean-field orbitals for a given impurity occupation per spin.
OrbitalBasis mean_field_orbitals(const EmbeddingParams& p, double n_c) {
  Eigen::Matrix2d h;
  h << p.u * (n_c - 0.5), p.d_hyb, p.d_hyb, -p.lambda_c;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
  OrbitalBasis b = es.eigenvectors();
  canonicalize_signs(b);
  return b;
}

}  // namespace

void EmbeddingParams::validate() const {
  if (!std::isfinite(u) || !std::isfinite(d_hyb) || !std::isfinite(lambda_c)) {
    throw std::invalid_argument("embedding parameters must be finite");
  }
  if (d_hyb == 0.0) throw std::invalid_argument("hybridization d_hyb must be nonzero");
}

EmbeddingOperators build_embedding_operators(const EmbeddingParams& p, const OrbitalBasis& basis) {
  p.validate();
  const auto one = FermionOperator::identity();
  std::array<FermionOperator, 2> c, d;
  for (std::size_t s = 0; s < 2; ++s) {
    c[s] = site_annihilator(basis, 0, s);
    d[s] = site_annihilator(basis, 1, s);
  }
  const auto n_c_up = c[0].adjoint() * c[0];
  const auto n_c_dn = c[1].adjoint() * c[1];
  const auto n_c = n_c_up + n_c_dn;
  const auto shifted = n_c - one;

  EmbeddingOperators ops;
  ops.hamiltonian = (shifted * shifted) * (0.5 * p.u);
  for (std::size_t s = 0; s < 2; ++s) {
    ops.hamiltonian = ops.hamiltonian + (c[s].adjoint() * d[s] + d[s].adjoint() * c[s]) * p.d_hyb +
                      (d[s] * d[s].adjoint()) * p.lambda_c;
  }
  ops.double_occupancy = n_c_up * n_c_dn;
  for (std::size_t s = 0; s < 2; ++s) {
    // Hermitian part of 1/2 c_s^+ d_s; equal to it for real states.
    ops.f1 = ops.f1 + (c[s].adjoint() * d[s] + d[s].adjoint() * c[s]) * 0.25;
    ops.f2 = ops.f2 + (d[s] * d[s].adjoint()) * 0.5;
  }

  // Spin operators are basis independent; build them on the orbital modes.
  FermionOperator sz, s_plus, number;
  for (std::size_t k = 0; k < 2; ++k) {
    const auto up = FermionOperator::annihilate(mode(k, 0));
    const auto dn = FermionOperator::annihilate(mode(k, 1));
    sz = sz + (up.adjoint() * up - dn.adjoint() * dn) * 0.5;
    s_plus = s_plus + up.adjoint() * dn;
    number = number + up.adjoint() * up + dn.adjoint() * dn;
  }
  const auto s_minus = s_plus.adjoint();
  ops.spin_squared = s_minus * s_plus + sz * sz + sz;
  ops.spin_z = sz;
  ops.particle_number = number;
  return ops;
}

FermionOperator build_fermionic_hamiltonian(const EmbeddingParams& p) {
  return build_embedding_operators(p).hamiltonian;
}

HartreeFockSolution hartree_fock(const EmbeddingParams& p) {
  p.validate();
  // The self-consistent occupation is the root of g(n) = b_c(n)^2 - n, which
  // decreases monotonically on [0, 1] (a higher impurity level pushes weight
  // to the bath), so bisection always brackets it.
  auto g = [&](double n) {
    const auto b = mean_field_orbitals(p, n);
    return b(0, 0) * b(0, 0) - n;
  };
  double lo = 0.0, hi = 1.0;
  int iterations = 0;
  if (!(g(lo) >= 0.0 && g(hi) <= 0.0)) {
    throw HartreeFockError("mean-field occupation is not bracketed on [0, 1]");
  }
  while (hi - lo > 1e-15 && iterations < 200) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
    ++iterations;
  }
  if (hi - lo > 1e-12) throw HartreeFockError("mean-field self-consistency did not converge");

  HartreeFockSolution hf;
  hf.impurity_occupation = 0.5 * (lo + hi);
  hf.orbitals = mean_field_orbitals(p, hf.impurity_occupation);
  hf.iterations = iterations;
  const Eigen::MatrixXd h = build_embedding_operators(p, hf.orbitals).hamiltonian.dense();
  constexpr Eigen::Index kDeterminant = (1 << mode(0, 0)) | (1 << mode(0, 1));
  hf.energy = h(kDeterminant, kDeterminant);
  return hf;
}

QubitHamiltonian QubitHamiltonian::from_zeta(const std::array<double, 6>& z) {
  auto P = [](const char* s) { return PauliString::parse(s); };
  QubitHamiltonian q;
  q.zeta = z;
  q.sum = PauliSum(2, {{z[0], P("II")},
                       {z[1], P("ZI")},
                       {-z[1], P("IZ")},
                       {z[2], P("XI")},
                       {z[2], P("IX")},
                       {z[3], P("ZZ")},
                       {z[4], P("XZ")},
                       {-z[4], P("ZX")},
                       {z[5], P("XX")}});
  return q;
}

Eigen::MatrixXd parity_reduce(const Eigen::MatrixXd& fock_operator) {
  if (fock_operator.rows() != 16 || fock_operator.cols() != 16) {
    throw std::invalid_argument("parity_reduce expects a 16x16 Fock-space operator");
  }
  std::array<Eigen::Index, 4> fock{};
  for (unsigned q = 0; q < 4; ++q) {
    const unsigned p0 = q & 1u, p1 = 1u, p2 = (q >> 1) & 1u, p3 = 0u;
    const unsigned occ = p0 | ((p1 ^ p0) << 1) | ((p2 ^ p1) << 2) | ((p3 ^ p2) << 3);
    fock[q] = occ;
  }
  Eigen::MatrixXd out(4, 4);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) out(a, b) = fock_operator(fock[a], fock[b]);
  return out;
}

namespace {

PauliSum reduce_to_pauli(const FermionOperator& op) {
  return pauli_decompose(parity_reduce(op.dense()).cast<Complex>(), 1e-15);
}

QubitHamiltonian extract_zeta(const PauliSum& sum, double tolerance) {
  auto coef = [&](const char* s) { return sum.coefficient(PauliString::parse(s)); };
  std::array<double, 6> z{coef("II"), coef("ZI"), coef("XI"), coef("ZZ"), coef("XZ"), coef("XX")};
  auto q = QubitHamiltonian::from_zeta(z);
  double mismatch = 0.0;
  for (const auto& t : (sum + q.sum * -1.0).terms()) mismatch = std::max(mismatch, std::abs(t.coefficient));
  if (mismatch > tolerance) {
    throw MappingError(fmt::format(
        "reduced Hamiltonian leaves the six-term form (max stray coefficient {:.3e})", mismatch));
  }
  return q;
}

}  // namespace

QubitEmbedding embed(const EmbeddingParams& p) {
  QubitEmbedding e;
  e.params = p;
  e.hf = hartree_fock(p);
  const auto ops = build_embedding_operators(p, e.hf.orbitals);
  const PauliSum h = reduce_to_pauli(ops.hamiltonian);
  e.hamiltonian = extract_zeta(h, 1e-10);

  const Eigen::Matrix4cd qm = matrix(e.hamiltonian.sum);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(qm, Eigen::EigenvaluesOnly);
  const Eigen::Vector4d expected = sector_spectrum(p);
  const double err = (es.eigenvalues() - expected).cwiseAbs().maxCoeff();
  if (err > 1e-10) {
    throw MappingError(fmt::format("qubit spectrum deviates from the fermionic sector by {:.3e}", err));
  }
  e.double_occupancy = reduce_to_pauli(ops.double_occupancy);
  e.f1 = reduce_to_pauli(ops.f1);
  e.f2 = reduce_to_pauli(ops.f2);
  return e;
}

QubitHamiltonian map_to_qubits(const EmbeddingParams& p) { return embed(p).hamiltonian; }

Eigen::Vector4d sector_spectrum(const EmbeddingParams& p) {
  const auto idx = sector_indices(1, 1);
  const Eigen::MatrixXd h = build_fermionic_hamiltonian(p).dense()(idx, idx);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

EhSolution exact_ground_state(const EmbeddingParams& p) {
  const auto ops = build_embedding_operators(p);
  const auto idx = sector_indices(1, 1);
  const Eigen::MatrixXd h = ops.hamiltonian.dense()(idx, idx);
  const Eigen::MatrixXd s2 = ops.spin_squared.dense()(idx, idx);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const auto& w = es.eigenvalues();
  const auto& v = es.eigenvectors();

  // Walk degenerate clusters upward; inside a cluster diagonalize S^2 and take
  // the first singlet.
  Eigen::VectorXd ground;
  double energy = 0.0;
  for (Eigen::Index start = 0; start < w.size() && ground.size() == 0;) {
    Eigen::Index end = start + 1;
    while (end < w.size() && std::abs(w(end) - w(start)) < 1e-10) ++end;
    const Eigen::MatrixXd block = v.middleCols(start, end - start);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> spin(block.transpose() * s2 * block);
    for (Eigen::Index k = 0; k < spin.eigenvalues().size(); ++k) {
      if (std::abs(spin.eigenvalues()(k)) < 1e-8) {
        ground = block * spin.eigenvectors().col(k);
        energy = w(start);
        break;
      }
    }
    start = end;
  }
  if (ground.size() == 0) throw std::runtime_error("no singlet in the two-electron sector");
  ground.normalize();

  auto expect = [&](const FermionOperator& op) {
    const Eigen::MatrixXd m = op.dense()(idx, idx);
    return ground.dot(m * ground);
  };
  return {energy, expect(ops.double_occupancy), expect(ops.f1), expect(ops.f2)};
}

}  // namespace pgpr
