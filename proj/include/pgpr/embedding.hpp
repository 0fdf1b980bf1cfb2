#pragma once

#include <array>
#include <stdexcept>

#include <Eigen/Dense>

#include "pgpr/fermion.hpp"
#include "pgpr/pauli.hpp"

namespace pgpr {

/// Coupling constants of the impurity + bath embedding Hamiltonian
///
///   H = U/2 (n_c - 1)^2 + D sum_s (c_s^+ d_s + d_s^+ c_s) + lambda_c sum_s d_s d_s^+
///
/// Energies are in units where 2 * d_hyb = 1 for the standalone benchmarks;
/// the self-consistency loop supplies its own d_hyb.
struct EmbeddingParams {
  double u = 0.0;
  double d_hyb = 0.5;
  double lambda_c = 0.0;

  /// Throws std::invalid_argument for d_hyb == 0 or non-finite fields.
  void validate() const;
};

/// Orbital basis for the second-quantized operators: column k holds the (c, d)
/// amplitudes of orbital k. Identity gives the site basis.
using OrbitalBasis = Eigen::Matrix2d;

/// Impurity/bath operators expressed in a chosen orbital basis. Modes are
/// (orb0 up, orb1 up, orb0 dn, orb1 dn).
struct EmbeddingOperators {
  FermionOperator hamiltonian;
  FermionOperator double_occupancy;  // n_c,up n_c,dn
  FermionOperator f1;                // 1/2 sum_s (c_s^+ d_s + h.c.) / 2
  FermionOperator f2;                // 1/2 sum_s d_s d_s^+
  FermionOperator spin_squared;      // S^2
  FermionOperator particle_number;
  FermionOperator spin_z;
};

EmbeddingOperators build_embedding_operators(const EmbeddingParams& p,
                                             const OrbitalBasis& basis = OrbitalBasis::Identity());

/// Second-quantized embedding Hamiltonian in the site basis.
FermionOperator build_fermionic_hamiltonian(const EmbeddingParams& p);

struct HartreeFockSolution {
  OrbitalBasis orbitals;         // column 0 bonding (occupied), column 1 antibonding
  double energy;                 // <phi0|H|phi0>
  double impurity_occupation;    // <n_c,s> per spin
  int iterations;
};

class HartreeFockError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Spin-restricted mean-field solution of the half-filled two-electron problem.
HartreeFockSolution hartree_fock(const EmbeddingParams& p);

/// zeta_0 I + zeta_1 (Z0 - Z1) + zeta_2 (X0 + X1) + zeta_3 Z0Z1
///   + zeta_4 (X0Z1 - Z0X1) + zeta_5 X0X1
struct QubitHamiltonian {
  std::array<double, 6> zeta{};
  PauliSum sum{2};

  static QubitHamiltonian from_zeta(const std::array<double, 6>& zeta);
};

class MappingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything the two-qubit circuits need for one parameter set: the
/// Hamiltonian and the three observables, all in the Hartree-Fock orbital
/// basis, parity-mapped and reduced to two qubits.
struct QubitEmbedding {
  EmbeddingParams params;
  HartreeFockSolution hf;
  QubitHamiltonian hamiltonian;
  PauliSum double_occupancy{2};
  PauliSum f1{2};
  PauliSum f2{2};
};

/// Restricts a number- and spin-conserving operator to the (N_up = 1,
/// N_dn = 1) sector through the parity mapping: qubit j of the four-qubit
/// register carries the parity of modes 0..j; qubits 1 and 3 are fixed by
/// N_up odd and N even and dropped. Returns the 4x4 matrix on the remaining
/// qubits (old 0 -> new 0, old 2 -> new 1).
Eigen::MatrixXd parity_reduce(const Eigen::MatrixXd& fock_operator);

/// Qubit index of the Hartree-Fock determinant after the reduction: |q0=1, q1=0>.
inline constexpr int kHartreeFockBasisIndex = 1;

QubitHamiltonian map_to_qubits(const EmbeddingParams& p);
QubitEmbedding embed(const EmbeddingParams& p);

struct EhSolution {
  double energy = 0.0;
  double docc = 0.0;
  double f1 = 0.0;
  double f2 = 0.0;
};

/// Lowest singlet of the two-electron, S_z = 0 sector by dense diagonalization.
EhSolution exact_ground_state(const EmbeddingParams& p);

/// All four eigenvalues of the (N_up = 1, N_dn = 1) sector, ascending.
Eigen::Vector4d sector_spectrum(const EmbeddingParams& p);

}  // namespace pgpr
