#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace pgpr {

/// Number of spin-orbitals of the embedding problem: (c up, d up, c dn, d dn).
inline constexpr std::size_t kSpinOrbitals = 4;

struct LadderOp {
  std::size_t mode;
  bool creation;
};

struct FermionTerm {
  double coefficient;
  std::vector<LadderOp> ops;  // applied right to left, as written
};

/// Second-quantized operator on kSpinOrbitals modes: a real linear combination
/// of ladder-operator products. Dense form uses the Fock basis with
/// |n> = (a_0^+)^{n_0} (a_1^+)^{n_1} ... |vac>, index sum_k n_k 2^k.
class FermionOperator {
 public:
  FermionOperator() = default;

  static FermionOperator identity(double scale = 1.0);
  static FermionOperator annihilate(std::size_t mode);
  static FermionOperator create(std::size_t mode);

  const std::vector<FermionTerm>& terms() const noexcept { return terms_; }

  FermionOperator adjoint() const;
  FermionOperator operator+(const FermionOperator& o) const;
  FermionOperator operator-(const FermionOperator& o) const;
  FermionOperator operator*(const FermionOperator& o) const;
  FermionOperator operator*(double s) const;
  friend FermionOperator operator*(double s, const FermionOperator& f) { return f * s; }

  /// 16x16 real matrix in the Fock basis.
  Eigen::MatrixXd dense() const;

 private:
  std::vector<FermionTerm> terms_;
};

/// Dense matrix of a single ladder operator (Jordan-Wigner sign convention).
Eigen::MatrixXd ladder_matrix(std::size_t mode, bool creation);

/// Fock-basis indices with the given spin-resolved electron counts, where
/// modes {0,1} are spin up and {2,3} spin down.
std::vector<Eigen::Index> sector_indices(int n_up, int n_down);

}  // namespace pgpr
