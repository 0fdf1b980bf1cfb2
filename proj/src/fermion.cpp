#include "pgpr/fermion.hpp"

#include <bit>
#include <stdexcept>

namespace pgpr {

namespace {
constexpr Eigen::Index kFockDim = Eigen::Index{1} << kSpinOrbitals;
}

Eigen::MatrixXd ladder_matrix(std::size_t mode, bool creation) {
  if (mode >= kSpinOrbitals) throw std::invalid_argument("fermion mode out of range");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(kFockDim, kFockDim);
  const unsigned bit = 1u << mode;
  for (unsigned col = 0; col < kFockDim; ++col) {
    const bool occupied = (col & bit) != 0;
    if (occupied == creation) continue;
    // Sign from the occupied modes ordered before `mode`.
    const int before = std::popcount(col & (bit - 1u));
    const unsigned row = col ^ bit;
    m(row, col) = (before % 2 == 0) ? 1.0 : -1.0;
  }
  return m;
}

std::vector<Eigen::Index> sector_indices(int n_up, int n_down) {
  std::vector<Eigen::Index> out;
  for (unsigned i = 0; i < kFockDim; ++i) {
    const int up = std::popcount(i & 0b0011u);
    const int dn = std::popcount(i & 0b1100u);
    if (up == n_up && dn == n_down) out.push_back(i);
  }
  return out;
}

FermionOperator FermionOperator::identity(double scale) {
  FermionOperator f;
  f.terms_.push_back({scale, {}});
  return f;
}

FermionOperator FermionOperator::annihilate(std::size_t mode) {
  if (mode >= kSpinOrbitals) throw std::invalid_argument("fermion mode out of range");
  FermionOperator f;
  f.terms_.push_back({1.0, {{mode, false}}});
  return f;
}

FermionOperator FermionOperator::create(std::size_t mode) {
  if (mode >= kSpinOrbitals) throw std::invalid_argument("fermion mode out of range");
  FermionOperator f;
  f.terms_.push_back({1.0, {{mode, true}}});
  return f;
}

FermionOperator FermionOperator::adjoint() const {
  FermionOperator f;
  for (const auto& t : terms_) {
    FermionTerm a{t.coefficient, {}};
    for (auto it = t.ops.rbegin(); it != t.ops.rend(); ++it) a.ops.push_back({it->mode, !it->creation});
    f.terms_.push_back(std::move(a));
  }
  return f;
}

FermionOperator FermionOperator::operator+(const FermionOperator& o) const {
  FermionOperator f = *this;
  f.terms_.insert(f.terms_.end(), o.terms_.begin(), o.terms_.end());
  return f;
}

FermionOperator FermionOperator::operator-(const FermionOperator& o) const { return *this + o * -1.0; }

FermionOperator FermionOperator::operator*(const FermionOperator& o) const {
  FermionOperator f;
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      if (a.coefficient * b.coefficient == 0.0) continue;
      FermionTerm t{a.coefficient * b.coefficient, a.ops};
      t.ops.insert(t.ops.end(), b.ops.begin(), b.ops.end());
      f.terms_.push_back(std::move(t));
    }
  }
  return f;
}

FermionOperator FermionOperator::operator*(double s) const {
  FermionOperator f = *this;
  for (auto& t : f.terms_) t.coefficient *= s;
  return f;
}

Eigen::MatrixXd FermionOperator::dense() const {
  std::array<Eigen::MatrixXd, 2 * kSpinOrbitals> ladders;
  for (std::size_t m = 0; m < kSpinOrbitals; ++m) {
    ladders[2 * m] = ladder_matrix(m, false);
    ladders[2 * m + 1] = ladder_matrix(m, true);
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(kFockDim, kFockDim);
  for (const auto& t : terms_) {
    Eigen::MatrixXd prod = Eigen::MatrixXd::Identity(kFockDim, kFockDim) * t.coefficient;
    for (const auto& op : t.ops) prod = prod * ladders[2 * op.mode + (op.creation ? 1 : 0)];
    out += prod;
  }
  return out;
}

}  // namespace pgpr
