#pragma once

#include <complex>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace pgpr {

using Complex = std::complex<double>;

/// Dense realizations are limited to this many qubits (16x16 matrices).
inline constexpr std::size_t kMaxDenseQubits = 4;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_label(Pauli p);
Pauli pauli_from_label(char c);

/// Tensor product of single-qubit Pauli operators. Factor k acts on qubit k;
/// the text form lists qubit 0 first ("XZ" is X on qubit 0, Z on qubit 1).
class PauliString {
 public:
  explicit PauliString(std::vector<Pauli> factors);

  static PauliString identity(std::size_t qubit_count);
  static PauliString parse(std::string_view labels);
  /// A single non-identity factor on `qubit` of an n-qubit register.
  static PauliString single(std::size_t qubit_count, std::size_t qubit, Pauli p);

  std::size_t qubit_count() const noexcept { return factors_.size(); }
  Pauli operator[](std::size_t qubit) const { return factors_.at(qubit); }
  std::span<const Pauli> factors() const noexcept { return factors_; }

  bool is_identity() const noexcept;
  /// Qubits carrying a non-identity factor.
  std::vector<std::size_t> support() const;
  std::string to_string() const;

  friend bool operator==(const PauliString&, const PauliString&) = default;
  /// Lexicographic on factor labels (I < X < Y < Z), qubit 0 most significant.
  friend std::strong_ordering operator<=>(const PauliString& a,
                                          const PauliString& b);

 private:
  std::vector<Pauli> factors_;
};

struct PauliProduct {
  Complex phase;
  PauliString product;
};

/// a * b = phase * product. Throws std::invalid_argument on mismatched sizes.
PauliProduct multiply(const PauliString& a, const PauliString& b);

struct PauliTerm {
  double coefficient;
  PauliString string;

  friend bool operator==(const PauliTerm&, const PauliTerm&) = default;
};

/// Real-weighted sum of Pauli strings, kept in canonical form: terms sorted by
/// string, duplicates merged, exact zeros dropped. Hermitian by construction.
class PauliSum {
 public:
  explicit PauliSum(std::size_t qubit_count);
  PauliSum(std::size_t qubit_count, std::vector<PauliTerm> terms);

  /// Parses one "c * P0P1..." term per line. Blank lines and lines starting
  /// with '#' are skipped.
  static PauliSum parse(std::string_view text);
  std::string to_text() const;

  std::size_t qubit_count() const noexcept { return qubit_count_; }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  /// Coefficient of `s`, zero when absent.
  double coefficient(const PauliString& s) const;
  double identity_coefficient() const;
  /// Sum of |w_h|; bounds |<P>| for any state.
  double l1_norm() const;

  PauliSum operator+(const PauliSum& other) const;
  PauliSum operator*(double scale) const;

  friend bool operator==(const PauliSum&, const PauliSum&) = default;

 private:
  std::size_t qubit_count_;
  std::vector<PauliTerm> terms_;
};

Eigen::MatrixXcd matrix(const PauliString& p);
Eigen::MatrixXcd matrix(const PauliSum& p);

/// Hermitian matrix -> real-weighted Pauli sum. Coefficients with magnitude
/// below `drop_below` are discarded. Throws if the matrix is not Hermitian.
PauliSum pauli_decompose(const Eigen::MatrixXcd& m, double drop_below = 1e-14);

/// <psi|p|psi> for a product state psi = psi_0 (x) psi_1 (x) ..., evaluated
/// factor by factor without forming the 2^n vector.
double expectation_product_state(const PauliSum& p,
                                 std::span<const Eigen::Vector2cd> state);

}  // namespace pgpr
