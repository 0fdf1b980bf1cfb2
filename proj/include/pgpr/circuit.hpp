#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "pgpr/pauli.hpp"

namespace pgpr {

/// exp(-i angle/2 P).
struct PauliRotation {
  PauliString string;
  double angle;
};

enum class Clifford1 { h, s, s_dagger };

/// Single-qubit Clifford used to rotate X or Y eigenbases onto Z.
struct BasisChange {
  std::size_t qubit;
  Clifford1 kind;
};

struct Cnot {
  std::size_t control;
  std::size_t target;
};

using Gate = std::variant<PauliRotation, BasisChange, Cnot>;
using Circuit = std::vector<Gate>;

/// Qubits touched by the gate, in ascending order.
std::vector<std::size_t> gate_support(const Gate& g);

/// Full 2^n x 2^n unitary of the gate.
Eigen::MatrixXcd gate_unitary(const Gate& g, std::size_t qubit_count);

/// Gates mapping the eigenbasis of `p` onto the computational basis
/// (H for X, S^dagger then H for Y); identity and Z factors need none.
Circuit measurement_basis_change(const PauliString& p);

/// Inverse of a basis-change sequence.
Circuit inverted(const Circuit& basis_change);

/// exp(-i angle/2 P) compiled to basis changes, a CNOT ladder and one Z
/// rotation. Single-qubit strings pass through unchanged.
Circuit compile_rotation(const PauliRotation& r);

/// Noiseless action on a state vector.
Eigen::VectorXcd apply(const Circuit& circuit, Eigen::VectorXcd state);

/// One gate per line: "rot <string> <angle>", "h <q>", "s <q>", "sdg <q>",
/// "cx <control> <target>".
std::string dump_circuit(const Circuit& circuit);

}  // namespace pgpr
