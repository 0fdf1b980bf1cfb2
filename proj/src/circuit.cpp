#include "pgpr/circuit.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace pgpr {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

Eigen::Matrix2cd clifford_matrix(Clifford1 k) {
  const double r = 1.0 / std::sqrt(2.0);
  const Complex i{0.0, 1.0};
  Eigen::Matrix2cd m;
  switch (k) {
    case Clifford1::h: m << r, r, r, -r; break;
    case Clifford1::s: m << 1, 0, 0, i; break;
    case Clifford1::s_dagger: m << 1, 0, 0, -i; break;
  }
  return m;
}

Eigen::MatrixXcd embed_single(const Eigen::Matrix2cd& u, std::size_t qubit, std::size_t n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  const Eigen::Index bit = Eigen::Index{1} << qubit;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const int b = (col & bit) ? 1 : 0;
    const Eigen::Index base = col & ~bit;
    m(base, col) = u(0, b);
    m(base | bit, col) = u(1, b);
  }
  return m;
}

void check_qubit(std::size_t q, std::size_t n) {
  if (q >= n) throw std::invalid_argument(fmt::format("gate qubit {} outside {}-qubit register", q, n));
}

}  // namespace

std::vector<std::size_t> gate_support(const Gate& g) {
  return std::visit(overloaded{
                        [](const PauliRotation& r) { return r.string.support(); },
                        [](const BasisChange& b) { return std::vector<std::size_t>{b.qubit}; },
                        [](const Cnot& c) {
                          return c.control < c.target ? std::vector<std::size_t>{c.control, c.target}
                                                      : std::vector<std::size_t>{c.target, c.control};
                        },
                    },
                    g);
}

Eigen::MatrixXcd gate_unitary(const Gate& g, std::size_t n) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  return std::visit(
      overloaded{
          [&](const PauliRotation& r) -> Eigen::MatrixXcd {
            if (r.string.qubit_count() != n) throw std::invalid_argument("rotation string size mismatch");
            const Complex i{0.0, 1.0};
            return std::cos(0.5 * r.angle) * Eigen::MatrixXcd::Identity(dim, dim) -
                   i * std::sin(0.5 * r.angle) * matrix(r.string);
          },
          [&](const BasisChange& b) -> Eigen::MatrixXcd {
            check_qubit(b.qubit, n);
            return embed_single(clifford_matrix(b.kind), b.qubit, n);
          },
          [&](const Cnot& c) -> Eigen::MatrixXcd {
            check_qubit(c.control, n);
            check_qubit(c.target, n);
            if (c.control == c.target) throw std::invalid_argument("cnot control equals target");
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
            const Eigen::Index cb = Eigen::Index{1} << c.control;
            const Eigen::Index tb = Eigen::Index{1} << c.target;
            for (Eigen::Index col = 0; col < dim; ++col) m((col & cb) ? (col ^ tb) : col, col) = 1.0;
            return m;
          },
      },
      g);
}

Circuit measurement_basis_change(const PauliString& p) {
  Circuit c;
  for (std::size_t q = 0; q < p.qubit_count(); ++q) {
    if (p[q] == Pauli::X) {
      c.emplace_back(BasisChange{q, Clifford1::h});
    } else if (p[q] == Pauli::Y) {
      c.emplace_back(BasisChange{q, Clifford1::s_dagger});
      c.emplace_back(BasisChange{q, Clifford1::h});
    }
  }
  return c;
}

Circuit inverted(const Circuit& basis_change) {
  Circuit out;
  for (auto it = basis_change.rbegin(); it != basis_change.rend(); ++it) {
    const auto* b = std::get_if<BasisChange>(&*it);
    if (b == nullptr) throw std::invalid_argument("inverted() only handles basis changes");
    Clifford1 k = b->kind;
    if (k == Clifford1::s) k = Clifford1::s_dagger;
    else if (k == Clifford1::s_dagger) k = Clifford1::s;
    out.emplace_back(BasisChange{b->qubit, k});
  }
  return out;
}

Circuit compile_rotation(const PauliRotation& r) {
  const auto support = r.string.support();
  if (support.size() <= 1) return {r};
  const std::size_t n = r.string.qubit_count();
  const Circuit to_z = measurement_basis_change(r.string);
  Circuit c = to_z;
  for (std::size_t k = 0; k + 1 < support.size(); ++k) c.emplace_back(Cnot{support[k], support[k + 1]});
  c.emplace_back(PauliRotation{PauliString::single(n, support.back(), Pauli::Z), r.angle});
  for (std::size_t k = support.size() - 1; k-- > 0;) c.emplace_back(Cnot{support[k], support[k + 1]});
  const Circuit back = inverted(to_z);
  c.insert(c.end(), back.begin(), back.end());
  return c;
}

Eigen::VectorXcd apply(const Circuit& circuit, Eigen::VectorXcd state) {
  std::size_t n = 0;
  while ((Eigen::Index{1} << n) < state.size()) ++n;
  for (const auto& g : circuit) state = gate_unitary(g, n) * state;
  return state;
}

std::string dump_circuit(const Circuit& circuit) {
  std::string out;
  for (const auto& g : circuit) {
    out += std::visit(overloaded{
                          [](const PauliRotation& r) {
                            return fmt::format("rot {} {:.17g}\n", r.string.to_string(), r.angle);
                          },
                          [](const BasisChange& b) {
                            const char* name = b.kind == Clifford1::h ? "h" : (b.kind == Clifford1::s ? "s" : "sdg");
                            return fmt::format("{} {}\n", name, b.qubit);
                          },
                          [](const Cnot& c) { return fmt::format("cx {} {}\n", c.control, c.target); },
                      },
                      g);
  }
  return out;
}

}  // namespace pgpr
