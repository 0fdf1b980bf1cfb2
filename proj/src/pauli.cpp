#include "pgpr/pauli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

namespace pgpr {

namespace {

constexpr Complex kI{0.0, 1.0};

// Single-qubit product table: p*q = phase * result.
struct SingleProduct {
  Complex phase;
  Pauli result;
};

SingleProduct single_product(Pauli p, Pauli q) {
  if (p == Pauli::I) return {1.0, q};
  if (q == Pauli::I) return {1.0, p};
  if (p == q) return {1.0, Pauli::I};
  // Cyclic X->Y->Z gives +i, anticyclic gives -i.
  const int a = static_cast<int>(p);
  const int b = static_cast<int>(q);
  const int c = 6 - a - b;
  const bool cyclic = (b - a + 3) % 3 == 1;
  return {cyclic ? kI : -kI, static_cast<Pauli>(c)};
}

Eigen::Matrix2cd single_matrix(Pauli p) {
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::I: m << 1, 0, 0, 1; break;
    case Pauli::X: m << 0, 1, 1, 0; break;
    case Pauli::Y: m << 0, -kI, kI, 0; break;
    case Pauli::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

void require_dense(std::size_t n) {
  if (n == 0 || n > kMaxDenseQubits) {
    throw std::invalid_argument(
        fmt::format("dense realization supports 1..{} qubits, got {}", kMaxDenseQubits, n));
  }
}

}  // namespace

char pauli_label(Pauli p) {
  static constexpr char labels[] = {'I', 'X', 'Y', 'Z'};
  return labels[static_cast<int>(p)];
}

Pauli pauli_from_label(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw std::invalid_argument(fmt::format("invalid Pauli label '{}'", c));
  }
}

PauliString::PauliString(std::vector<Pauli> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) throw std::invalid_argument("Pauli string needs at least one qubit");
}

PauliString PauliString::identity(std::size_t qubit_count) {
  return PauliString(std::vector<Pauli>(qubit_count, Pauli::I));
}

PauliString PauliString::parse(std::string_view labels) {
  labels = trim(labels);
  std::vector<Pauli> f;
  f.reserve(labels.size());
  for (char c : labels) f.push_back(pauli_from_label(c));
  return PauliString(std::move(f));
}

PauliString PauliString::single(std::size_t qubit_count, std::size_t qubit, Pauli p) {
  if (qubit >= qubit_count) throw std::invalid_argument("qubit index out of range");
  std::vector<Pauli> f(qubit_count, Pauli::I);
  f[qubit] = p;
  return PauliString(std::move(f));
}

bool PauliString::is_identity() const noexcept {
  return std::all_of(factors_.begin(), factors_.end(), [](Pauli p) { return p == Pauli::I; });
}

std::vector<std::size_t> PauliString::support() const {
  std::vector<std::size_t> s;
  for (std::size_t q = 0; q < factors_.size(); ++q)
    if (factors_[q] != Pauli::I) s.push_back(q);
  return s;
}

std::string PauliString::to_string() const {
  std::string s;
  s.reserve(factors_.size());
  for (Pauli p : factors_) s.push_back(pauli_label(p));
  return s;
}

std::strong_ordering operator<=>(const PauliString& a, const PauliString& b) {
  return std::lexicographical_compare_three_way(a.factors_.begin(), a.factors_.end(),
                                                b.factors_.begin(), b.factors_.end());
}

PauliProduct multiply(const PauliString& a, const PauliString& b) {
  if (a.qubit_count() != b.qubit_count()) {
    throw std::invalid_argument(fmt::format("cannot multiply Pauli strings on {} and {} qubits",
                                            a.qubit_count(), b.qubit_count()));
  }
  Complex phase = 1.0;
  std::vector<Pauli> out(a.qubit_count());
  for (std::size_t q = 0; q < a.qubit_count(); ++q) {
    const auto sp = single_product(a[q], b[q]);
    phase *= sp.phase;
    out[q] = sp.result;
  }
  return {phase, PauliString(std::move(out))};
}

PauliSum::PauliSum(std::size_t qubit_count) : qubit_count_(qubit_count) {
  if (qubit_count == 0) throw std::invalid_argument("Pauli sum needs at least one qubit");
}

PauliSum::PauliSum(std::size_t qubit_count, std::vector<PauliTerm> terms)
    : qubit_count_(qubit_count) {
  if (qubit_count == 0) throw std::invalid_argument("Pauli sum needs at least one qubit");
  std::map<PauliString, double> merged;
  for (auto& t : terms) {
    if (t.string.qubit_count() != qubit_count) {
      throw std::invalid_argument(fmt::format("term {} does not act on {} qubits",
                                              t.string.to_string(), qubit_count));
    }
    if (!std::isfinite(t.coefficient)) throw std::invalid_argument("non-finite Pauli coefficient");
    merged[t.string] += t.coefficient;
  }
  terms_.reserve(merged.size());
  for (auto& [s, c] : merged)
    if (c != 0.0) terms_.push_back({c, s});
}

PauliSum PauliSum::parse(std::string_view text) {
  std::vector<PauliTerm> terms;
  std::size_t n = 0;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (line.empty() || line.front() == '#') continue;
    const auto star = line.find('*');
    if (star == std::string_view::npos) {
      throw std::invalid_argument(fmt::format("malformed Pauli term '{}'", line));
    }
    const std::string_view num = trim(line.substr(0, star));
    double c = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), c);
    if (ec != std::errc{} || ptr != num.data() + num.size()) {
      throw std::invalid_argument(fmt::format("malformed coefficient in '{}'", line));
    }
    auto s = PauliString::parse(line.substr(star + 1));
    if (n == 0) n = s.qubit_count();
    terms.push_back({c, std::move(s)});
  }
  if (n == 0) throw std::invalid_argument("empty Pauli sum text");
  return PauliSum(n, std::move(terms));
}

std::string PauliSum::to_text() const {
  std::string out;
  for (const auto& t : terms_) out += fmt::format("{:.17g} * {}\n", t.coefficient, t.string.to_string());
  return out;
}

double PauliSum::coefficient(const PauliString& s) const {
  const auto it = std::lower_bound(terms_.begin(), terms_.end(), s,
                                   [](const PauliTerm& t, const PauliString& x) { return t.string < x; });
  return (it != terms_.end() && it->string == s) ? it->coefficient : 0.0;
}

double PauliSum::identity_coefficient() const {
  return coefficient(PauliString::identity(qubit_count_));
}

double PauliSum::l1_norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coefficient);
  return s;
}

PauliSum PauliSum::operator+(const PauliSum& other) const {
  if (other.qubit_count_ != qubit_count_) throw std::invalid_argument("qubit count mismatch");
  auto all = terms_;
  all.insert(all.end(), other.terms_.begin(), other.terms_.end());
  return PauliSum(qubit_count_, std::move(all));
}

PauliSum PauliSum::operator*(double scale) const {
  auto scaled = terms_;
  for (auto& t : scaled) t.coefficient *= scale;
  return PauliSum(qubit_count_, std::move(scaled));
}

Eigen::MatrixXcd matrix(const PauliString& p) {
  require_dense(p.qubit_count());
  // Basis index = sum_q b_q 2^q, so qubit 0 is the rightmost Kronecker factor.
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(1, 1);
  for (std::size_t q = p.qubit_count(); q-- > 0;) {
    const Eigen::Matrix2cd f = single_matrix(p[q]);
    Eigen::MatrixXcd next(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c) next.block<2, 2>(2 * r, 2 * c) = m(r, c) * f;
    m = std::move(next);
  }
  return m;
}

Eigen::MatrixXcd matrix(const PauliSum& p) {
  require_dense(p.qubit_count());
  const Eigen::Index dim = Eigen::Index{1} << p.qubit_count();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& t : p.terms()) m += t.coefficient * matrix(t.string);
  return m;
}

PauliSum pauli_decompose(const Eigen::MatrixXcd& m, double drop_below) {
  const auto dim = m.rows();
  if (dim != m.cols() || dim < 2 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("pauli_decompose needs a square 2^n matrix");
  }
  std::size_t n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  require_dense(n);
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    throw std::invalid_argument("pauli_decompose needs a Hermitian matrix");
  }
  std::vector<PauliTerm> terms;
  const std::size_t count = std::size_t{1} << (2 * n);
  for (std::size_t code = 0; code < count; ++code) {
    std::vector<Pauli> f(n);
    for (std::size_t q = 0; q < n; ++q) f[q] = static_cast<Pauli>((code >> (2 * q)) & 3u);
    PauliString s(std::move(f));
    const double c = (matrix(s) * m).trace().real() / static_cast<double>(dim);
    if (std::abs(c) >= drop_below) terms.push_back({c, std::move(s)});
  }
  return PauliSum(n, std::move(terms));
}

double expectation_product_state(const PauliSum& p, std::span<const Eigen::Vector2cd> state) {
  if (state.size() != p.qubit_count()) {
    throw std::invalid_argument(fmt::format("product state has {} factors for {} qubits",
                                            state.size(), p.qubit_count()));
  }
  // Per-qubit Bloch components <X>, <Y>, <Z> with <I> = 1.
  std::vector<std::array<double, 4>> bloch(state.size());
  for (std::size_t q = 0; q < state.size(); ++q) {
    const auto& v = state[q];
    if (std::abs(v.squaredNorm() - 1.0) > 1e-10) {
      throw std::invalid_argument(fmt::format("factor state on qubit {} is not normalized", q));
    }
    for (int k = 0; k < 4; ++k) {
      bloch[q][k] = (v.adjoint() * single_matrix(static_cast<Pauli>(k)) * v)(0, 0).real();
    }
  }
  double total = 0.0;
  for (const auto& t : p.terms()) {
    double prod = t.coefficient;
    for (std::size_t q = 0; q < state.size(); ++q) prod *= bloch[q][static_cast<int>(t.string[q])];
    total += prod;
  }
  return total;
}

}  // namespace pgpr
