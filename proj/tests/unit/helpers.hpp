#pragma once

#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pgpr/ansatz.hpp"
#include "pgpr/embedding.hpp"
#include "pgpr/pauli.hpp"

namespace test {

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline pgpr::ThetaPoint random_theta(std::mt19937_64& g) {
  return {uniform(g, -pgpr::kPi, pgpr::kPi), uniform(g, -pgpr::kPi, pgpr::kPi)};
}

inline pgpr::PauliString random_string(std::mt19937_64& g, std::size_t n) {
  std::string s;
  for (std::size_t k = 0; k < n; ++k) s += "IXYZ"[std::uniform_int_distribution<int>(0, 3)(g)];
  return pgpr::PauliString::parse(s);
}

inline pgpr::EmbeddingParams random_params(std::mt19937_64& g) {
  return {uniform(g, 0.0, 4.0), uniform(g, 0.2, 0.8) * (uniform(g, 0, 1) < 0.5 ? -1 : 1), uniform(g, -0.5, 0.5)};
}

/// <psi|m|psi> for a normalized state.
inline double dense_expectation(const Eigen::VectorXcd& psi, const Eigen::MatrixXcd& m) {
  return (psi.adjoint() * m * psi)(0, 0).real();
}

/// Numeric CSV with one header line; returns rows of doubles.
inline std::vector<std::vector<double>> read_csv(const std::string& name) {
  std::ifstream f(std::string(PGPR_GOLDEN_DIR) + "/" + name);
  if (!f) throw std::runtime_error("missing golden file " + name);
  std::string line;
  std::getline(f, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

inline std::string read_text(const std::string& name) {
  std::ifstream f(std::string(PGPR_GOLDEN_DIR) + "/" + name);
  if (!f) throw std::runtime_error("missing golden file " + name);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace test
