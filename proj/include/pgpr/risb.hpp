#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "pgpr/embedding.hpp"

namespace pgpr {

/// Band integrals of the semicircular density of states (2/pi) sqrt(1 - e^2)
/// from the lower band edge up to x.
struct DosIntegrals {
  double weight;   // integral of rho
  double kinetic;  // integral of e rho
};
DosIntegrals dos_integrals(double x);

/// Critical interaction of the half-filled Brinkman-Rice transition, 32 / (3 pi).
double critical_u();

struct BathParams {
  double mu;
  double d_hyb;
  double lambda_c;
};

/// Chemical potential fixing the quasiparticle filling at n (zero-temperature
/// occupation of the band R^2 e + lam - mu), then the bath hybridization and
/// level of the embedding Hamiltonian.
BathParams compute_bath_params(double r, double lam, double n);

struct Residual {
  double f1_res = 0.0;
  double f2_res = 0.0;
  double norm() const { return std::max(std::abs(f1_res), std::abs(f2_res)); }
};

/// Ground-state solver for the embedding Hamiltonian. `call` numbers the
/// invocations of one loop so stochastic solvers can derive their streams.
using EhSolver = std::function<EhSolution(const EmbeddingParams&, std::uint64_t call)>;

/// Exact diagonalization.
EhSolver ed_solver();

struct RisbState {
  double r = 1.0;
  double lam = 0.0;
  double d_hyb = 0.0;
  double lambda_c = 0.0;
  double mu = 0.0;
  double n = 0.5;
};

/// (f1 - R sqrt(n(1-n)), f2 - n) for the embedding problem built from (r, lam).
/// Optionally returns the solver output.
Residual residual(double r, double lam, double n, double u, const EhSolver& solver, std::uint64_t call = 0,
                  EhSolution* solution = nullptr);

struct RisbOptions {
  double n = 0.5;
  double tol = 1e-10;
  int max_iter = 100;
  /// Factor applied to every quasi-Newton or fixed-point step.
  double mixing = 1.0;
  /// Solver calls averaged per residual evaluation.
  int repeats = 1;
  /// Convergence is judged on the mean residual norm of the last `window` iterates.
  int window = 1;
  /// Step of the finite-difference initial Jacobian.
  double jacobian_step = 1e-6;
  double r0 = 1.0;
  double lam0 = 0.0;

  /// Settings for stochastic solvers: 3 repeats, half steps, 3-iterate window.
  static RisbOptions noisy(double tol = 5e-3);
};

struct RisbResult {
  RisbState state;
  EhSolution eh;
  double z = 0.0;
  double docc = 0.0;
  double residual_norm = 0.0;
  bool converged = false;
  bool insulating = false;
  int iterations = 0;
  std::size_t solver_calls = 0;
};

/// Two-variable Broyden root search over (R, lam) with a damped fixed-point
/// fallback. R below 1e-6 ends the loop as an insulating solution.
RisbResult solve_self_consistency(double u, const EhSolver& solver, const RisbOptions& options = {});

class InsulatorError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct SelfEnergyPoint {
  double omega;
  double sigma;
};

/// Sigma(w) = -w (1 - Z) / Z + lam / Z with Z = r^2; throws InsulatorError at Z = 0.
std::vector<SelfEnergyPoint> self_energy(double r, double lam, std::span<const double> omega);

}  // namespace pgpr
