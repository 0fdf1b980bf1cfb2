#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pgpr/ansatz.hpp"
#include "pgpr/surrogate.hpp"

namespace pgpr {

struct Evaluation {
  double value = 0.0;
  double sigma = 0.0;
};

struct TracePoint {
  ThetaPoint theta;
  double value = 0.0;
};

class BudgetExceededError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Noisy cost function with exact evaluation accounting. The callback receives
/// the zero-based index of the evaluation so it can derive a per-call stream.
class Objective {
 public:
  using Fn = std::function<Evaluation(const ThetaPoint&, std::size_t index)>;

  explicit Objective(Fn fn, std::optional<std::size_t> budget = std::nullopt);

  Evaluation evaluate(const ThetaPoint& theta);
  std::size_t eval_count() const noexcept { return trace_.size(); }
  std::optional<std::size_t> budget() const noexcept { return budget_; }
  const std::vector<TracePoint>& trace() const noexcept { return trace_; }

 private:
  Fn fn_;
  std::optional<std::size_t> budget_;
  std::vector<TracePoint> trace_;
};

struct OptimizationResult {
  ThetaPoint theta_star;
  double value = 0.0;
  std::size_t evals_used = 0;
  std::vector<TracePoint> trace;
};

struct SurrogateSearchOptions {
  int grid = 20;
  int max_newton_steps = 100;
  double gradient_tolerance = 1e-13;
};

/// Multi-start Newton descent on the fitted mean from a grid x grid seed
/// lattice over [-pi, pi)^2. Charges no objective evaluations. Minima whose
/// values agree to 1e-12 are ordered by distance from (0, 0), then (theta1, theta2).
OptimizationResult minimize_surrogate(const SurrogateModel& model, const SurrogateSearchOptions& options = {});

class SingularFitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// f(x) = a0 + a1 cos x + b1 sin x + a2 cos 2x + b2 sin 2x, the Fourier form of
/// sum_i c_i cos^i(x/2) sin^(4-i)(x/2).
struct Trig1d {
  double a0 = 0, a1 = 0, b1 = 0, a2 = 0, b2 = 0;

  double operator()(double x) const;
  double derivative(double x) const;
  double second_derivative(double x) const;
};

/// Converts the half-angle power coefficients c_0..c_4 to Fourier form.
Trig1d trig_from_powers(const std::array<double, kBasisOrder + 1>& c);

/// Fits the five power coefficients through five (angle, value) samples.
/// Throws SingularFitError when the angles are not distinct modulo 2 pi.
std::array<double, kBasisOrder + 1> fit_trig1d(const std::array<double, 5>& angles,
                                               const std::array<double, 5>& values);

/// Global minimizer on [-pi, pi] from the roots of f' (companion matrix),
/// polished by Newton. Keeps `current` unless another point is lower by
/// more than 1e-12 relative.
double minimize_trig1d(const Trig1d& f, double current);

struct Sequential1dOptions {
  /// Sample offsets {-2s, -s, s, 2s}. The default s = 2 pi / 5 spreads the
  /// five nodes evenly over the full period.
  std::array<double, 4> offsets{-4.0 * kPi / 5.0, -2.0 * kPi / 5.0, 2.0 * kPi / 5.0, 4.0 * kPi / 5.0};
  std::array<double, 4> fallback_offsets{-3.0 * kPi / 5.0, -3.0 * kPi / 10.0, 3.0 * kPi / 10.0, 3.0 * kPi / 5.0};

  static Sequential1dOptions with_spacing(double s);
};

/// Coordinate-wise minimization. Every parameter update evaluates the four
/// offsets around the current angle and reuses the current value: the
/// supplied `initial_value` for the first update, then the fitted minimum of
/// the previous one. Without `initial_value` one extra evaluation is spent.
/// The reported value is the last fitted minimum.
OptimizationResult sequential_1d(Objective& obj, const ThetaPoint& theta0, int iterations,
                                 std::optional<double> initial_value = std::nullopt,
                                 const Sequential1dOptions& options = {});

struct TrustRegionOptions {
  double initial_radius = 0.8;
  double final_radius = 1e-4;
  double shrink = 0.5;
};

/// Linear-model trust-region search in the style of COBYLA: a simplex of three
/// points defines a linear model, each iteration spends exactly one
/// evaluation, the incumbent is never lost and the run stops at max_evals.
/// The reported value is the best value seen.
OptimizationResult derivative_free_baseline(Objective& obj, const ThetaPoint& theta0, std::size_t max_evals = 20,
                                            const TrustRegionOptions& options = {});

}  // namespace pgpr
