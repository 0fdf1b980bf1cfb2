#include <cmath>
#include <complex>

#include <fmt/format.h>

#include "pgpr/optimizers.hpp"

namespace pgpr {

double Trig1d::operator()(double x) const {
  return a0 + a1 * std::cos(x) + b1 * std::sin(x) + a2 * std::cos(2 * x) + b2 * std::sin(2 * x);
}

double Trig1d::derivative(double x) const {
  return -a1 * std::sin(x) + b1 * std::cos(x) - 2 * a2 * std::sin(2 * x) + 2 * b2 * std::cos(2 * x);
}

double Trig1d::second_derivative(double x) const {
  return -a1 * std::cos(x) - b1 * std::sin(x) - 4 * a2 * std::cos(2 * x) - 4 * b2 * std::sin(2 * x);
}

Trig1d trig_from_powers(const std::array<double, kBasisOrder + 1>& c) {
  // Five equispaced nodes determine a degree-2 trigonometric polynomial exactly.
  constexpr int n = 5;
  std::array<double, n> f{};
  for (int k = 0; k < n; ++k) {
    const auto p = half_angle_powers(2.0 * kPi * k / n);
    for (int i = 0; i <= kBasisOrder; ++i) f[k] += c[i] * p[i];
  }
  Trig1d t;
  for (int k = 0; k < n; ++k) {
    const double x = 2.0 * kPi * k / n;
    t.a0 += f[k] / n;
    t.a1 += 2.0 * f[k] * std::cos(x) / n;
    t.b1 += 2.0 * f[k] * std::sin(x) / n;
    t.a2 += 2.0 * f[k] * std::cos(2 * x) / n;
    t.b2 += 2.0 * f[k] * std::sin(2 * x) / n;
  }
  return t;
}

std::array<double, kBasisOrder + 1> fit_trig1d(const std::array<double, 5>& angles,
                                               const std::array<double, 5>& values) {
  Eigen::MatrixXd v(5, 5);
  Eigen::VectorXd y(5);
  for (int k = 0; k < 5; ++k) {
    const auto p = half_angle_powers(angles[k]);
    for (int i = 0; i < 5; ++i) v(k, i) = p[i];
    y(k) = values[k];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(v, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s(4) < 1e-10 * s(0)) {
    throw SingularFitError(fmt::format("1-D fit is singular (condition {:.3e})", s(0) / s(4)));
  }
  const Eigen::VectorXd c = svd.solve(y);
  return {c(0), c(1), c(2), c(3), c(4)};
}

double minimize_trig1d(const Trig1d& f, double current) {
  using C = std::complex<double>;
  // z^2 f'(x) with z = e^{ix}, highest power first.
  std::array<C, 5> p{C(f.b2, f.a2), 0.5 * C(f.b1, f.a1), C(0.0), 0.5 * C(f.b1, -f.a1), C(f.b2, -f.a2)};
  double scale = 0.0;
  for (const auto& c : p) scale = std::max(scale, std::abs(c));
  std::vector<double> candidates{current};
  if (scale > 1e-14 * std::max(1.0, std::abs(f.a0))) {
    std::size_t lead = 0;
    while (lead < p.size() && std::abs(p[lead]) <= 1e-14 * scale) ++lead;
    std::size_t last = p.size() - 1;
    while (last > lead && std::abs(p[last]) <= 1e-14 * scale) --last;  // roots at z = 0 carry no angle
    const int degree = static_cast<int>(last - lead);
    if (degree > 0) {
      Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(degree, degree);
      for (int k = 0; k < degree; ++k) companion(0, k) = -p[lead + 1 + k] / p[lead];
      for (int k = 1; k < degree; ++k) companion(k, k - 1) = 1.0;
      Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
      for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
        double x = std::arg(es.eigenvalues()(k));
        for (int it = 0; it < 4; ++it) {
          const double h = f.second_derivative(x);
          if (std::abs(h) < 1e-300) break;
          x -= f.derivative(x) / h;
        }
        candidates.push_back(wrap_angle(x));
      }
    }
  }
  double best = current, f_best = f(current);
  const double tol = 1e-12 * std::max(1.0, std::abs(f_best));
  for (double x : candidates) {
    const double fx = f(x);
    if (fx < f_best - tol) {
      best = x;
      f_best = fx;
    }
  }
  return best;
}

Sequential1dOptions Sequential1dOptions::with_spacing(double s) {
  if (!(s > 0.0 && 2.0 * s < kPi + 1e-12)) throw std::invalid_argument("seq1d spacing must lie in (0, pi/2]");
  Sequential1dOptions o;
  o.offsets = {-2.0 * s, -s, s, 2.0 * s};
  return o;
}

OptimizationResult sequential_1d(Objective& obj, const ThetaPoint& theta0, int iterations,
                                 std::optional<double> initial_value, const Sequential1dOptions& options) {
  if (iterations < 1) throw std::invalid_argument("sequential_1d needs at least one iteration");
  theta0.validate();
  const std::size_t start_evals = obj.eval_count();
  std::array<double, 2> theta{theta0.theta1, theta0.theta2};
  double current = initial_value ? *initial_value : obj.evaluate(theta0).value;

  auto sample = [&](int param, const std::array<double, 4>& offsets) {
    std::array<double, 5> angles{theta[param]}, values{current};
    for (int k = 0; k < 4; ++k) {
      auto probe = theta;
      probe[param] = wrap_angle(theta[param] + offsets[k]);
      angles[k + 1] = probe[param];
      values[k + 1] = obj.evaluate({probe[0], probe[1]}).value;
    }
    return fit_trig1d(angles, values);
  };

  for (int it = 0; it < iterations; ++it) {
    for (int param = 0; param < 2; ++param) {
      std::array<double, kBasisOrder + 1> c;
      try {
        c = sample(param, options.offsets);
      } catch (const SingularFitError&) {
        c = sample(param, options.fallback_offsets);
      }
      const Trig1d f = trig_from_powers(c);
      theta[param] = minimize_trig1d(f, theta[param]);
      current = f(theta[param]);
    }
  }

  OptimizationResult r;
  r.theta_star = {theta[0], theta[1]};
  r.value = current;
  r.evals_used = obj.eval_count() - start_evals;
  r.trace.assign(obj.trace().begin() + static_cast<std::ptrdiff_t>(start_evals), obj.trace().end());
  return r;
}

}  // namespace pgpr
