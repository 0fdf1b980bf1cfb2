#include <cmath>
#include <optional>
#include <tuple>

#include "pgpr/optimizers.hpp"

namespace pgpr {

namespace {

ThetaPoint wrapped(const Eigen::Vector2d& x) { return {wrap_angle(x(0)), wrap_angle(x(1))}; }

using Vec5 = Eigen::Matrix<double, 5, 1>;

// (1, cos x, sin x, cos 2x, sin 2x) and its first two derivatives.
struct Harmonics {
  Vec5 v, d, dd;

  explicit Harmonics(double x) {
    const double c = std::cos(x), s = std::sin(x), c2 = std::cos(2 * x), s2 = std::sin(2 * x);
    v << 1, c, s, c2, s2;
    d << 0, -s, c, -2 * s2, 2 * c2;
    dd << 0, -c, -s, -4 * c2, -4 * s2;
  }
};

// The surrogate mean rewritten as h(theta1)^T C h(theta2); agrees with
// SurrogateModel::mean to rounding and is much cheaper to differentiate.
class TrigSurface {
 public:
  explicit TrigSurface(const SurrogateModel& m) {
    Eigen::Matrix<double, 5, 5> t;  // row i: harmonics of cos^i(x/2) sin^(4-i)(x/2)
    for (int i = 0; i <= kBasisOrder; ++i) {
      std::array<double, kBasisOrder + 1> unit{};
      unit[i] = 1.0;
      const Trig1d f = trig_from_powers(unit);
      t.row(i) << f.a0, f.a1, f.b1, f.a2, f.b2;
    }
    Eigen::Matrix<double, 5, 5> xi;
    for (int i = 0; i <= kBasisOrder; ++i)
      for (int j = 0; j <= kBasisOrder; ++j) xi(i, j) = m.xi_bar()(basis_index(i, j));
    c_ = t.transpose() * xi * t;
  }

  double value(const ThetaPoint& x) const { return Harmonics(x.theta1).v.dot(c_ * Harmonics(x.theta2).v); }

  void derivatives(const ThetaPoint& x, Eigen::Vector2d& g, Eigen::Matrix2d& h) const {
    const Harmonics a(x.theta1), b(x.theta2);
    const Vec5 cb = c_ * b.v, cdb = c_ * b.d;
    g << a.d.dot(cb), a.v.dot(cdb);
    h(0, 0) = a.dd.dot(cb);
    h(1, 1) = a.v.dot(c_ * b.dd);
    h(0, 1) = h(1, 0) = a.d.dot(cdb);
  }

 private:
  Eigen::Matrix<double, 5, 5> c_;
};

// Damped Newton with a gradient fallback and backtracking; the landscape is
// 2 pi periodic, so iterates are wrapped back into the box.
TracePoint descend(const TrigSurface& m, ThetaPoint start, const SurrogateSearchOptions& o) {
  ThetaPoint x = start;
  double fx = m.value(x);
  Eigen::Vector2d g;
  Eigen::Matrix2d h;
  for (int it = 0; it < o.max_newton_steps; ++it) {
    m.derivatives(x, g, h);
    if (g.lpNorm<Eigen::Infinity>() < o.gradient_tolerance) break;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(h);
    Eigen::Vector2d step;
    if (es.eigenvalues().minCoeff() > 1e-10 * std::max(1.0, es.eigenvalues().maxCoeff())) {
      step = -h.ldlt().solve(g);
    } else {
      step = -g / std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    const double max_step = 0.5;
    if (step.norm() > max_step) step *= max_step / step.norm();

    double alpha = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls, alpha *= 0.5) {
      const ThetaPoint trial = wrapped(Eigen::Vector2d(x.theta1, x.theta2) + alpha * step);
      const double ft = m.value(trial);
      if (ft < fx) {
        x = trial;
        fx = ft;
        moved = true;
        break;
      }
    }
    if (!moved || alpha * step.norm() < 1e-15) break;
  }
  return {x, fx};
}

// Equal minima: nearest to the reference point (0, 0) first, then lexicographic.
std::tuple<double, double, double> tie_key(const ThetaPoint& t) {
  const double r2 = t.theta1 * t.theta1 + t.theta2 * t.theta2;
  return {std::round(r2 * 1e9) / 1e9, t.theta1, t.theta2};
}

}  // namespace

OptimizationResult minimize_surrogate(const SurrogateModel& model, const SurrogateSearchOptions& options) {
  if (options.grid < 2) throw std::invalid_argument("seed grid needs at least 2 points per axis");
  const int half = options.grid / 2;
  const TrigSurface surface(model);
  std::optional<TracePoint> best;
  OptimizationResult result;
  for (int a = 0; a < options.grid; ++a) {
    for (int b = 0; b < options.grid; ++b) {
      const ThetaPoint seed{kPi * (a - half) / half, kPi * (b - half) / half};
      const TracePoint local = descend(surface, seed, options);
      result.trace.push_back(local);
      if (!best) {
        best = local;
        continue;
      }
      const double scale = 1e-12 * std::max(1.0, std::abs(best->value));
      const bool lower = local.value < best->value - scale;
      const bool tie = std::abs(local.value - best->value) <= scale;
      if (lower || (tie && tie_key(local.theta) < tie_key(best->theta))) {
        best = local;
      }
    }
  }
  result.theta_star = best->theta;
  result.value = model.mean(best->theta);
  result.evals_used = 0;
  return result;
}

}  // namespace pgpr
