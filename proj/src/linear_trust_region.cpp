#include <algorithm>
#include <cmath>

#include "pgpr/optimizers.hpp"

namespace pgpr {

namespace {

struct Vertex {
  Eigen::Vector2d x;
  double f;
};

Eigen::Vector2d clamp_box(Eigen::Vector2d x) { return x.cwiseMax(-kPi).cwiseMin(kPi); }

// Step of length `radius` from `from` along `dir`, reflected if it would leave the box.
Eigen::Vector2d box_step(const Eigen::Vector2d& from, Eigen::Vector2d dir, double radius) {
  Eigen::Vector2d to = from + radius * dir;
  for (int k = 0; k < 2; ++k)
    if (std::abs(to(k)) > kPi) to(k) = from(k) - radius * dir(k);
  return clamp_box(to);
}

}  // namespace

OptimizationResult derivative_free_baseline(Objective& obj, const ThetaPoint& theta0, std::size_t max_evals,
                                            const TrustRegionOptions& options) {
  if (max_evals < 3) throw std::invalid_argument("the baseline needs at least 3 evaluations");
  theta0.validate();
  const std::size_t start_evals = obj.eval_count();
  std::size_t used = 0;
  auto eval = [&](const Eigen::Vector2d& x) {
    ++used;
    return Vertex{x, obj.evaluate({x(0), x(1)}).value};
  };

  double radius = options.initial_radius;
  const Eigen::Vector2d x0(theta0.theta1, theta0.theta2);
  std::array<Vertex, 3> simplex{eval(x0), Vertex{}, Vertex{}};
  simplex[1] = eval(box_step(x0, Eigen::Vector2d::UnitX(), radius));
  simplex[2] = eval(box_step(x0, Eigen::Vector2d::UnitY(), radius));

  auto order = [&] {
    std::stable_sort(simplex.begin(), simplex.end(), [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
  };

  while (used < max_evals) {
    order();
    const Vertex& best = simplex[0];
    Eigen::Matrix2d dx;
    dx.row(0) = (simplex[1].x - best.x).transpose();
    dx.row(1) = (simplex[2].x - best.x).transpose();
    const Eigen::Vector2d df(simplex[1].f - best.f, simplex[2].f - best.f);

    // Geometry step: when the simplex is flat or much larger than the trust
    // region, pull its farthest vertex back to distance `radius`.
    const double d1 = dx.row(0).norm(), d2 = dx.row(1).norm();
    const double area = std::abs(dx.determinant());
    const int far = d1 >= d2 ? 1 : 2;
    const double far_dist = std::max(d1, d2);
    if (area < 0.1 * d1 * d2 || far_dist > 2.0 * radius) {
      Eigen::Vector2d dir = simplex[far].x - best.x;
      const Eigen::Vector2d other = simplex[3 - far].x - best.x;
      if (area < 0.1 * d1 * d2) dir = Eigen::Vector2d(-other(1), other(0));  // orthogonal to the other edge
      dir.normalize();
      simplex[far] = eval(box_step(best.x, dir, radius));
      continue;
    }

    const Eigen::Vector2d g = dx.partialPivLu().solve(df);
    if (g.norm() < 1e-14) {
      radius = std::max(options.final_radius, radius * options.shrink);
      simplex[2] = eval(box_step(best.x, Eigen::Vector2d(1.0, 1.0).normalized(), radius));
      continue;
    }
    const Vertex trial = eval(box_step(best.x, -g.normalized(), radius));
    if (trial.f < best.f) {
      simplex[2] = trial;
    } else {
      radius = std::max(options.final_radius, radius * options.shrink);
      if (trial.f < simplex[2].f) simplex[2] = trial;
    }
  }

  order();
  OptimizationResult r;
  r.theta_star = {simplex[0].x(0), simplex[0].x(1)};
  r.value = simplex[0].f;
  r.evals_used = obj.eval_count() - start_evals;
  r.trace.assign(obj.trace().begin() + static_cast<std::ptrdiff_t>(start_evals), obj.trace().end());
  return r;
}

}  // namespace pgpr
