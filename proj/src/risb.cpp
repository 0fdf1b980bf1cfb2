#include "pgpr/risb.hpp"

#include <cmath>
#include <deque>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

namespace pgpr {

DosIntegrals dos_integrals(double x) {
  if (!(x >= -1.0 && x <= 1.0)) throw std::domain_error(fmt::format("{} lies outside the band [-1, 1]", x));
  const double root = std::sqrt(1.0 - x * x);
  return {0.5 + (x * root + std::asin(x)) / std::numbers::pi,
          -(2.0 / (3.0 * std::numbers::pi)) * root * root * root};
}

double critical_u() { return 32.0 / (3.0 * std::numbers::pi); }

BathParams compute_bath_params(double r, double lam, double n) {
  if (!(n > 0.0 && n < 1.0)) throw std::invalid_argument("filling must lie in (0, 1)");
  if (r == 0.0 || !std::isfinite(r) || !std::isfinite(lam)) throw std::invalid_argument("R must be finite and nonzero");
  const double z = r * r;
  auto occupation = [&](double mu) { return dos_integrals(std::clamp((mu - lam) / z, -1.0, 1.0)).weight; };
  double lo = lam - z - 1.0, hi = lam + z + 1.0;
  if (!(occupation(lo) <= n && occupation(hi) >= n)) throw std::runtime_error("chemical potential is not bracketed");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    (occupation(mid) < n ? lo : hi) = mid;
  }
  BathParams b;
  b.mu = 0.5 * (lo + hi);
  const double x_fermi = std::clamp((b.mu - lam) / z, -1.0, 1.0);
  const double spread = std::sqrt(n * (1.0 - n));
  b.d_hyb = r * dos_integrals(x_fermi).kinetic / spread;
  b.lambda_c = -lam - 2.0 * b.d_hyb * r * (0.5 - n) / spread;
  return b;
}

EhSolver ed_solver() {
  return [](const EmbeddingParams& p, std::uint64_t) { return exact_ground_state(p); };
}

Residual residual(double r, double lam, double n, double u, const EhSolver& solver, std::uint64_t call,
                  EhSolution* solution) {
  const BathParams b = compute_bath_params(r, lam, n);
  const EhSolution s = solver(EmbeddingParams{u, b.d_hyb, b.lambda_c}, call);
  if (solution != nullptr) *solution = s;
  return {s.f1 - r * std::sqrt(n * (1.0 - n)), s.f2 - n};
}

RisbOptions RisbOptions::noisy(double tol) {
  RisbOptions o;
  o.tol = tol;
  o.repeats = 3;
  o.mixing = 0.5;
  o.window = 3;
  o.jacobian_step = 0.05;
  o.max_iter = 60;
  return o;
}

namespace {

constexpr double kInsulatingR = 1e-6;

struct Evaluated {
  Eigen::Vector2d f;
  EhSolution eh;
};

}  // namespace

RisbResult solve_self_consistency(double u, const EhSolver& solver, const RisbOptions& o) {
  if (!(o.tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (o.repeats < 1 || o.window < 1 || o.max_iter < 1) throw std::invalid_argument("bad loop settings");
  const double spread = std::sqrt(o.n * (1.0 - o.n));
  RisbResult result;
  std::uint64_t call = 0;

  auto evaluate = [&](const Eigen::Vector2d& x) {
    Evaluated e{Eigen::Vector2d::Zero(), EhSolution{}};
    for (int k = 0; k < o.repeats; ++k) {
      EhSolution s;
      const Residual res = residual(x(0), x(1), o.n, u, solver, call++, &s);
      e.f += Eigen::Vector2d(res.f1_res, res.f2_res) / o.repeats;
      e.eh.energy += s.energy / o.repeats;
      e.eh.docc += s.docc / o.repeats;
      e.eh.f1 += s.f1 / o.repeats;
      e.eh.f2 += s.f2 / o.repeats;
    }
    return e;
  };
  auto fixed_point_step = [&](const Eigen::Vector2d& f) { return Eigen::Vector2d(f(0) / spread, f(1)); };

  Eigen::Vector2d x(o.r0, o.lam0);
  Evaluated cur = evaluate(x);

  Eigen::Matrix2d jac;
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector2d xh = x;
    xh(k) += (k == 0 && x(0) + o.jacobian_step > 1.5) ? -o.jacobian_step : o.jacobian_step;
    jac.col(k) = (evaluate(xh).f - cur.f) / (xh(k) - x(k));
  }

  std::deque<double> recent{cur.f.lpNorm<Eigen::Infinity>()};
  auto window_mean = [&] { return std::accumulate(recent.begin(), recent.end(), 0.0) / recent.size(); };
  auto done = [&] { return static_cast<int>(recent.size()) >= o.window && window_mean() < o.tol; };

  int it = 0;
  while (!done() && it < o.max_iter) {
    ++it;
    Eigen::Vector2d step;
    const Eigen::FullPivLU<Eigen::Matrix2d> lu(jac);
    if (lu.isInvertible() && std::abs(jac.determinant()) > 1e-14) {
      step = -lu.solve(cur.f);
    } else {
      step = fixed_point_step(cur.f);
    }
    if (!step.allFinite() || step.norm() > 0.5) step = fixed_point_step(cur.f);
    step *= o.mixing;

    Eigen::Vector2d next = x + step;
    if (next(0) < kInsulatingR) {
      next(0) = 0.5 * x(0);  // halve instead of crossing R = 0
      step = next - x;
    }
    if (next(0) < kInsulatingR) {
      x = next;
      result.insulating = true;
      break;
    }
    Evaluated trial = evaluate(next);
    // In the deterministic case reject steps that blow up the residual and
    // fall back to a damped fixed-point move.
    if (o.repeats == 1 && trial.f.lpNorm<Eigen::Infinity>() > 2.0 * cur.f.lpNorm<Eigen::Infinity>()) {
      Eigen::Vector2d fp = x + o.mixing * 0.5 * fixed_point_step(cur.f);
      fp(0) = std::max(fp(0), 0.5 * x(0));
      step = fp - x;
      next = fp;
      trial = evaluate(next);
    }
    const Eigen::Vector2d df = trial.f - cur.f;
    const double ss = step.squaredNorm();
    if (ss > 0.0) jac += ((df - jac * step) * step.transpose()) / ss;
    x = next;
    cur = trial;
    recent.push_back(cur.f.lpNorm<Eigen::Infinity>());
    while (static_cast<int>(recent.size()) > o.window) recent.pop_front();
  }

  result.iterations = it;
  result.solver_calls = call;
  result.insulating = result.insulating || x(0) < kInsulatingR;
  result.converged = !result.insulating && done();
  result.residual_norm = result.insulating ? cur.f.lpNorm<Eigen::Infinity>() : window_mean();
  result.state.r = x(0);
  result.state.lam = x(1);
  result.state.n = o.n;
  if (!result.insulating) {
    const BathParams b = compute_bath_params(x(0), x(1), o.n);
    result.state.mu = b.mu;
    result.state.d_hyb = b.d_hyb;
    result.state.lambda_c = b.lambda_c;
  }
  result.eh = cur.eh;
  result.z = result.insulating ? 0.0 : x(0) * x(0);
  result.docc = cur.eh.docc;
  return result;
}

std::vector<SelfEnergyPoint> self_energy(double r, double lam, std::span<const double> omega) {
  const double z = r * r;
  if (!(z > 0.0)) throw InsulatorError("self-energy diverges at Z = 0");
  std::vector<SelfEnergyPoint> out;
  out.reserve(omega.size());
  for (double w : omega) out.push_back({w, -w * (1.0 - z) / z + lam / z});
  return out;
}

}  // namespace pgpr
