// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "pgpr/bench.hpp"
#include "pgpr/config.hpp"
#include "pgpr/pipeline.hpp"
#include "pgpr/risb.hpp"

using namespace pgpr;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double uniform(std::mt19937_64& g, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(g); }

ThetaPoint random_theta(std::mt19937_64& g) { return {uniform(g, -kPi, kPi), uniform(g, -kPi, kPi)}; }

BackendConfig backend_of(NoiseKind kind) {
  BackendConfig b;
  b.kind = kind;
  return b;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// 1. Noiseless mesh data determine the landscape exactly.
Outcome expansion_exactness() {
  std::mt19937_64 g(1001);
  double worst = 0.0;
  for (int draw = 0; draw < 20; ++draw) {
    const EmbeddingParams p{uniform(g, 0.0, 4.0), 0.5, uniform(g, -0.5, 0.5)};
    const auto h = map_to_qubits(p);
    TrainingSet data;
    for (const auto& t : Mesh::standard().points) {
      const double e = statevector_expectation(t, h.sum);
      if (t.theta2 == 0.0) data.add_exact(t, e);
      else data.add_noisy(t, e, 0.2 * p.d_hyb);
    }
    const auto model = fit(data);
    for (int k = 0; k < 100; ++k) {
      const auto t = random_theta(g);
      worst = std::max(worst, std::abs(predict_mean(model, t) - statevector_expectation(t, h.sum)));
    }
  }
  return {worst <= 1e-8, fmt::format("max |mean - oracle| = {:.2e} (limit 1e-8)", worst)};
}

// 2. Boundary points are honoured under every noise backend.
Outcome boundary_imbuing() {
  double mean_err = 0.0, max_var = 0.0;
  int fits = 0;
  for (NoiseKind kind : {NoiseKind::none, NoiseKind::gaussian, NoiseKind::simulator}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      for (double u : {0.0, 1.0, 2.5}) {
        const EmbeddingParams p{u, 0.5, seed % 2 ? 0.2 : 0.0};
        const Backend b(embed(p), backend_of(kind), seed);
        const auto r = mitigated_pipeline(b);
        for (const auto& t : Mesh::standard().points) {
          if (t.theta2 != 0.0) continue;
          mean_err = std::max(mean_err, std::abs(predict_mean(r.models[kEnergy], t) -
                                                 exact_boundary_energy(t.theta1, b.embedding().hamiltonian)));
          max_var = std::max(max_var, predict_variance(r.models[kEnergy], t));
        }
        ++fits;
      }
    }
  }
  return {mean_err <= 1e-12 && max_var <= 1e-12,
          fmt::format("{} fits: max boundary |mean - exact| = {:.2e}, max variance = {:.2e} (limits 1e-12)", fits,
                      mean_err, max_var)};
}

// 3. U = 0 through the default noise model.
Outcome u0_exactness() {
  const EmbeddingParams p{0.0, 0.5, 0.0};
  const BackendConfig b = backend_of(NoiseKind::simulator);
  const Backend backend(embed(p), b, 0);
  const auto r = mitigated_pipeline(backend);
  const double e_err = std::abs(r.estimate.energy + 1.0);

  RunConfig cfg;
  const auto risb = solve_self_consistency(0.0, vqe_solver(Method::gpr, b, point_seed(0, 0.0, 0.0)),
                                           RisbOptions::noisy(cfg.risb_tol));
  const double z_err = std::abs(risb.z - 1.0);
  return {e_err <= 1e-10 && z_err <= 1e-10,
          fmt::format("pipeline |E + 1| = {:.2e} at theta* = ({:.4f}, {:.4f}); RISB |Z - 1| = {:.2e} (limits 1e-10)",
                      e_err, r.optimum.theta_star.theta1, r.optimum.theta_star.theta2, z_err)};
}

// 4. Head-to-head under Gaussian noise.
Outcome head_to_head() {
  const auto start = std::chrono::steady_clock::now();
  const char* names[] = {"E", "docc", "f1", "f2"};
  bool all = true;
  std::string detail;
  for (double u : {0.5, 1.0, 2.0}) {
    const EmbeddingParams p{u, 0.5, 0.0};
    const auto ed = exact_ground_state(p);
    const std::array<double, 4> exact{ed.energy, ed.docc, ed.f1, ed.f2};
    std::map<Method, std::array<double, 4>> err;
    for (Method m : {Method::gpr, Method::seq1d, Method::baseline}) {
      std::array<double, 4> acc{};
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto v = solve_embedding(m, p, backend_of(NoiseKind::gaussian), point_seed(seed, u, 0.0)).estimate;
        const std::array<double, 4> got{v.energy, v.docc, v.f1, v.f2};
        for (int q = 0; q < 4; ++q) acc[q] += std::abs(got[q] - exact[q]) / 100;
      }
      err[m] = acc;
    }
    detail += fmt::format("U={}:", u);
    for (int q = 0; q < 4; ++q) {
      const bool ok = err[Method::gpr][q] < err[Method::seq1d][q] && err[Method::gpr][q] < err[Method::baseline][q];
      all = all && ok;
      detail += fmt::format(" {} {:.3f}/{:.3f}/{:.3f}{}", names[q], err[Method::gpr][q], err[Method::seq1d][q],
                            err[Method::baseline][q], ok ? "" : "!");
    }
    detail += "; ";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  all = all && secs < 300;
  return {all, detail + fmt::format("(gpr/seq1d/baseline mean errors, 100 seeds) {:.1f} s (limit 300 s)", secs)};
}

// 5. Evaluation budgets.
Outcome budgets() {
  const EmbeddingParams p{1.0, 0.5, 0.0};
  const auto b = backend_of(NoiseKind::simulator);
  const auto base = solve_embedding(Method::baseline, p, b, 1);
  const auto seq = solve_embedding(Method::seq1d, p, b, 1);
  const auto gpr = solve_embedding(Method::gpr, p, b, 1);
  const bool ok = base.noisy_evals == 20 && seq.noisy_evals == 160 && gpr.noisy_evals == 90 && gpr.exact_evals == 10;
  return {ok, fmt::format("baseline {} evals, seq1d {} evals over 20 iterations, gpr {} noisy + {} exact",
                          base.noisy_evals, seq.noisy_evals, gpr.noisy_evals, gpr.exact_evals)};
}

// 6. ED-solver loop against the analytic Brinkman-Rice curves.
Outcome risb_oracle() {
  const auto start = std::chrono::steady_clock::now();
  double z_err = 0.0, d_err = 0.0;
  for (int k = 0; k <= 30; ++k) {
    const double u = 0.1 * k;
    RisbOptions o;
    o.tol = 1e-10;
    const auto r = solve_self_consistency(u, ed_solver(), o);
    const double uc = 32.0 / (3.0 * kPi);
    z_err = std::max(z_err, std::abs(r.z - (1.0 - (u / uc) * (u / uc))));
    d_err = std::max(d_err, std::abs(r.docc - (1.0 - u / uc) / 4.0));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {z_err <= 1e-6 && d_err <= 1e-6 && secs < 5,
          fmt::format("31 U points: max |Z - Z_exact| = {:.2e}, max |docc - docc_exact| = {:.2e}, {:.2f} s", z_err,
                      d_err, secs)};
}

// 7. Noisy RISB with the default simulator noise.
Outcome noisy_risb() {
  RunConfig cfg;
  cfg.mode = RunMode::risb_scan;
  cfg.optimizers = {Method::gpr, Method::seq1d};
  cfg.seeds.clear();
  for (std::uint64_t s = 0; s < 20; ++s) cfg.seeds.push_back(s);
  const auto rows = risb_scan(cfg);

  bool ok = true;
  std::string detail;
  for (double u : cfg.u_grid) {
    int conv = 0, n = 0;
    double gpr_err = 0.0, seq_err = 0.0;
    for (const auto& r : rows) {
      if (r.u != u) continue;
      const double e = std::abs(r.result.z - r.z_exact) / 20;
      if (r.solver == Method::gpr) {
        ++n;
        conv += r.result.converged && r.result.residual_norm < cfg.risb_tol;
        gpr_err += e;
      } else {
        seq_err += e;
      }
    }
    const bool conv_ok = conv >= 0.95 * n;
    const bool err_ok = u > 1.0 || (gpr_err <= 0.05 && gpr_err < seq_err);
    ok = ok && conv_ok && err_ok;
    detail += fmt::format("U={}: {}/{} conv, |dZ| {:.3f} vs {:.3f}{}; ", u, conv, n, gpr_err, seq_err,
                          conv_ok && err_ok ? "" : "!");
  }
  return {ok, detail + "(gpr vs seq1d, 20 seeds)"};
}

// 8. Posterior coverage under Gaussian noise.
Outcome coverage() {
  std::mt19937_64 g(808);
  double frac = 0.0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const EmbeddingParams p{uniform(g, 0.0, 3.0), 0.5, 0.0};
    const Backend b(embed(p), backend_of(NoiseKind::gaussian), seed);
    const auto r = mitigated_pipeline(b);
    int inside = 0;
    for (int k = 0; k < 200; ++k) {
      const auto t = random_theta(g);
      const double truth = b.exact(t)[kEnergy];
      const auto& m = r.models[kEnergy];
      inside += std::abs(predict_mean(m, t) - truth) <= 2.0 * std::sqrt(predict_variance(m, t));
    }
    frac += inside / 200.0 / 50.0;
  }
  return {frac >= 0.9, fmt::format("{:.1f}% of 200 test points x 50 seeds inside mean +- 2 sd (limit 90%)", 100 * frac)};
}

// 9. Readout mitigation.
Outcome readout() {
  NoiseModel n = NoiseModel::ideal(100000);
  n.set_symmetric_readout(0.05);
  const auto trials = readout_trials(n, {1.0, 0.5, 0.0}, 20, 909);
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_term;
  std::vector<double> raw, mit;
  for (const auto& t : trials) {
    by_term[t.term].first.push_back(std::abs(t.raw - t.exact));
    by_term[t.term].second.push_back(std::abs(t.mitigated - t.exact));
    raw.push_back(std::abs(t.raw - t.exact));
    mit.push_back(std::abs(t.mitigated - t.exact));
  }
  const double ratio = median(raw) / median(mit);
  std::string detail = fmt::format("median |error| raw {:.2e}, mitigated {:.2e}, ratio {:.1f} (limit 5); per term:",
                                   median(raw), median(mit), ratio);
  for (const auto& [term, e] : by_term) detail += fmt::format(" {} {:.1f}", term, median(e.first) / median(e.second));
  return {ratio >= 5.0, detail};
}

std::map<std::string, std::string> csv_files(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".csv") continue;
    std::ifstream f(e.path(), std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    out[e.path().filename().string()] = ss.str();
  }
  return out;
}

// 10. Byte-identical output across repeated runs.
Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "pgpr_acceptance_determinism";
  std::size_t files = 0;
  bool ok = true;
  for (RunMode mode : {RunMode::eh_scan, RunMode::risb_scan, RunMode::landscape, RunMode::calibrate}) {
    RunConfig cfg;
    cfg.mode = mode;
    cfg.u_grid = {0.0, 1.0, 2.0};
    cfg.seeds = {3, 4};
    cfg.risb_max_iter = 10;
    cfg.landscape_points = 31;
    cfg.calibrate_trials = 4;
    cfg.plots = false;
    std::map<std::string, std::string> first;
    for (int run_index = 0; run_index < 2; ++run_index) {
      cfg.output_dir = root / fmt::format("{}_{}", mode_name(mode), run_index);
      fs::remove_all(cfg.output_dir);
      std::ostringstream log;
      run(cfg, log);
      const auto files_now = csv_files(cfg.output_dir);
      if (run_index == 0) {
        first = files_now;
      } else {
        ok = ok && !first.empty() && files_now == first;
        files += first.size();
      }
    }
  }
  fs::remove_all(root);
  return {ok, fmt::format("{} CSV files over 4 subcommands compared byte for byte", files)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"expansion exactness", expansion_exactness},
      {"boundary imbuing", boundary_imbuing},
      {"U=0 exactness through noise", u0_exactness},
      {"head-to-head mitigation", head_to_head},
      {"budget accounting", budgets},
      {"RISB analytic oracle", risb_oracle},
      {"noisy RISB robustness", noisy_risb},
      {"posterior coverage", coverage},
      {"readout mitigation", readout},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("threw: {}", e.what())};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::cout << fmt::format("{} {:>2} {}: {} [{:.1f} s]", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first,
                             o.detail, secs)
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
