#include "pgpr/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include <fmt/format.h>

#include "pgpr/readout.hpp"
#include "pgpr/rng.hpp"
#include "pgpr/svg_plot.hpp"

namespace pgpr {

namespace {

constexpr const char* kUnits = "# energies in units of 2D (D: bath hybridization); angles in radians";
constexpr std::uint64_t kCalibrationPath = 0xCA11B;

std::string num(double v) { return fmt::format("{:.15g}", v); }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  f << text;
  if (!f.flush()) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
}

MethodOptions method_options(const RunConfig& cfg) {
  MethodOptions o;
  o.pipeline.fit = cfg.fit;
  o.seq1d = Sequential1dOptions::with_spacing(cfg.seq1d_spacing * kPi);
  return o;
}

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task) {
  std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            task(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

std::uint64_t point_seed(std::uint64_t seed, double u, double lambda_c) {
  return derive_seed(seed, {std::bit_cast<std::uint64_t>(u), std::bit_cast<std::uint64_t>(lambda_c)});
}

EhSolver vqe_solver(Method method, BackendConfig backend, std::uint64_t seed, MethodOptions options) {
  if (method == Method::exact) return ed_solver();
  return [method, backend = std::move(backend), seed, options = std::move(options)](const EmbeddingParams& p,
                                                                                   std::uint64_t call) {
    return solve_embedding(method, p, backend, derive_seed(seed, {call}), options).estimate;
  };
}

double analytic_z(double u) {
  const double x = u / critical_u();
  return x >= 1.0 ? 0.0 : 1.0 - x * x;
}

double analytic_docc(double u) {
  const double x = u / critical_u();
  return x >= 1.0 ? 0.0 : 0.25 * (1.0 - x);
}

std::vector<ScanRow> eh_scan(const RunConfig& cfg) {
  cfg.validate();
  const std::size_t nm = cfg.optimizers.size(), ns = cfg.seeds.size();
  std::vector<ScanRow> rows(cfg.u_grid.size() * nm * ns);
  const MethodOptions opts = method_options(cfg);
  parallel_for(rows.size(), cfg.threads, [&](std::size_t k) {
    const double u = cfg.u_grid[k / (nm * ns)];
    const Method m = cfg.optimizers[(k / ns) % nm];
    const std::uint64_t seed = cfg.seeds[k % ns];
    const EmbeddingParams params{u, cfg.d_hyb, cfg.lambda_c};
    const MethodResult r = solve_embedding(m, params, cfg.backend, point_seed(seed, u, cfg.lambda_c), opts);
    ScanRow& row = rows[k];
    row.u = u;
    row.method = m;
    row.seed = seed;
    row.value = r.estimate;
    row.exact = exact_ground_state(params);
    row.theta_star = r.theta_star;
    row.noisy_evals = r.noisy_evals;
    row.exact_evals = r.exact_evals;
  });
  return rows;
}

std::vector<RisbRow> risb_scan(const RunConfig& cfg) {
  cfg.validate();
  const std::size_t nm = cfg.optimizers.size(), ns = cfg.seeds.size();
  std::vector<RisbRow> rows(cfg.u_grid.size() * nm * ns);
  const MethodOptions opts = method_options(cfg);
  parallel_for(rows.size(), cfg.threads, [&](std::size_t k) {
    const double u = cfg.u_grid[k / (nm * ns)];
    const Method m = cfg.optimizers[(k / ns) % nm];
    const std::uint64_t seed = cfg.seeds[k % ns];
    RisbOptions ro;
    if (m == Method::exact) {
      ro.tol = cfg.risb_exact_tol;
      ro.max_iter = std::max(cfg.risb_max_iter, 100);
    } else {
      ro = RisbOptions::noisy(cfg.risb_tol);
      ro.max_iter = cfg.risb_max_iter;
      ro.mixing = cfg.risb_mixing;
      ro.repeats = cfg.risb_repeats;
      ro.window = cfg.risb_window;
    }
    RisbRow& row = rows[k];
    row.u = u;
    row.solver = m;
    row.seed = seed;
    row.result = solve_self_consistency(u, vqe_solver(m, cfg.backend, point_seed(seed, u, 0.0), opts), ro);
    row.z_exact = analytic_z(u);
    row.docc_exact = analytic_docc(u);
  });
  return rows;
}

std::string eh_scan_csv(const std::vector<ScanRow>& rows, const RunConfig& cfg) {
  std::string out = fmt::format("{}\n", kUnits);
  out += "U,lambda_c,d_hyb,optimizer,seed,energy,docc,f1,f2,exact_energy,exact_docc,exact_f1,exact_f2,"
         "err_energy,err_docc,err_f1,err_f2,theta1,theta2,noisy_evals,exact_evals\n";
  for (const auto& r : rows) {
    const auto& v = r.value;
    const auto& e = r.exact;
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", num(r.u), num(cfg.lambda_c),
                       num(cfg.d_hyb), method_name(r.method), r.seed, num(v.energy), num(v.docc), num(v.f1), num(v.f2),
                       num(e.energy), num(e.docc), num(e.f1), num(e.f2), num(std::abs(v.energy - e.energy)),
                       num(std::abs(v.docc - e.docc)), num(std::abs(v.f1 - e.f1)), num(std::abs(v.f2 - e.f2)),
                       num(r.theta_star.theta1), num(r.theta_star.theta2), r.noisy_evals, r.exact_evals);
  }
  return out;
}

std::string eh_summary_csv(const std::vector<ScanRow>& rows) {
  struct Acc {
    std::vector<double> e, d, f1, f2;
  };
  std::map<std::pair<double, int>, Acc> acc;
  for (const auto& r : rows) {
    Acc& a = acc[{r.u, static_cast<int>(r.method)}];
    a.e.push_back(std::abs(r.value.energy - r.exact.energy));
    a.d.push_back(std::abs(r.value.docc - r.exact.docc));
    a.f1.push_back(std::abs(r.value.f1 - r.exact.f1));
    a.f2.push_back(std::abs(r.value.f2 - r.exact.f2));
  }
  std::string out = fmt::format("{}\nU,optimizer,seeds,mean_err_energy,mean_err_docc,mean_err_f1,mean_err_f2\n", kUnits);
  for (const auto& [key, a] : acc) {
    out += fmt::format("{},{},{},{},{},{},{}\n", num(key.first), method_name(static_cast<Method>(key.second)), a.e.size(),
                       num(mean_of(a.e)), num(mean_of(a.d)), num(mean_of(a.f1)), num(mean_of(a.f2)));
  }
  return out;
}

std::string risb_scan_csv(const std::vector<RisbRow>& rows) {
  std::string out = fmt::format("{}\n", kUnits);
  out += "U,Z,docc,R,lambda,D,lambda_c,residual_norm,converged,solver_evals,solver,seed,insulating,iterations,"
         "exact_Z,exact_docc\n";
  for (const auto& row : rows) {
    const auto& r = row.result;
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", num(row.u), num(r.z), num(r.docc),
                       num(r.state.r), num(r.state.lam), num(r.state.d_hyb), num(r.state.lambda_c),
                       num(r.residual_norm), r.converged ? 1 : 0, r.solver_calls, method_name(row.solver), row.seed,
                       r.insulating ? 1 : 0, r.iterations, num(row.z_exact), num(row.docc_exact));
  }
  return out;
}

LandscapeGrid landscape(const RunConfig& cfg) {
  cfg.validate();
  const double u = cfg.u_grid.front();
  const EmbeddingParams params{u, cfg.d_hyb, cfg.lambda_c};
  const Backend backend(embed(params), cfg.backend, point_seed(cfg.seeds.front(), u, cfg.lambda_c));
  PipelineOptions po;
  po.fit = cfg.fit;

  LandscapeGrid g;
  g.points = cfg.landscape_points;
  g.pipeline = mitigated_pipeline(backend, po);
  const int n = g.points;
  for (int i = 0; i < n; ++i) g.axis.push_back(i + 1 == n ? kPi : -kPi + 2.0 * kPi * i / (n - 1));

  kernels::HalfAngles pts;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      pts.push_back(g.axis[i], g.axis[j]);
      g.exact.push_back(backend.exact({g.axis[i], g.axis[j]})[kEnergy]);
    }
  const SurrogateModel& model = g.pipeline.models[kEnergy];
  g.mean = model.mean(pts);
  g.std = model.variance(pts);
  for (double& v : g.std) v = std::sqrt(std::max(v, 0.0));
  return g;
}

std::string landscape_csv(const LandscapeGrid& g) {
  std::string out = fmt::format("{}\ntheta1,theta2,exact,mean,std\n", kUnits);
  const int n = g.points;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * n + i;
      out += fmt::format("{},{},{},{},{}\n", num(g.axis[i]), num(g.axis[j]), num(g.exact[k]), num(g.mean[k]), num(g.std[k]));
    }
  return out;
}

std::vector<MitigationTrial> readout_trials(const NoiseModel& noise, const EmbeddingParams& params, int trials,
                                            std::uint64_t seed) {
  NoiseModel readout_only = noise;
  readout_only.p1 = readout_only.p2 = readout_only.gamma = 0.0;
  readout_only.validate();
  const ThetaPoint theta{0.4, 0.3};
  const DensityMatrix rho = DensityMatrix::pure(statevector(theta));
  const PauliSum& h = map_to_qubits(params).sum;

  std::vector<MitigationTrial> out;
  for (int t = 0; t < trials; ++t) {
    const auto trial = static_cast<std::uint64_t>(t);
    const Eigen::MatrixXd cal =
        calibrate_readout(2, readout_only, readout_only.shots, derive_seed(seed, {trial, kCalibrationPath}));
    std::uint64_t k = 0;
    for (const auto& term : h.terms()) {
      if (term.string.is_identity()) continue;
      const std::uint64_t s = derive_seed(seed, {trial, k++});
      MeasurementOptions mitigated;
      mitigated.calibration = &cal;
      MitigationTrial m;
      m.term = term.string.to_string();
      m.exact = rho.expectation(PauliSum(2, {PauliTerm{1.0, term.string}}));
      m.raw = measure_pauli(rho, term.string, readout_only, s).estimate;
      m.mitigated = measure_pauli(rho, term.string, readout_only, s, mitigated).estimate;
      out.push_back(m);
    }
  }
  return out;
}

namespace {

int run_eh(const RunConfig& cfg, std::ostream& log) {
  const auto rows = eh_scan(cfg);
  write_file(cfg.output_dir / "eh_scan.csv", eh_scan_csv(rows, cfg));
  write_file(cfg.output_dir / "eh_summary.csv", eh_summary_csv(rows));
  log << fmt::format("eh-scan: {} rows -> {}\n", rows.size(), (cfg.output_dir / "eh_scan.csv").string());
  if (!cfg.plots) return kExitOk;

  auto chart_for = [&](const char* title, const char* ylabel, auto value, auto exact_value) {
    svg::Chart c{title, "U", ylabel, {}};
    svg::Series ex{"exact", {}, {}, true, false};
    for (double u : cfg.u_grid) {
      const auto it = std::find_if(rows.begin(), rows.end(), [&](const ScanRow& r) { return r.u == u; });
      ex.x.push_back(u);
      ex.y.push_back(exact_value(*it));
    }
    c.series.push_back(ex);
    for (Method m : cfg.optimizers) {
      if (m == Method::exact) continue;
      svg::Series s{std::string(method_name(m)), {}, {}, false, true};
      for (double u : cfg.u_grid) {
        std::vector<double> vals;
        for (const auto& r : rows)
          if (r.u == u && r.method == m) vals.push_back(value(r));
        s.x.push_back(u);
        s.y.push_back(mean_of(vals));
      }
      c.series.push_back(s);
    }
    return svg::render(c);
  };
  write_file(cfg.output_dir / "eh_energy.svg",
             chart_for("Embedding energy (seed mean)", "energy [2D]", [](const ScanRow& r) { return r.value.energy; },
                       [](const ScanRow& r) { return r.exact.energy; }));
  write_file(cfg.output_dir / "eh_docc.svg",
             chart_for("Impurity double occupancy (seed mean)", "docc", [](const ScanRow& r) { return r.value.docc; },
                       [](const ScanRow& r) { return r.exact.docc; }));
  return kExitOk;
}

int run_risb(const RunConfig& cfg, std::ostream& log) {
  const auto rows = risb_scan(cfg);
  write_file(cfg.output_dir / "risb_scan.csv", risb_scan_csv(rows));

  std::vector<double> omega;
  for (int i = 0; i <= 20; ++i) omega.push_back(-1.0 + 0.1 * i);
  std::string se = fmt::format("{}\nU,solver,seed,omega,sigma\n", kUnits);
  bool all_converged = true;
  for (const auto& row : rows) {
    all_converged = all_converged && row.result.converged;
    if (row.result.insulating || row.result.state.r == 0.0) continue;
    for (const auto& p : self_energy(row.result.state.r, row.result.state.lam, omega))
      se += fmt::format("{},{},{},{},{}\n", num(row.u), method_name(row.solver), row.seed, num(p.omega), num(p.sigma));
  }
  write_file(cfg.output_dir / "risb_self_energy.csv", se);
  const auto failed = std::count_if(rows.begin(), rows.end(), [](const RisbRow& r) { return !r.result.converged; });
  log << fmt::format("risb-scan: {} rows, {} not converged -> {}\n", rows.size(), failed,
                     (cfg.output_dir / "risb_scan.csv").string());

  if (cfg.plots) {
    auto chart_for = [&](const char* title, const char* ylabel, auto value, double (*exact)(double)) {
      svg::Chart c{title, "U", ylabel, {}};
      svg::Series ex{"analytic", {}, {}, true, false};
      const double top = std::max(cfg.u_grid.back(), *std::max_element(cfg.u_grid.begin(), cfg.u_grid.end()));
      for (int i = 0; i <= 100; ++i) {
        ex.x.push_back(top * i / 100.0);
        ex.y.push_back(exact(top * i / 100.0));
      }
      c.series.push_back(ex);
      for (Method m : cfg.optimizers) {
        svg::Series s{std::string(method_name(m)), {}, {}, false, true};
        for (double u : cfg.u_grid) {
          std::vector<double> vals;
          for (const auto& r : rows)
            if (r.u == u && r.solver == m) vals.push_back(value(r.result));
          s.x.push_back(u);
          s.y.push_back(mean_of(vals));
        }
        c.series.push_back(s);
      }
      return svg::render(c);
    };
    write_file(cfg.output_dir / "risb_z.svg",
               chart_for("Quasiparticle weight", "Z", [](const RisbResult& r) { return r.z; }, analytic_z));
    write_file(cfg.output_dir / "risb_docc.svg",
               chart_for("Double occupancy", "docc", [](const RisbResult& r) { return r.docc; }, analytic_docc));
  }
  return all_converged ? kExitOk : kExitNotConverged;
}

int run_landscape(const RunConfig& cfg, std::ostream& log) {
  const LandscapeGrid g = landscape(cfg);
  write_file(cfg.output_dir / "landscape.csv", landscape_csv(g));
  write_file(cfg.output_dir / "landscape_model.txt", g.pipeline.models[kEnergy].dump());
  write_file(cfg.output_dir / "landscape_circuit.txt", dump_circuit(build_circuit(g.pipeline.optimum.theta_star)));
  const auto& o = g.pipeline.optimum;
  write_file(cfg.output_dir / "landscape_optimum.csv",
             fmt::format("{}\ntheta1,theta2,energy,exact_energy,noisy_evals,exact_evals\n{},{},{},{},{},{}\n", kUnits,
                         num(o.theta_star.theta1), num(o.theta_star.theta2), num(o.value),
                         num(exact_ground_state({cfg.u_grid.front(), cfg.d_hyb, cfg.lambda_c}).energy),
                         g.pipeline.noisy_evals, g.pipeline.exact_evals));
  log << fmt::format("landscape: {}x{} grid, minimum {:.6f} at ({:.4f}, {:.4f})\n", g.points, g.points, o.value,
                     o.theta_star.theta1, o.theta_star.theta2);
  if (cfg.plots) {
    const double lo = -kPi, hi = kPi;
    write_file(cfg.output_dir / "landscape_exact.svg",
               svg::heatmap("Exact energy", g.exact, g.points, g.points, lo, hi, lo, hi, "theta1", "theta2"));
    write_file(cfg.output_dir / "landscape_mean.svg",
               svg::heatmap("Surrogate mean", g.mean, g.points, g.points, lo, hi, lo, hi, "theta1", "theta2"));
    write_file(cfg.output_dir / "landscape_std.svg",
               svg::heatmap("Surrogate standard deviation", g.std, g.points, g.points, lo, hi, lo, hi, "theta1", "theta2"));
  }
  return kExitOk;
}

int run_calibrate(const RunConfig& cfg, std::ostream& log) {
  const NoiseModel& noise = cfg.backend.noise;
  const std::uint64_t seed = cfg.seeds.front();
  const int shots = cfg.backend.calibration_shots > 0 ? cfg.backend.calibration_shots : noise.shots;
  const Eigen::MatrixXd exact = exact_confusion_matrix(2, noise);
  const Eigen::MatrixXd measured = calibrate_readout(2, noise, shots, derive_seed(seed, {kCalibrationPath}));
  std::string cm = "# column j: distribution of read bitstrings when basis state j is prepared (qubit 0 first)\n"
                   "prepared,read,exact,calibrated\n";
  for (Eigen::Index j = 0; j < exact.cols(); ++j)
    for (Eigen::Index i = 0; i < exact.rows(); ++i)
      cm += fmt::format("{},{},{},{}\n", bitstring(static_cast<std::size_t>(j), 2), bitstring(static_cast<std::size_t>(i), 2),
                        num(exact(i, j)), num(measured(i, j)));
  write_file(cfg.output_dir / "confusion_matrix.csv", cm);

  const EmbeddingParams params{cfg.u_grid.front(), cfg.d_hyb, cfg.lambda_c};
  const auto trials = readout_trials(noise, params, cfg.calibrate_trials, seed);
  std::string tr = "# single-Pauli expectation values at theta = (0.4, 0.3), readout errors only\n"
                   "trial,term,exact,raw,mitigated,raw_error,mitigated_error\n";
  const std::size_t per_trial = trials.size() / static_cast<std::size_t>(cfg.calibrate_trials);
  std::vector<double> raw_err, mit_err;
  for (std::size_t k = 0; k < trials.size(); ++k) {
    const auto& t = trials[k];
    raw_err.push_back(std::abs(t.raw - t.exact));
    mit_err.push_back(std::abs(t.mitigated - t.exact));
    tr += fmt::format("{},{},{},{},{},{},{}\n", k / per_trial, t.term, num(t.exact), num(t.raw), num(t.mitigated),
                      num(raw_err.back()), num(mit_err.back()));
  }
  write_file(cfg.output_dir / "mitigation_trials.csv", tr);

  NoiseModel readout_only = noise;
  readout_only.p1 = readout_only.p2 = readout_only.gamma = 0.0;
  const auto rec = measure_pauli(DensityMatrix::pure(statevector({0.4, 0.3})), PauliString::parse("ZZ"), readout_only,
                                 derive_seed(seed, {0xC0u}));
  write_file(cfg.output_dir / "counts_zz.csv", counts_to_csv(rec.raw_counts));
  log << fmt::format("calibrate: mean |error| raw {:.3e}, mitigated {:.3e} over {} measurements\n", mean_of(raw_err),
                     mean_of(mit_err), trials.size());
  return kExitOk;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  cfg.validate();
  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec || !std::filesystem::is_directory(cfg.output_dir))
    throw std::runtime_error(fmt::format("cannot create output directory '{}'", cfg.output_dir.string()));
  write_file(cfg.output_dir / "config.txt", describe_config(cfg));
  switch (cfg.mode) {
    case RunMode::eh_scan: return run_eh(cfg, log);
    case RunMode::risb_scan: return run_risb(cfg, log);
    case RunMode::landscape: return run_landscape(cfg, log);
    case RunMode::calibrate: return run_calibrate(cfg, log);
  }
  return kExitOk;
}

}  // namespace pgpr
