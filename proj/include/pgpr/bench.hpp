#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "pgpr/config.hpp"
#include "pgpr/pipeline.hpp"
#include "pgpr/risb.hpp"

namespace pgpr {

/// Runs task(0..count-1) on `threads` workers (0: hardware concurrency).
/// Results are meant to be written to per-index slots, so completion order
/// never shows in the output. The first exception is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task);

/// Seed of one scan point: independent of thread scheduling and of the
/// other points in the grid.
std::uint64_t point_seed(std::uint64_t seed, double u, double lambda_c);

/// Embedding solver backed by a VQE method; call k of the solver draws its
/// noise from derive_seed(seed, {k}).
EhSolver vqe_solver(Method method, BackendConfig backend, std::uint64_t seed, MethodOptions options = {});

struct ScanRow {
  double u = 0.0;
  Method method = Method::exact;
  std::uint64_t seed = 0;
  EhSolution value;
  EhSolution exact;
  ThetaPoint theta_star;
  std::size_t noisy_evals = 0;
  std::size_t exact_evals = 0;
};

struct RisbRow {
  double u = 0.0;
  Method solver = Method::exact;
  std::uint64_t seed = 0;
  RisbResult result;
  double z_exact = 0.0;
  double docc_exact = 0.0;
};

/// Rows in (U, optimizer, seed) order.
std::vector<ScanRow> eh_scan(const RunConfig& cfg);
std::vector<RisbRow> risb_scan(const RunConfig& cfg);

/// Analytic half-filled Gutzwiller solution on the semicircular band.
double analytic_z(double u);
double analytic_docc(double u);

std::string eh_scan_csv(const std::vector<ScanRow>& rows, const RunConfig& cfg);
std::string eh_summary_csv(const std::vector<ScanRow>& rows);
std::string risb_scan_csv(const std::vector<RisbRow>& rows);

struct LandscapeGrid {
  int points = 0;
  std::vector<double> axis;  // shared by theta1 and theta2
  std::vector<double> exact, mean, std;  // index theta2_index * points + theta1_index
  PipelineResult pipeline;
};

LandscapeGrid landscape(const RunConfig& cfg);
std::string landscape_csv(const LandscapeGrid& grid);

struct MitigationTrial {
  std::string term;
  double exact = 0.0;
  double raw = 0.0;
  double mitigated = 0.0;
};

/// Measures every term of the embedding Hamiltonian at a fixed ansatz point
/// with and without readout mitigation, once per trial. Gate noise is
/// switched off so only readout errors remain.
std::vector<MitigationTrial> readout_trials(const NoiseModel& noise, const EmbeddingParams& params, int trials,
                                            std::uint64_t seed);

/// Exit codes of the command-line front end.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNotConverged = 3;

/// Executes cfg.mode, writing CSV (and SVG when cfg.plots) files into
/// cfg.output_dir. Returns the process exit code. Throws std::runtime_error
/// when the output directory cannot be written.
int run(const RunConfig& cfg, std::ostream& log);

}  // namespace pgpr
