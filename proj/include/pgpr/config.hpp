#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "pgpr/pipeline.hpp"
#include "pgpr/risb.hpp"

namespace pgpr {

/// Invalid or unreadable run configuration; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class RunMode { eh_scan, risb_scan, landscape, calibrate };
std::string_view mode_name(RunMode m);

struct RunConfig {
  RunMode mode = RunMode::eh_scan;
  std::vector<double> u_grid{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  double lambda_c = 0.0;
  double d_hyb = 0.5;
  BackendConfig backend;
  FitOptions fit;
  std::vector<Method> optimizers{Method::exact, Method::gpr, Method::seq1d, Method::baseline};
  std::vector<std::uint64_t> seeds{0};
  std::filesystem::path output_dir = "out";
  bool plots = true;
  int threads = 0;  // 0: one per hardware thread
  /// Node spacing of the sequential 1-D optimizer in units of pi.
  double seq1d_spacing = 0.4;

  double risb_tol = 5e-3;
  double risb_exact_tol = 1e-10;
  int risb_max_iter = 60;
  double risb_mixing = 0.5;
  int risb_repeats = 3;
  int risb_window = 3;

  int landscape_points = 101;
  int calibrate_trials = 20;

  /// Throws ConfigError when an invariant does not hold.
  void validate() const;
};

/// Parses "key = value" lines; '#' starts a comment. Unknown keys are errors.
RunConfig parse_config(const std::string& text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

/// Every recognised key with its current value, one "key = value" per line.
std::string describe_config(const RunConfig& cfg);

}  // namespace pgpr
