#include "pgpr/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

namespace pgpr {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double to_double(std::string_view key, std::string_view v) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x)) {
    throw ConfigError(fmt::format("{}: '{}' is not a number", key, v));
  }
  return x;
}

template <class Int>
Int to_int(std::string_view key, std::string_view v) {
  Int x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size()) throw ConfigError(fmt::format("{}: '{}' is not an integer", key, v));
  return x;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  throw ConfigError(fmt::format("{}: '{}' is not a boolean", key, v));
}

std::vector<std::uint64_t> to_seeds(std::string_view key, std::string_view v) {
  std::vector<std::uint64_t> out;
  for (auto item : split(v, ',')) {
    const auto dots = item.find("..");
    if (dots == std::string_view::npos) {
      out.push_back(to_int<std::uint64_t>(key, item));
      continue;
    }
    const auto lo = to_int<std::uint64_t>(key, trim(item.substr(0, dots)));
    const auto hi = to_int<std::uint64_t>(key, trim(item.substr(dots + 2)));
    if (hi < lo) throw ConfigError(fmt::format("{}: empty range '{}'", key, item));
    if (hi - lo > 1'000'000) throw ConfigError(fmt::format("{}: range '{}' is too long", key, item));
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
  }
  return out;
}

using Setter = std::function<void(RunConfig&, std::string_view key, std::string_view value)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table{
      {"mode",
       [](RunConfig& c, auto k, auto v) {
         for (RunMode m : {RunMode::eh_scan, RunMode::risb_scan, RunMode::landscape, RunMode::calibrate})
           if (mode_name(m) == v) return void(c.mode = m);
         throw ConfigError(fmt::format("{}: unknown mode '{}'", k, v));
       }},
      {"u_grid",
       [](RunConfig& c, auto k, auto v) {
         c.u_grid.clear();
         for (auto item : split(v, ',')) c.u_grid.push_back(to_double(k, item));
       }},
      {"lambda_c", [](RunConfig& c, auto k, auto v) { c.lambda_c = to_double(k, v); }},
      {"d_hyb", [](RunConfig& c, auto k, auto v) { c.d_hyb = to_double(k, v); }},
      {"noise.kind",
       [](RunConfig& c, auto k, auto v) {
         if (v == "none") c.backend.kind = NoiseKind::none;
         else if (v == "gaussian") c.backend.kind = NoiseKind::gaussian;
         else if (v == "simulator") c.backend.kind = NoiseKind::simulator;
         else throw ConfigError(fmt::format("{}: expected none, gaussian or simulator, got '{}'", k, v));
       }},
      {"noise.p1", [](RunConfig& c, auto k, auto v) { c.backend.noise.p1 = to_double(k, v); }},
      {"noise.p2", [](RunConfig& c, auto k, auto v) { c.backend.noise.p2 = to_double(k, v); }},
      {"noise.gamma", [](RunConfig& c, auto k, auto v) { c.backend.noise.gamma = to_double(k, v); }},
      {"noise.readout", [](RunConfig& c, auto k, auto v) { c.backend.noise.set_symmetric_readout(to_double(k, v)); }},
      {"noise.readout.p1_given_0",
       [](RunConfig& c, auto k, auto v) {
         for (auto& r : c.backend.noise.readout) r.p1_given_0 = to_double(k, v);
       }},
      {"noise.readout.p0_given_1",
       [](RunConfig& c, auto k, auto v) {
         for (auto& r : c.backend.noise.readout) r.p0_given_1 = to_double(k, v);
       }},
      {"noise.shots", [](RunConfig& c, auto k, auto v) { c.backend.noise.shots = to_int<int>(k, v); }},
      {"noise.mitigate", [](RunConfig& c, auto k, auto v) { c.backend.mitigate_readout = to_bool(k, v); }},
      {"noise.calibration_shots", [](RunConfig& c, auto k, auto v) { c.backend.calibration_shots = to_int<int>(k, v); }},
      {"sigma_alpha", [](RunConfig& c, auto k, auto v) { c.backend.sigma_alpha = to_double(k, v); }},
      {"t", [](RunConfig& c, auto k, auto v) { c.fit.t = to_double(k, v); }},
      {"fit.exact",
       [](RunConfig& c, auto k, auto v) {
         if (v == "constraints") c.fit.exact = ExactHandling::constraints;
         else if (v == "sigma-floor") c.fit.exact = ExactHandling::sigma_floor;
         else throw ConfigError(fmt::format("{}: expected constraints or sigma-floor, got '{}'", k, v));
       }},
      {"fit.sigma_floor", [](RunConfig& c, auto k, auto v) { c.fit.sigma_floor = to_double(k, v); }},
      {"fit.variance",
       [](RunConfig& c, auto k, auto v) {
         if (v == "posterior") c.fit.variance = VarianceForm::posterior;
         else if (v == "moment-difference") c.fit.variance = VarianceForm::moment_difference;
         else throw ConfigError(fmt::format("{}: expected posterior or moment-difference, got '{}'", k, v));
       }},
      {"optimizers",
       [](RunConfig& c, auto k, auto v) {
         c.optimizers.clear();
         for (auto item : split(v, ',')) {
           try {
             const Method m = method_from_name(item);
             if (std::find(c.optimizers.begin(), c.optimizers.end(), m) == c.optimizers.end()) c.optimizers.push_back(m);
           } catch (const std::invalid_argument&) {
             throw ConfigError(fmt::format("{}: unknown optimizer '{}'", k, item));
           }
         }
       }},
      {"seeds", [](RunConfig& c, auto k, auto v) { c.seeds = to_seeds(k, v); }},
      {"output_dir", [](RunConfig& c, auto, auto v) { c.output_dir = std::string(v); }},
      {"plots", [](RunConfig& c, auto k, auto v) { c.plots = to_bool(k, v); }},
      {"seq1d.spacing", [](RunConfig& c, auto k, auto v) { c.seq1d_spacing = to_double(k, v); }},
      {"threads", [](RunConfig& c, auto k, auto v) { c.threads = to_int<int>(k, v); }},
      {"risb.tol", [](RunConfig& c, auto k, auto v) { c.risb_tol = to_double(k, v); }},
      {"risb.exact_tol", [](RunConfig& c, auto k, auto v) { c.risb_exact_tol = to_double(k, v); }},
      {"risb.max_iter", [](RunConfig& c, auto k, auto v) { c.risb_max_iter = to_int<int>(k, v); }},
      {"risb.mixing", [](RunConfig& c, auto k, auto v) { c.risb_mixing = to_double(k, v); }},
      {"risb.repeats", [](RunConfig& c, auto k, auto v) { c.risb_repeats = to_int<int>(k, v); }},
      {"risb.window", [](RunConfig& c, auto k, auto v) { c.risb_window = to_int<int>(k, v); }},
      {"landscape.points", [](RunConfig& c, auto k, auto v) { c.landscape_points = to_int<int>(k, v); }},
      {"calibrate.trials", [](RunConfig& c, auto k, auto v) { c.calibrate_trials = to_int<int>(k, v); }},
  };
  return table;
}

}  // namespace

std::string_view mode_name(RunMode m) {
  switch (m) {
    case RunMode::eh_scan: return "eh-scan";
    case RunMode::risb_scan: return "risb-scan";
    case RunMode::landscape: return "landscape";
    case RunMode::calibrate: return "calibrate";
  }
  return "?";
}

void RunConfig::validate() const {
  if (u_grid.empty()) throw ConfigError("u_grid: must not be empty");
  for (double u : u_grid)
    if (u < 0.0) throw ConfigError(fmt::format("u_grid: {} is negative", u));
  if (d_hyb == 0.0) throw ConfigError("d_hyb: must be nonzero");
  if (optimizers.empty()) throw ConfigError("optimizers: select at least one");
  if (seeds.empty()) throw ConfigError("seeds: must not be empty");
  try {
    backend.noise.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("noise: {}", e.what()));
  }
  if (backend.sigma_alpha < 0.0) throw ConfigError("sigma_alpha: must be >= 0 (0 selects 0.2 |d_hyb|)");
  if (fit.t < 0.0) throw ConfigError("t: must be >= 0");
  if (!(fit.sigma_floor > 0.0)) throw ConfigError("fit.sigma_floor: must be positive");
  if (!(seq1d_spacing > 0.0 && seq1d_spacing <= 0.5)) throw ConfigError("seq1d.spacing: must lie in (0, 0.5]");
  if (threads < 0) throw ConfigError("threads: must be >= 0");
  if (!(risb_tol > 0.0) || !(risb_exact_tol > 0.0)) throw ConfigError("risb.tol: must be positive");
  if (risb_max_iter < 1) throw ConfigError("risb.max_iter: must be >= 1");
  if (!(risb_mixing > 0.0 && risb_mixing <= 1.0)) throw ConfigError("risb.mixing: must lie in (0, 1]");
  if (risb_repeats < 1) throw ConfigError("risb.repeats: must be >= 1");
  if (risb_window < 1) throw ConfigError("risb.window: must be >= 1");
  if (landscape_points < 2) throw ConfigError("landscape.points: must be >= 2");
  if (calibrate_trials < 1) throw ConfigError("calibrate.trials: must be >= 1");
}

RunConfig parse_config(const std::string& text, RunConfig cfg) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s(line);
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ConfigError(fmt::format("line {}: expected 'key = value'", lineno));
    const auto key = trim(s.substr(0, eq));
    const auto value = trim(s.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(fmt::format("{}: unknown key (line {})", key, lineno));
    if (value.empty()) throw ConfigError(fmt::format("{}: missing value (line {})", key, lineno));
    it->second(cfg, key, value);
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream f(path);
  if (!f) throw ConfigError(fmt::format("cannot read config file '{}'", path.string()));
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

std::string describe_config(const RunConfig& c) {
  auto kind = [&] {
    switch (c.backend.kind) {
      case NoiseKind::none: return "none";
      case NoiseKind::gaussian: return "gaussian";
      case NoiseKind::simulator: return "simulator";
    }
    return "?";
  };
  std::vector<std::string_view> opt;
  for (Method m : c.optimizers) opt.push_back(method_name(m));
  std::string out;
  out += fmt::format("mode = {}\n", mode_name(c.mode));
  out += fmt::format("u_grid = {}\n", fmt::join(c.u_grid, ","));
  out += fmt::format("lambda_c = {}\nd_hyb = {}\n", c.lambda_c, c.d_hyb);
  out += fmt::format("noise.kind = {}\nnoise.p1 = {}\nnoise.p2 = {}\nnoise.gamma = {}\n", kind(), c.backend.noise.p1,
                     c.backend.noise.p2, c.backend.noise.gamma);
  out += fmt::format("noise.readout.p1_given_0 = {}\nnoise.readout.p0_given_1 = {}\n", c.backend.noise.readout[0].p1_given_0,
                     c.backend.noise.readout[0].p0_given_1);
  out += fmt::format("noise.shots = {}\nnoise.mitigate = {}\nnoise.calibration_shots = {}\n", c.backend.noise.shots,
                     c.backend.mitigate_readout, c.backend.calibration_shots);
  out += fmt::format("sigma_alpha = {}\nt = {}\n", c.backend.sigma_alpha, c.fit.t);
  out += fmt::format("fit.exact = {}\nfit.sigma_floor = {}\nfit.variance = {}\n",
                     c.fit.exact == ExactHandling::constraints ? "constraints" : "sigma-floor", c.fit.sigma_floor,
                     c.fit.variance == VarianceForm::posterior ? "posterior" : "moment-difference");
  out += fmt::format("optimizers = {}\nseeds = {}\noutput_dir = {}\nplots = {}\nthreads = {}\n", fmt::join(opt, ","),
                     fmt::join(c.seeds, ","), c.output_dir.string(), c.plots, c.threads);
  out += fmt::format("seq1d.spacing = {}\n", c.seq1d_spacing);
  out += fmt::format("risb.tol = {}\nrisb.exact_tol = {}\nrisb.max_iter = {}\nrisb.mixing = {}\nrisb.repeats = {}\nrisb.window = {}\n",
                     c.risb_tol, c.risb_exact_tol, c.risb_max_iter, c.risb_mixing, c.risb_repeats, c.risb_window);
  out += fmt::format("landscape.points = {}\ncalibrate.trials = {}\n", c.landscape_points, c.calibrate_trials);
  return out;
}

}  // namespace pgpr
