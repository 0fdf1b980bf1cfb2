#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "pgpr/bench.hpp"

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  bool exact_only = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "key = value configuration file")->check(CLI::ExistingFile);
  sub->add_option("--seed", c.seed, "run a single seed instead of the configured list");
  sub->add_option("--out", c.out, "output directory (overrides output_dir)");
  sub->add_flag("--exact-only", c.exact_only, "noiseless backend and exact solver only");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise-mitigated VQE embedding solver and Gutzwiller benchmark"};
  app.require_subcommand(1);
  Common common;
  std::vector<std::pair<CLI::App*, pgpr::RunMode>> modes;
  for (auto mode : {pgpr::RunMode::eh_scan, pgpr::RunMode::risb_scan, pgpr::RunMode::landscape, pgpr::RunMode::calibrate}) {
    static const char* help[] = {"embedding-problem energies and observables over the U grid",
                                 "self-consistent quasiparticle weight over the U grid",
                                 "exact and learned energy landscape on a dense angle grid",
                                 "readout calibration and mitigation demonstration"};
    auto* sub = app.add_subcommand(std::string(pgpr::mode_name(mode)), help[static_cast<int>(mode)]);
    add_common(sub, common);
    modes.emplace_back(sub, mode);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : pgpr::kExitConfig;
  }

  try {
    pgpr::RunConfig cfg;
    for (const auto& [sub, mode] : modes)
      if (sub->parsed()) cfg.mode = mode;
    const auto selected = cfg.mode;
    if (!common.config.empty()) cfg = pgpr::load_config(common.config, cfg);
    cfg.mode = selected;
    if (common.seed) cfg.seeds = {*common.seed};
    if (!common.out.empty()) cfg.output_dir = common.out;
    if (common.exact_only) {
      cfg.backend.kind = pgpr::NoiseKind::none;
      cfg.optimizers = {pgpr::Method::exact};
    }
    cfg.validate();
    return pgpr::run(cfg, std::cout);
  } catch (const pgpr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return pgpr::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
