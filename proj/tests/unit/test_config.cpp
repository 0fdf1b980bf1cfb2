#include <doctest.h>

#include <algorithm>
#include <string>

#include "pgpr/config.hpp"

using namespace pgpr;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_config(text).validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("defaults are valid") {
    const RunConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.u_grid == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0});
    CHECK(c.backend.kind == NoiseKind::simulator);
  }

  TEST_CASE("parse keys, comments and whitespace") {
    const auto c = parse_config(R"(
# a comment
mode = risb-scan
u_grid = 0, 1.5 ,2
lambda_c = 0.2   # trailing comment
noise.kind = gaussian
noise.readout = 0.05
noise.shots = 1024
sigma_alpha = 0.1
fit.exact = sigma-floor
fit.variance = moment-difference
optimizers = gpr, seq1d, gpr
seeds = 3, 10..12
plots = false
seq1d.spacing = 0.2
risb.max_iter = 7
)");
    CHECK(c.mode == RunMode::risb_scan);
    CHECK(c.u_grid == std::vector<double>{0.0, 1.5, 2.0});
    CHECK(c.lambda_c == 0.2);
    CHECK(c.backend.kind == NoiseKind::gaussian);
    CHECK(c.backend.noise.readout[0].p1_given_0 == 0.05);
    CHECK(c.backend.noise.readout[1].p0_given_1 == 0.05);
    CHECK(c.backend.noise.shots == 1024);
    CHECK(c.backend.sigma_alpha == 0.1);
    CHECK(c.fit.exact == ExactHandling::sigma_floor);
    CHECK(c.fit.variance == VarianceForm::moment_difference);
    CHECK(c.optimizers == std::vector<Method>{Method::gpr, Method::seq1d});
    CHECK(c.seeds == std::vector<std::uint64_t>{3, 10, 11, 12});
    CHECK_FALSE(c.plots);
    CHECK(c.seq1d_spacing == 0.2);
    CHECK(c.risb_max_iter == 7);
  }

  TEST_CASE("errors name the offending key") {
    CHECK(starts_with(error_of("bogus = 1"), "bogus: unknown key (line 1)"));
    CHECK(starts_with(error_of("noise.p1 = abc"), "noise.p1:"));
    CHECK(starts_with(error_of("noise.shots = 1.5"), "noise.shots:"));
    CHECK(starts_with(error_of("noise.kind = loud"), "noise.kind:"));
    CHECK(starts_with(error_of("mode = fly"), "mode:"));
    CHECK(starts_with(error_of("optimizers = gpr, cobyla"), "optimizers:"));
    CHECK(starts_with(error_of("plots = maybe"), "plots:"));
    CHECK(starts_with(error_of("seeds = 5..2"), "seeds:"));
    CHECK(starts_with(error_of("u_grid = 1, -1"), "u_grid:"));
    CHECK(starts_with(error_of("d_hyb = 0"), "d_hyb:"));
    CHECK(starts_with(error_of("noise.p2 = 1.5"), "noise:"));
    CHECK(starts_with(error_of("seq1d.spacing = 0.7"), "seq1d.spacing:"));
    CHECK(starts_with(error_of("risb.mixing = 0"), "risb.mixing:"));
    CHECK(starts_with(error_of("just text"), "line 1:"));
  }

  TEST_CASE("describe round trip") {
    auto c = parse_config("u_grid = 0.25, 3\nseeds = 1..3\nnoise.kind = none\nthreads = 2\n");
    const std::string text = describe_config(c);
    CHECK(describe_config(parse_config(text)) == text);
    CHECK(text.find("u_grid = 0.25,3") != std::string::npos);
  }

  TEST_CASE("shipped example configs load") {
    for (const char* name : {"eh_scan", "risb_scan", "landscape", "calibrate"}) {
      CAPTURE(name);
      const auto c = load_config(std::string(PGPR_CONFIG_DIR) + "/" + name + ".cfg");
      CHECK_NOTHROW(c.validate());
      CHECK(std::string(mode_name(c.mode)) == [&] {
        std::string s = name;
        std::replace(s.begin(), s.end(), '_', '-');
        return s;
      }());
    }
    CHECK_THROWS_AS(load_config("/nonexistent/pgpr.cfg"), ConfigError);
  }

  TEST_CASE("mode names") {
    CHECK(mode_name(RunMode::eh_scan) == "eh-scan");
    CHECK(mode_name(RunMode::risb_scan) == "risb-scan");
    CHECK(mode_name(RunMode::landscape) == "landscape");
    CHECK(mode_name(RunMode::calibrate) == "calibrate");
  }
}
