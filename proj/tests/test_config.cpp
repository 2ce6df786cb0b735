#include "convac/config.hpp"
#include "convac/errors.hpp"
#include "convac/metrics.hpp"
#include "convac/study.hpp"
#include "doctest.h"

using namespace convac;

TEST_CASE("defaults are the reference configuration and round-trip through INI") {
  StudyConfig d;
  CHECK(d.eps == std::vector<double>{0.12, 0.08, 0.0533, 0.0356});
  CHECK(d.delta == 0.05);
  CHECK(d.T0 == 0.25);
  CHECK(d.velocity_amplitude == 0.02);
  CHECK_NOTHROW(validate(d));
  std::string ini = to_ini(d);
  CHECK(to_ini(parse_config(ini)) == ini);
}

TEST_CASE("config values override defaults") {
  auto c = parse_config("[study]\neps = 0.1, 0.05, 0.025\n[velocity]\nname = zero\n[expansion]\ninclude_c2 = false\n");
  CHECK(c.eps == std::vector<double>{0.1, 0.05, 0.025});
  CHECK(c.velocity == "zero");
  CHECK_FALSE(c.include_c2);
  CHECK(c.delta == 0.05);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("[study]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[study]\ncells_per_eps = many\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/file.ini"), ConfigError);
  StudyConfig c;
  c.eps = {0.12, 0.1, 0.05};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.eps = {0.3, 0.15};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = StudyConfig{};
  c.cells_per_eps = 4;
  CHECK_THROWS_AS(validate(c), ResolutionInsufficient);
  c = StudyConfig{};
  c.velocity = "vortex";
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = StudyConfig{};
  c.potential = "double_well";
  c.potential_q = {0.25, -0.25};
  CHECK_THROWS_AS(validate(c), PotentialInvalid);
}

TEST_CASE("curve too close to the boundary is rejected by the dry run") {
  StudyConfig c;
  c.curve.radius = 0.4;
  CHECK_THROWS_AS(build_pipeline(c), ConfigError);
}

TEST_CASE("spectral growth rule") {
  SpectralStudy s;
  s.eps = {0.1, 0.05, 0.025};
  s.envelope = {0.2, 0.21, 0.25};
  judge_spectral(s, 0.1);
  CHECK_FALSE(s.uniform);
  s.envelope = {0.2, 0.21, 0.23};
  judge_spectral(s, 0.1);
  CHECK(s.uniform);
  CHECK(s.C_L == doctest::Approx(0.23));
  s.envelope = {-1.0, -0.5, -0.1};
  judge_spectral(s, 0.1);
  CHECK(s.uniform);
  CHECK(s.C_L == 0.0);
  s.envelope = {-1.0, 0.0, 0.01};
  judge_spectral(s, 0.1);
  CHECK_FALSE(s.uniform);
}

TEST_CASE("single eps gives a degenerate fit") {
  CHECK_THROWS_AS(eoc({0.12}, {1.0}), DegenerateFit);
}
