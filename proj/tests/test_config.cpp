#include "doctest.h"
#include "dglab/config.hpp"

using namespace dglab;

TEST_SUITE_BEGIN("config");

TEST_CASE("minimal config gets the documented defaults") {
  const auto cfg = parse_config("initial.kind = plane-wave\n");
  CHECK(cfg.hbar == 1.0);
  CHECK(cfg.mass == 1.0);
  CHECK(cfg.D == 0.0);
  CHECK(cfg.Dprime == 0.0);
  for (double ci : cfg.c) CHECK(ci == 0.0);
  CHECK(cfg.epsilon == 1e-12);
  CHECK(cfg.potential == "none");
  CHECK(cfg.params().is_linear());
  CHECK(cfg.x0 == cfg.length / 2.0);  // centre default is resolved and echoed
}

TEST_CASE("comments, blank lines, negative D") {
  const std::string text =
      "# free particle with a small negative diffusion parameter\n"
      "\n"
      "physics.D = -0.01   # D ranges over all of R\n"
      "grid.n = 64\n";
  const auto cfg = parse_config(text);
  CHECK(cfg.D == -0.01);
  CHECK(cfg.n == 64);
}

TEST_CASE("constraint violations carry the line number") {
  CHECK_THROWS_WITH_AS(parse_config("grid.n = 7\n"), doctest::Contains("n_points must be >= 8"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("\n\ngrid.n = 7\n"), doctest::Contains("line 3"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("regularisation.epsilon = 0.5\n"),
                       doctest::Contains("(0, 1e-6]"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("time.dt = -1\n"), doctest::Contains("dt"),
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_config("time.steps = 10\ntime.record_every = 20\n"),
                  std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("time.scheme = euler\n"), doctest::Contains("scheme"),
                       std::invalid_argument);
}

TEST_CASE("unknown keys and syntax errors are rejected with positions") {
  CHECK_THROWS_WITH_AS(parse_config("grid.m = 12\n"), doctest::Contains("unknown key"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("just some words\n"), doctest::Contains("line 1"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("physics.D 0.1\n"), doctest::Contains("expected"),
                       std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config("physics.D = zero\n"), doctest::Contains("real number"),
                       std::invalid_argument);
}

TEST_CASE("field expression errors point at the line and column") {
  try {
    parse_config("grid.length = 6.283185307179586\nphysics.potential = 0.5*cos(\n");
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("column") != std::string::npos);
  }
}

TEST_CASE("overrides are applied after the file text") {
  const auto cfg = parse_config("physics.D = 0.1\n", {"physics.D=0.25", "grid.n=128"});
  CHECK(cfg.D == 0.25);
  CHECK(cfg.n == 128);
  CHECK_THROWS_WITH_AS(parse_config("", {"bogus.key=1"}), doctest::Contains("override 1"),
                       std::invalid_argument);
}

TEST_CASE("render round trip reproduces the config") {
  const std::string text =
      "grid.dim = 1\n"
      "grid.n = 96\n"
      "grid.length = 17.5\n"
      "physics.D = 0.037\n"
      "physics.Dprime = 0.11\n"
      "physics.c2 = -0.4\n"
      "physics.potential = 0.25*cos(x) + 0.125*sin(2x)\n"
      "initial.kind = gaussian\n"
      "initial.sigma = 0.8\n"
      "time.dt = 0.002\n"
      "time.steps = 321\n"
      "time.record_every = 3\n"
      "run.seed = 97\n"
      "gauge.gamma = 0.4\n";
  const auto cfg = parse_config(text);
  const auto echoed = parse_config(render_config(cfg));
  CHECK(echoed == cfg);
}

TEST_CASE("resolved objects match their sections") {
  const auto cfg = parse_config(
      "grid.dim = 2\ngrid.n = 16\ngrid.n_y = 32\ngrid.length = 4\ngrid.length_y = 8\n"
      "time.scheme = rk4\ngauge.gamma = 0.9\ngauge.lambda = 1.1\n");
  const auto g = cfg.grid();
  CHECK(g.dim == 2);
  CHECK(g.n[0] == 16);
  CHECK(g.n[1] == 32);
  CHECK(g.length[1] == 8.0);
  CHECK(cfg.scheme_enum() == Scheme::Rk4);
  CHECK(cfg.gauge().gamma == 0.9);
  CHECK(cfg.gauge().lambda == 1.1);
  CHECK(cfg.regularisation().epsilon_rel == 1e-12);
}

TEST_SUITE_END();
