#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sasmig/grid.hpp"

using namespace sasmig;

TEST_CASE("make_grid accepts the minimal grid") {
  const Grid2D g = make_grid(2, 1, 0.1, 0.1, 0.0, 0.0);
  CHECK(g.size() == 2);
  CHECK(g.x(1) == doctest::Approx(0.1));
}

TEST_CASE("make_grid rejects invalid dimensions naming the field") {
  CHECK_THROWS_WITH_AS(make_grid(0, 1, 0.1, 0.1, 0, 0),
                       doctest::Contains("nx"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_grid(4, 0, 0.1, 0.1, 0, 0),
                       doctest::Contains("nz"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_grid(4, 2, -0.1, 0.1, 0, 0),
                       doctest::Contains("dx"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(make_grid(4, 2, 0.1, 0.0, 0, 0),
                       doctest::Contains("dz"), std::invalid_argument);
}

TEST_CASE("pixel centers span the stated extent") {
  const Grid2D g = make_grid(128, 256, 0.05, 0.05, -3.2, 0.0);
  CHECK(g.x(0) == doctest::Approx(-3.2));
  CHECK(g.x(127) == doctest::Approx(3.15));
}

TEST_CASE("linear index round-trips for every pixel") {
  const Grid2D g = make_grid(7, 5, 0.1, 0.2, -1.0, 0.5);
  for (Index j = 0; j < g.nz; ++j)
    for (Index i = 0; i < g.nx; ++i) {
      const Index idx = g.index(i, j);
      const auto [ri, rj] = g.coords(idx);
      CHECK(ri == i);
      CHECK(rj == j);
    }
  CHECK(g.index(g.nx - 1, g.nz - 1) == g.size() - 1);
}

TEST_CASE("constructors reject randomized invariant violations") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pos(0.01, 10.0);
  std::uniform_int_distribution<int> dims(1, 64);
  const double nan = std::numeric_limits<double>::quiet_NaN();

  for (int trial = 0; trial < 200; ++trial) {
    int nx = dims(rng) + 1, nz = dims(rng);
    double dx = pos(rng), dz = pos(rng), x0 = pos(rng), z0 = pos(rng);
    switch (trial % 6) {
      case 0: nx = -dims(rng) + 1; break; // nx <= 1 is invalid
      case 1: nz = -dims(rng); break;
      case 2: dx = -pos(rng); break;
      case 3: dz = 0.0; break;
      case 4: x0 = nan; break;
      case 5: z0 = nan; break;
    }
    CHECK_THROWS_AS(make_grid(nx, nz, dx, dz, x0, z0), std::invalid_argument);
  }
}

TEST_CASE("record and field validation catch broken invariants") {
  SasRecord r;
  r.n_traces = 2;
  r.n_samples = 3;
  r.dt = 1e-4;
  r.dx_track = 0.1;
  r.c = 1500.0;
  r.data = Matrix::Zero(3, 2);
  CHECK_NOTHROW(validate_record(r));

  SasRecord bad = r;
  bad.dt = 0.0;
  CHECK_THROWS_WITH_AS(validate_record(bad), doctest::Contains("dt"),
                       std::invalid_argument);
  bad = r;
  bad.data(1, 1) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(validate_record(bad), std::invalid_argument);
  bad = r;
  bad.data = Matrix::Zero(2, 2);
  CHECK_THROWS_AS(validate_record(bad), std::invalid_argument);

  Field2D f = make_field(make_grid(4, 3, 0.1, 0.1, 0, 0));
  CHECK_NOTHROW(validate_field(f));
  f.values(2, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(validate_field(f), std::invalid_argument);
}

TEST_CASE("scatterers must sit below the sonar path") {
  CHECK_NOTHROW(validate_scatterers({{0.0, 1.0, 2.0}}));
  CHECK_THROWS_AS(validate_scatterers({{0.0, 0.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate_scatterers({{0.0, -1.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("named variants bind their rational coefficients") {
  MigrationConfig cfg;
  cfg.variant = AngleVariant::deg45;
  auto [a45, b45] = resolve_angles(cfg);
  CHECK(a45 == 0.5);
  CHECK(b45 == 0.25);
  cfg.variant = AngleVariant::deg65;
  auto [a65, b65] = resolve_angles(cfg);
  CHECK(a65 == 0.478);
  CHECK(b65 == 0.376);
}

TEST_CASE("migration config invariants") {
  MigrationConfig cfg;
  cfg.variant = AngleVariant::deg15;
  cfg.output_grid = make_grid(8, 16, 0.1, 0.1, 0, 0);
  cfg.dz = 0.1;
  cfg.focusing_steps = 8;
  cfg.speed = SpeedProfile::constant(1500.0);
  CHECK_NOTHROW(validate_migration_config(cfg));

  cfg.focusing_steps = 17; // > nz
  CHECK_THROWS_WITH_AS(validate_migration_config(cfg), doctest::Contains("M"),
                       std::invalid_argument);
  cfg.focusing_steps = 8;
  cfg.speed.layers[0].c = -1.0;
  CHECK_THROWS_AS(validate_migration_config(cfg), std::invalid_argument);
}

TEST_CASE("enhance config invariants") {
  EnhanceConfig cfg;
  CHECK_NOTHROW(validate_enhance_config(cfg));
  cfg.variant = PhiVariant::hybrid;
  cfg.delta = 1.5;
  CHECK_THROWS_WITH_AS(validate_enhance_config(cfg), doctest::Contains("delta"),
                       std::invalid_argument);
  cfg.delta = 0.25;
  cfg.epsilon = 0.0;
  CHECK_THROWS_AS(validate_enhance_config(cfg), std::invalid_argument);
}
