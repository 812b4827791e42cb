#include <doctest.h>

#include "planetwars/bench.hpp"
#include "planetwars/engine.hpp"

using namespace planetwars;

TEST_CASE("least squares fit") {
  const LinearFit exact = fit_line({1, 2, 3, 4}, {5, 8, 11, 14});
  CHECK(exact.slope == doctest::Approx(3.0));
  CHECK(exact.intercept == doctest::Approx(2.0));
  CHECK(exact.r2 == doctest::Approx(1.0));

  // Worked by hand: Sxy = 3.5, Sxx = 5, SSres = 2.3, SStot = 4.75.
  const LinearFit noisy = fit_line({1, 2, 3, 4}, {2, 4, 5, 4});
  CHECK(noisy.slope == doctest::Approx(0.7));
  CHECK(noisy.intercept == doctest::Approx(2.0));
  CHECK(noisy.r2 == doctest::Approx(1.0 - 2.3 / 4.75));
}

TEST_CASE("benchmarks report their own bookkeeping") {
  GameParameters p = default_parameters();
  p.gravity_grid_cell = 4;
  const BenchResult next = bench_next_state(p, 0.2, 1, 1000);
  CHECK(next.operations >= 1000);
  CHECK(next.seconds >= 0.2);
  CHECK(next.kops == doctest::Approx(next.operations / next.seconds / 1000.0));
  CHECK(next.threads == 1);

  const BenchResult two = bench_copy(p, 0.2, 2, 1000);
  CHECK(two.threads == 2);
  CHECK(two.operations >= 1000);
}

TEST_CASE("gravity field cost grows with map area") {
  std::vector<double> area, ms;
  for (int scale : {1, 2, 3}) {
    GameParameters p = default_parameters();
    p.map_width = 320 * scale;
    p.map_height = 240 * scale;
    p.num_planets = 10;
    p.gravity_grid_cell = 2;
    const BenchResult b = bench_gravity(p, 0.3, 3);
    area.push_back(static_cast<double>(p.map_width) * p.map_height);
    ms.push_back(1.0 / b.kops);
  }
  const LinearFit fit = fit_line(area, ms);
  CHECK(fit.slope > 0.0);
  CHECK(fit.r2 >= 0.9);
}

TEST_CASE("normal play computes the gravity field once") {
  const auto before = gravity_field_computations();
  GameState s = new_game(default_parameters(), 17);
  GameState copy = copy_state(s);
  for (int t = 0; t < 1000; ++t) advance(copy, Action::noop(), Action::noop());
  CHECK(gravity_field_computations() - before == 1);
}
