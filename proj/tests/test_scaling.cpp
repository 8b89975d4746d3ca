#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "antroute/scaling/benchmark.hpp"
#include "antroute/scaling/birthday.hpp"
#include "antroute/scaling/model.hpp"

using namespace antroute::scaling;

TEST_CASE("task time under the worst-case constants") {
  auto p = kReferenceConstants;
  // (8a + 2b) log2(lambda / 10)
  const double expected = (8 * 0.7e-6 + 2 * 1.1e-6) * std::log2(1250.0);
  CHECK(task_time(p) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(task_time(p) == doctest::Approx(8.03e-5).epsilon(0.005));

  auto with_c = p;
  with_c.confirm_probability = 1;
  CHECK(task_time(with_c) > task_time(p));

  p.rate = 10;
  CHECK_THROWS_AS(task_time(p), std::domain_error);
  p = kReferenceConstants;
  p.confirm_probability = 1.5;
  CHECK_THROWS_AS(task_time(p), std::domain_error);
  p = kReferenceConstants;
  p.matches_per_task = 0;
  CHECK_THROWS_AS(task_time(p), std::domain_error);
}

TEST_CASE("total time is near one second at the reference lambda_max") {
  CHECK(total_time(kReferenceConstants) == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("lambda_max") {
  const auto r = lambda_max(kReferenceConstants);
  CHECK(r.bounded);
  CHECK(r.lambda >= 11875);
  CHECK(r.lambda <= 13125);
  auto at = kReferenceConstants;
  at.rate = r.lambda;
  CHECK(total_time(at) == doctest::Approx(1.0).epsilon(1e-5));

  // gamma only: T-hat = lambda gamma (1 + m + c)
  ScalingParams g{0, 0, 1e-6, 0, 1, 0, 0};
  CHECK(lambda_max(g).lambda == doctest::Approx(1 / (1e-6 * 2)).epsilon(1e-5));
  g.confirm_probability = 1;
  CHECK(lambda_max(g).lambda == doctest::Approx(1 / (1e-6 * 3)).epsilon(1e-5));

  auto slower = kReferenceConstants;
  slower.alpha *= 2;
  slower.beta *= 2;
  CHECK(lambda_max(slower).lambda < r.lambda);

  ScalingParams free{0, 0, 0, 8, 1, 0, 0};
  CHECK_FALSE(lambda_max(free).bounded);
}

TEST_CASE("memory estimate") {
  CHECK(memory_estimate({10000, 2, 0}) == doctest::Approx(1.34e6));
  CHECK(memory_estimate({10000, 2, 8}) == doctest::Approx(5.34e6));
  for (int r = 40; r <= 100; r += 10) {
    const double mb = memory_estimate({10000, 2, double(r)}) / 1e6;
    CHECK(std::abs(mb - 0.5 * r) / (0.5 * r) <= 0.07);
  }
  CHECK(memory_estimate({20000, 2, 8}) == doctest::Approx(2 * memory_estimate({10000, 2, 8})));
  CHECK(memory_range_warning(10000, 2).has_value());
}

TEST_CASE("collision probability") {
  const auto c = collision_probability({10000, 2, 64, kCenturySeconds});
  CHECK(c.seeds_alive == 20000);
  CHECK(c.instant_probability == doctest::Approx(20000.0 * 20000 / std::ldexp(1.0, 65)));
  CHECK(c.horizon_probability >= 0.030);
  CHECK(c.horizon_probability <= 0.036);
  CHECK(c.exact_horizon == doctest::Approx(c.horizon_probability).epsilon(1e-3));
  CHECK_FALSE(c.precondition_warning);

  CHECK(collision_probability({10000, 2, 64, 0}).horizon_probability == 0.0);
  const auto small = collision_probability({10000, 2, 16, 1});
  CHECK(small.precondition_warning);
  CHECK_FALSE(small.warning.empty());
  CHECK(collision_probability({10000, 2, 72, kCenturySeconds}).horizon_probability <
        c.horizon_probability);
}

TEST_CASE("bandwidth") {
  CHECK(bandwidth_estimate(10000, 16) == 160000);
  CHECK(bandwidth_estimate(10000, 20) == 200000);
  CHECK(bandwidth_estimate(0, 20) == 0);
}

TEST_CASE("birthday Monte Carlo agrees with the product form") {
  BirthdayExperiment e;
  e.key_space = 4096;
  e.draws = 60;
  e.trials = 20000;
  const auto serial = birthday_monte_carlo_serial(e);
  const auto parallel = birthday_monte_carlo_parallel(e);
  CHECK(serial.collisions == parallel.collisions);
  const double exact = birthday_exact(e.key_space, e.draws);
  CHECK(std::abs(serial.probability - exact) <= 3 * serial.standard_error);

  // product form against a direct loop
  double miss = 1;
  for (int i = 0; i < 60; ++i) miss *= double(4096 - i) / 4096;
  CHECK(exact == doctest::Approx(1 - miss).epsilon(1e-12));
  CHECK(birthday_exact(10, 11) == 1.0);
  CHECK(birthday_exact(10, 1) == 0.0);
}

TEST_CASE("least squares") {
  std::vector<double> x{1, 2, 3, 4, 5};
  std::vector<double> y{3, 5, 7, 9, 11};
  auto f = least_squares(x, y);
  CHECK(f.slope == doctest::Approx(2));
  CHECK(f.intercept == doctest::Approx(1));
  CHECK(f.r_squared == doctest::Approx(1));

  std::vector<double> noisy{2, 1, 4, 3, 6};
  f = least_squares(x, noisy);
  CHECK(f.slope == doctest::Approx(1.0));
  CHECK(f.intercept == doctest::Approx(0.2));
  CHECK(f.r_squared == doctest::Approx(1 - 4.8 / 14.8));

  std::vector<double> one{1};
  CHECK_THROWS(least_squares(one, one));
}

TEST_CASE("benchmark smoke run") {
  BenchmarkConfig c;
  c.sizes = {100, 1000, 10000};
  c.trials = 200;
  c.replicas = 1;
  c.pin_cpu = false;
  const auto r = benchmark_constants(c);
  REQUIRE(r.samples.size() == 3);
  for (const auto& s : r.samples) {
    CHECK(s.lookup_seconds > 0);
    CHECK(s.insert_seconds > 0);
    CHECK(s.delete_seconds > 0);
  }
  CHECK(r.samples[2].delete_seconds > r.samples[0].delete_seconds);
  CHECK(r.alpha == r.lookup.slope);
}
