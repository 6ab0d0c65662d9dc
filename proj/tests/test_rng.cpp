#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hessmc/pathsim/driver.hpp"
#include "hessmc/rng.hpp"

using namespace hessmc;

TEST_CASE("counter rng replays bit-identically") {
  Vec a, b;
  const BrownianDriver d1(123, kStreamIntrinsic, 17, 0.01, 100, 3);
  const BrownianDriver d2(123, kStreamIntrinsic, 17, 0.01, 100, 3);
  for (int k = 0; k < 100; ++k) {
    d1.increments(k, a);
    d2.increments(k, b);
    for (int i = 0; i < 3; ++i) CHECK(a[i] == b[i]);
  }
}

TEST_CASE("distinct paths, steps and streams decorrelate") {
  Vec a, b;
  const BrownianDriver base(123, kStreamIntrinsic, 17, 0.01, 10, 2);
  const BrownianDriver other_path(123, kStreamIntrinsic, 18, 0.01, 10, 2);
  const BrownianDriver other_stream(123, kStreamExtrinsic, 17, 0.01, 10, 2);
  base.increments(0, a);
  other_path.increments(0, b);
  CHECK(a[0] != b[0]);
  other_stream.increments(0, b);
  CHECK(a[0] != b[0]);
  base.increments(1, b);
  CHECK(a[0] != b[0]);
}

TEST_CASE("increment moments match N(0, dt)") {
  const double dt = 0.02;
  const BrownianDriver driver(7, kStreamIntrinsic, 0, dt, 200000, 2);
  Vec incr;
  double sum = 0.0, sum2 = 0.0, cross = 0.0;
  const int n = 200000;
  for (int k = 0; k < n; ++k) {
    driver.increments(k, incr);
    sum += incr[0];
    sum2 += incr[0] * incr[0];
    cross += incr[0] * incr[1];
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 * std::sqrt(dt / n));
  CHECK(std::abs(var - dt) < 4.0 * dt * std::sqrt(2.0 / n));
  CHECK(std::abs(cross / n) < 4.0 * dt / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("coarsened driver sums consecutive fine increments") {
  const BrownianDriver fine(99, kStreamIntrinsic, 3, 0.005, 8, 2);
  const CoarsenedDriver coarse(fine, 4);
  CHECK(coarse.steps() == 2);
  CHECK(coarse.dt() == doctest::Approx(0.02));
  Vec sum = Vec::Zero(2), got, item;
  for (int j = 0; j < 4; ++j) {
    fine.increments(4 + j, item);
    sum += item;
  }
  coarse.increments(1, got);
  CHECK(got[0] == doctest::Approx(sum[0]).epsilon(1e-15));
  CHECK(got[1] == doctest::Approx(sum[1]).epsilon(1e-15));
}
