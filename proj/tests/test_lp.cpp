#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "hilbund/lp.hpp"
#include "test_util.hpp"

using namespace hilbund;
using namespace hilbund_test;

TEST_CASE("simplex solves a textbook maximization") {
  // max x + y s.t. x + 2y <= 4, 3x + y <= 6.
  Mat a(2, 2);
  a << 1, 2, 3, 1;
  Vec b(2);
  b << 4, 6;
  Vec c(2);
  c << 1, 1;
  LpResult res = solve_lp(a, b, c);
  REQUIRE(res.status == LpResult::Status::Optimal);
  CHECK(res.value == doctest::Approx(2.8).epsilon(1e-10));  // x=8/5, y=6/5
  CHECK(res.x(0) == doctest::Approx(1.6));
  CHECK(res.x(1) == doctest::Approx(1.2));
}

TEST_CASE("simplex detects infeasibility and unboundedness") {
  Mat a(2, 1);
  a << 1, -1;
  Vec b(2);
  b << 1, -3;  // x <= 1 and x >= 3
  Vec c = Vec::Ones(1);
  CHECK(solve_lp(a, b, c).status == LpResult::Status::Infeasible);

  Mat a2(1, 2);
  a2 << 1, -1;
  Vec b2 = Vec::Ones(1);
  Vec c2(2);
  c2 << 0, 1;  // y unbounded above
  CHECK(solve_lp(a2, b2, c2).status == LpResult::Status::Unbounded);
}

TEST_CASE("min-sum combination recovers the l1 gauge") {
  Mat pts(2, 4);
  pts.col(0) = v2(1, 0);
  pts.col(1) = v2(-1, 0);
  pts.col(2) = v2(0, 1);
  pts.col(3) = v2(0, -1);
  LpResult res = min_sum_nonneg_combination(pts, v2(1, 1));
  REQUIRE(res.status == LpResult::Status::Optimal);
  CHECK(res.value == doctest::Approx(2.0).epsilon(1e-10));

  // A target outside the cone of one-sided points is infeasible.
  Mat half(2, 2);
  half.col(0) = v2(1, 0);
  half.col(1) = v2(0, 1);
  CHECK(min_sum_nonneg_combination(half, v2(-1, -1)).status ==
        LpResult::Status::Infeasible);
}

TEST_CASE("simplex least squares projects onto the column simplex") {
  // Columns I and diag(1,9) vectorized; the target diag(1,5) is the
  // midpoint.
  Mat a(4, 2);
  a.col(0) << 1, 0, 0, 1;
  a.col(1) << 1, 0, 0, 9;
  Vec b(4);
  b << 1, 0, 0, 5;
  SimplexLsResult res = simplex_least_squares(a, b);
  CHECK(res.residual == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(res.lambda(0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(res.lambda(1) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("simplex least squares finds boundary projections") {
  // Target beyond one endpoint projects to that endpoint.
  Mat a(2, 2);
  a.col(0) = v2(0, 0);
  a.col(1) = v2(1, 0);
  Vec b = v2(2, 0);
  SimplexLsResult res = simplex_least_squares(a, b);
  CHECK(res.lambda(1) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(res.residual == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("simplex least squares matches an exhaustive grid on random data") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    Mat a(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) a(i, j) = gauss(rng);
    Vec b(3);
    for (int i = 0; i < 3; ++i) b(i) = gauss(rng);
    SimplexLsResult res = simplex_least_squares(a, b);
    // Dense grid over the 2-simplex as an independent optimum oracle.
    double best = 1e300;
    const int steps = 60;
    for (int i = 0; i <= steps; ++i)
      for (int j = 0; j + i <= steps; ++j) {
        Vec lambda(3);
        lambda << double(i) / steps, double(j) / steps,
            double(steps - i - j) / steps;
        best = std::min(best, (a * lambda - b).norm());
      }
    CHECK(res.residual <= best + 1e-3);
    CHECK(res.lambda.minCoeff() >= -1e-12);
    CHECK(res.lambda.sum() == doctest::Approx(1.0).epsilon(1e-10));
  }
}
