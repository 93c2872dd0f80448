#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hilbund/seminorm.hpp"
#include "test_util.hpp"

using namespace hilbund;
using namespace hilbund_test;

namespace {

Seminorm hilbert(const Mat& q) { return Seminorm(HilbertNorm(q)); }

Seminorm random_seminorm(std::mt19937_64& rng, int dim, int depth = 2) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  if (depth == 0 || unif(rng) < 0.4) {
    if (unif(rng) < 0.5) return hilbert(random_spd(rng, dim, 6.0));
    return Seminorm(random_symmetric_body(rng, dim, dim + 2));
  }
  const double ps[] = {1.0, 2.0, 3.0};
  return Seminorm(ps[rng() % 3], unif(rng), random_seminorm(rng, dim, depth - 1),
                  random_seminorm(rng, dim, depth - 1));
}

}  // namespace

TEST_CASE("lp_combine closed forms") {
  Mat d19(2, 2);
  d19 << 1, 0, 0, 9;
  Seminorm mixed = lp_combine(2.0, 0.5, hilbert(Mat(Mat::Identity(2, 2))),
                              hilbert(d19));
  REQUIRE(mixed.is_hilbert());
  Mat expected(2, 2);
  expected << 1, 0, 0, 5;
  CHECK(max_abs(mixed.hilbert().gram - expected) <= 1e-15);

  Seminorm left = hilbert(Mat(2.0 * Mat::Identity(2, 2)));
  Seminorm endpoint = lp_combine(3.0, 1.0, left, hilbert(d19));
  CHECK(eval(endpoint, v2(1, 2)) == doctest::Approx(eval(left, v2(1, 2))));

  SymmetricBody l1(2, cross_polytope_vertices(2));
  Seminorm idem = lp_combine(1.0, 0.5, Seminorm(l1), Seminorm(l1));
  CHECK(eval(idem, v2(0.3, -0.7)) ==
        doctest::Approx(gauge(l1, v2(0.3, -0.7))).epsilon(1e-12));
}

TEST_CASE("eval dispatches across the union") {
  CHECK(eval(hilbert(Mat(Mat::Identity(2, 2))), v2(3, 4)) ==
        doctest::Approx(5.0));
  SymmetricBody l1(2, cross_polytope_vertices(2));
  CHECK(eval(Seminorm(l1), v2(1, 1)) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK_THROWS_AS(eval(hilbert(Mat(Mat::Identity(2, 2))), v3(1, 1, 1)),
                  DimensionError);
}

TEST_CASE("barycentric axioms at p in {1, 2, 3}") {
  std::mt19937_64 rng(61);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double ps[] = {1.0, 2.0, 3.0};
  for (int trial = 0; trial < 300; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 2);
    const double p = ps[rng() % 3];
    const double lambda = unif(rng);
    Seminorm s = random_seminorm(rng, dim, 1);
    Seminorm t = random_seminorm(rng, dim, 1);
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = gauss(rng);

    // Idempotence, endpoints, skew-symmetry.
    CHECK(eval(lp_combine(p, lambda, s, s), v) ==
          doctest::Approx(eval(s, v)).epsilon(1e-12));
    CHECK(eval(lp_combine(p, 1.0, s, t), v) == doctest::Approx(eval(s, v)));
    CHECK(eval(lp_combine(p, 0.0, s, t), v) == doctest::Approx(eval(t, v)));
    CHECK(eval(lp_combine(p, lambda, s, t), v) ==
          doctest::Approx(eval(lp_combine(p, 1.0 - lambda, t, s), v))
              .epsilon(1e-12));
  }
}

TEST_CASE("lp_combine outputs are seminorms") {
  std::mt19937_64 rng(67);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 2);
    Seminorm s = random_seminorm(rng, dim);
    Vec u(dim), w(dim);
    for (int i = 0; i < dim; ++i) {
      u(i) = gauss(rng);
      w(i) = gauss(rng);
    }
    const double t = 4.0 * unif(rng) - 2.0;
    CHECK(eval(s, t * u) ==
          doctest::Approx(std::abs(t) * eval(s, u)).epsilon(1e-9));
    CHECK(eval(s, u + w) <= eval(s, u) + eval(s, w) + 1e-9);
  }
}

TEST_CASE("l2 hull membership with certificates") {
  std::vector<HilbertNorm> gens;
  gens.emplace_back(Mat(Mat::Identity(2, 2)));
  Mat d19(2, 2);
  d19 << 1, 0, 0, 9;
  gens.emplace_back(d19);
  HilbertNormSet k(gens);

  Mat d15(2, 2);
  d15 << 1, 0, 0, 5;
  MembershipResult in = l2_hull_membership(HilbertNorm(d15), k, 1e-9);
  REQUIRE(in.member);
  CHECK(in.lambda(0) == doctest::Approx(0.5).epsilon(1e-7));
  CHECK(in.lambda(1) == doctest::Approx(0.5).epsilon(1e-7));

  MembershipResult self = l2_hull_membership(gens[0], HilbertNormSet({gens[0]}),
                                             1e-9);
  REQUIRE(self.member);
  CHECK(self.lambda(0) == doctest::Approx(1.0));

  Mat d22(2, 2);
  d22 << 2, 0, 0, 2;
  MembershipResult out = l2_hull_membership(HilbertNorm(d22), k, 1e-9);
  REQUIRE_FALSE(out.member);
  CHECK(out.residual_linf > 0.5);
  CHECK(out.separation_margin > 0.0);
  // The separating functional is strictly smaller at the query than at
  // every generator.
  const double at_q = (out.separating.array() * d22.array()).sum();
  for (const HilbertNorm& g : k.generators)
    CHECK((out.separating.array() * g.gram.array()).sum() > at_q);
}

TEST_CASE("membership holds for every generator and hull samples") {
  std::mt19937_64 rng(71);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 2);
    std::vector<HilbertNorm> gens;
    const int count = 2 + static_cast<int>(rng() % 3);
    for (int i = 0; i < count; ++i) gens.emplace_back(random_spd(rng, dim, 8.0));
    HilbertNormSet k(gens);
    for (const HilbertNorm& g : k.generators)
      CHECK(l2_hull_membership(g, k, 1e-8).member);
    // Random simplex combination stays inside.
    Vec lambda(count);
    for (int i = 0; i < count; ++i) lambda(i) = -std::log(unif(rng) + 1e-12);
    lambda /= lambda.sum();
    Mat combo = Mat::Zero(dim, dim);
    for (int i = 0; i < count; ++i) combo += lambda(i) * gens[static_cast<size_t>(i)].gram;
    CHECK(l2_hull_membership(HilbertNorm(combo), k, 1e-8).member);
  }
}

TEST_CASE("distortion closed forms") {
  SymmetricBody cube(3, cube_vertices(3));
  DistortionReport rep =
      distortion(Seminorm(cube), hilbert(Mat(Mat::Identity(3, 3) / 3.0)));
  CHECK(rep.distortion == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));

  Seminorm a = hilbert(Mat(Mat::Identity(2, 2)));
  CHECK(distortion(a, a).distortion == doctest::Approx(1.0));

  DistortionReport scaled =
      distortion(a, hilbert(Mat(4.0 * Mat::Identity(2, 2))));
  CHECK(scaled.distortion == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(scaled.lower_scale == doctest::Approx(2.0));
  CHECK(scaled.upper_scale == doctest::Approx(0.5));
}

TEST_CASE("distortion chains submultiplicatively") {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 2);
    Seminorm a = random_seminorm(rng, dim, 0);
    Seminorm b = random_seminorm(rng, dim, 0);
    Seminorm c = random_seminorm(rng, dim, 0);
    const double ab = distortion(a, b).distortion;
    const double bc = distortion(b, c).distortion;
    const double ac = distortion(a, c).distortion;
    CHECK(ab * bc >= ac - 1e-9);
  }
}

TEST_CASE("distortion rejects degenerate norms") {
  Mat psd(2, 2);
  psd << 1, 0, 0, 0;
  HilbertNorm semi(psd);
  CHECK_FALSE(semi.full_rank);
  CHECK_THROWS_AS(distortion(Seminorm(semi), hilbert(Mat(Mat::Identity(2, 2)))),
                  DegenerateNormError);
}
