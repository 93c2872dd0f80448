#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hilbund/loewner.hpp"
#include "test_util.hpp"

using namespace hilbund;
using namespace hilbund_test;

namespace {
const MveeConfig kCfg{};
}

TEST_CASE("mvee of the cube is the circumscribed ball") {
  for (int dim = 2; dim <= 4; ++dim) {
    MveeResult res = mvee_points(cube_vertices(dim), kCfg);
    Mat expected = Mat::Identity(dim, dim) / static_cast<double>(dim);
    CHECK(max_abs(res.ellipsoid.gram - expected) <= 1e-5);
  }
}

TEST_CASE("mvee of cross-polytope vertices is the unit ball") {
  for (int dim = 1; dim <= 5; ++dim) {
    MveeResult res = mvee_points(cross_polytope_vertices(dim), kCfg);
    CHECK(max_abs(res.ellipsoid.gram - Mat::Identity(dim, dim)) <= 1e-5);
  }
}

TEST_CASE("mvee of an ellipsoid boundary sample recovers the ellipsoid") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 3);
    Ellipsoid target(random_spd(rng, dim, 6.0));
    std::vector<Vec> sample = detail::ellipsoid_boundary_sample(target);
    MveeResult res = mvee_points(sample, kCfg);
    CHECK(max_abs(res.ellipsoid.gram - target.gram) <=
          1e-4 * std::max(1.0, max_abs(target.gram)));
  }
}

TEST_CASE("mvee rejects degenerate input and honors the iteration cap") {
  CHECK_THROWS_AS(mvee_points({v2(1, 0), v2(-1, 0)}, kCfg),
                  DegenerateBodyError);
  MveeConfig tiny;
  tiny.max_iter = 1;
  std::mt19937_64 rng(37);
  std::vector<Vec> pts;
  for (int i = 0; i < 12; ++i) {
    Vec v = random_unit(rng, 3) * (1.0 + 0.3 * (i % 4));
    pts.push_back(v);
    pts.push_back(-v);
  }
  try {
    mvee_points(pts, tiny);
    // A lucky instant solve is acceptable.
  } catch (const ConvergenceError& e) {
    CHECK(e.best.ellipsoid.dim() == 3);
  }
}

TEST_CASE("mvee enclosure and monotonicity properties") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 3);
    std::vector<Vec> pts;
    const int pairs = dim + 2 + static_cast<int>(rng() % 4);
    for (int i = 0; i < pairs; ++i) {
      Vec v = random_unit(rng, dim) * (0.5 + (i % 3) * 0.4);
      pts.push_back(v);
      pts.push_back(-v);
    }
    Mat m(dim, static_cast<int>(pts.size()));
    for (size_t i = 0; i < pts.size(); ++i) m.col(static_cast<int>(i)) = pts[i];
    if (numeric_rank(m) < dim) continue;
    MveeResult small = mvee_points(pts, kCfg);
    for (const Vec& p : pts)
      CHECK(p.dot(small.ellipsoid.gram * p) <= 1.0 + kCfg.oracle_tol);

    std::vector<Vec> grown = pts;
    Vec extra = random_unit(rng, dim) * 1.8;
    grown.push_back(extra);
    grown.push_back(-extra);
    MveeResult big = mvee_points(grown, kCfg);
    const double vol_ratio =
        std::sqrt(small.ellipsoid.gram.determinant() /
                  big.ellipsoid.gram.determinant());
    CHECK(vol_ratio >= 1.0 / std::pow(1.0 + kCfg.epsilon, dim) - 1e-6);
  }
}

TEST_CASE("mvee is equivariant under linear maps") {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 2);
    std::vector<Vec> pts;
    for (int i = 0; i < dim + 3; ++i) {
      Vec v = random_unit(rng, dim) * (0.7 + 0.2 * (i % 3));
      pts.push_back(v);
      pts.push_back(-v);
    }
    Mat m(dim, static_cast<int>(pts.size()));
    for (size_t i = 0; i < pts.size(); ++i) m.col(static_cast<int>(i)) = pts[i];
    if (numeric_rank(m) < dim) continue;
    Mat t = random_spd(rng, dim, 4.0);  // SPD is invertible and well scaled
    std::vector<Vec> mapped;
    for (const Vec& p : pts) mapped.push_back(t * p);
    Mat q = mvee_points(pts, kCfg).ellipsoid.gram;
    Mat qt = mvee_points(mapped, kCfg).ellipsoid.gram;
    Mat expected = t.inverse().transpose() * q * t.inverse();
    CHECK(max_abs(qt - expected) <= 1e-4 * std::max(1.0, max_abs(expected)));
  }
}

TEST_CASE("loewner_hull is idempotent on a single ellipsoid") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 8; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 3);
    Ellipsoid e(random_spd(rng, dim, 5.0));
    MveeResult res = loewner_hull({HullGenerator(e)}, kCfg);
    CHECK(max_abs(res.ellipsoid.gram - e.gram) <= 1e-6 * max_abs(e.gram) + 1e-6);
  }
}

TEST_CASE("loewner_hull covers mixed generators with a certificate") {
  // Segment of radius 2 along e1 plus the unit disc.
  Mat seg_basis(2, 1);
  seg_basis.col(0) = v2(1, 0);
  Mat seg_gram(1, 1);
  seg_gram << 0.25;
  EmbeddedEllipsoid segment{Subspace(2, seg_basis), Ellipsoid(seg_gram)};
  std::vector<HullGenerator> gens = {HullGenerator(segment),
                                     HullGenerator(Ellipsoid::unit_ball(2))};
  MveeResult res = loewner_hull(gens, kCfg);
  CHECK(contains(res.ellipsoid, segment, 1e-6).contained);
  CHECK(contains(res.ellipsoid, Ellipsoid::unit_ball(2), 1e-6).contained);

  // Dense-sample cross check of the same hull.
  std::vector<Vec> dense;
  for (int k = 0; k < 720; ++k) {
    const double a = k * M_PI / 360.0;
    dense.push_back(v2(std::cos(a), std::sin(a)));
  }
  dense.push_back(v2(2, 0));
  dense.push_back(v2(-2, 0));
  std::vector<Vec> hull_sample;
  for (const Vec& p : dense) hull_sample.push_back(p);
  MveeResult reference = mvee_points(hull_sample, kCfg);
  CHECK(max_abs(res.ellipsoid.gram - reference.ellipsoid.gram) <= 2e-3);
}

TEST_CASE("loewner_hull of a cube and its inscribed ball is the cube's") {
  SymmetricBody cube(3, cube_vertices(3));
  Mat inner = Mat::Identity(3, 3);  // unit ball sits inside the cube
  MveeResult with_ball = loewner_hull(
      {HullGenerator(cube), HullGenerator(Ellipsoid(inner))}, kCfg);
  MveeResult alone = mvee_points(cube.vertices(), kCfg);
  CHECK(max_abs(with_ball.ellipsoid.gram - alone.ellipsoid.gram) <= 1e-6);
}

TEST_CASE("john_check distortion values") {
  SymmetricBody cube(3, cube_vertices(3));
  Mat q3 = Mat::Identity(3, 3) / 3.0;
  LoewnerCertificate cert = john_check(cube, Ellipsoid(q3));
  CHECK(cert.distortion == doctest::Approx(std::sqrt(3.0)).epsilon(1e-9));
  CHECK(cert.john_bound == doctest::Approx(std::sqrt(3.0)));

  SymmetricBody square(2, cube_vertices(2));
  LoewnerCertificate cert2 =
      john_check(square, Ellipsoid(Mat(Mat::Identity(2, 2) / 2.0)));
  CHECK(cert2.distortion == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));

  // Unit ball against itself: distortion 1 via a ball-like polytope.
  MveeConfig cfg;
  SymmetricBody octa(3, cross_polytope_vertices(3));
  LoewnerCertificate cert3 = loewner_certify(octa, cfg);
  CHECK(cert3.distortion == doctest::Approx(std::sqrt(3.0)).epsilon(1e-6));

  CHECK_THROWS_AS(john_check(cube, Ellipsoid(Mat(Mat::Identity(3, 3)))),
                  NotEnclosingError);
}

TEST_CASE("john bound holds on random polytopes") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 60; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 4);
    SymmetricBody body =
        random_symmetric_body(rng, dim, dim + 2 + static_cast<int>(rng() % 3));
    LoewnerCertificate cert = loewner_certify(body, kCfg);
    CHECK(cert.distortion <= std::sqrt(double(dim)) + 1e-3);
    CHECK(cert.distortion >= 1.0 - 1e-9);
  }
}

TEST_CASE("slice_constant closed forms") {
  SymmetricBody square(2, cube_vertices(2));
  Mat e1(2, 1);
  e1.col(0) = v2(1, 0);
  const double cs =
      slice_constant(square, Subspace(2, e1), Ellipsoid::unit_ball(2));
  CHECK(cs == doctest::Approx(2.0).epsilon(1e-9));

  CHECK(slice_constant(square, Subspace::full(2), Ellipsoid::unit_ball(2)) ==
        doctest::Approx(1.0));

  SymmetricBody l1(2, cross_polytope_vertices(2));
  CHECK(slice_constant(l1, Subspace(2, e1), Ellipsoid::unit_ball(2)) ==
        doctest::Approx(1.0).epsilon(1e-9));
}
