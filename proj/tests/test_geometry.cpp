#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hilbund/geometry.hpp"
#include "test_util.hpp"

using namespace hilbund;
using namespace hilbund_test;

namespace {

SymmetricBody l1_ball2() {
  return SymmetricBody(2, {v2(1, 0), v2(-1, 0), v2(0, 1), v2(0, -1)});
}

SymmetricBody cube3() { return SymmetricBody(3, cube_vertices(3)); }

}  // namespace

TEST_CASE("gauge matches hand values") {
  CHECK(gauge(l1_ball2(), v2(1, 1)) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(gauge(l1_ball2(), v2(0, 0)) == 0.0);
  SymmetricBody square(2, cube_vertices(2));
  CHECK(gauge(square, v2(0.5, -1)) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(gauge(square, v3(1, 0, 0)), DimensionError);
}

TEST_CASE("support matches hand values") {
  CHECK(support(cube3(), v3(1, 1, 1)) == doctest::Approx(3.0));
  CHECK(support(cube3(), Vec(Vec::Zero(3))) == 0.0);
  CHECK(support(l1_ball2(), v2(1, 1)) == doctest::Approx(1.0));
}

TEST_CASE("ellipsoid support closed forms") {
  Ellipsoid ball = Ellipsoid::unit_ball(2);
  CHECK(ellipsoid_support(ball, v2(3, 4)) == doctest::Approx(5.0));
  CHECK(ellipsoid_support(ball, v2(0, 0)) == 0.0);
  Mat q(2, 2);
  q << 0.25, 0, 0, 0.5;
  CHECK(ellipsoid_support(Ellipsoid(q), v2(1, 0)) == doctest::Approx(2.0));
  Mat bad(2, 2);
  bad << 1, 0, 0, 0;
  CHECK_THROWS_AS(Ellipsoid{bad}, DegenerateEllipsoidError);
}

TEST_CASE("gauge is a norm: homogeneity and triangle inequality") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> scalar(-3.0, 3.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 3);
    SymmetricBody body = random_symmetric_body(rng, dim, dim + 2);
    Vec u(dim), w(dim);
    for (int i = 0; i < dim; ++i) {
      u(i) = gauss(rng);
      w(i) = gauss(rng);
    }
    const double t = scalar(rng);
    CHECK(gauge(body, t * u) ==
          doctest::Approx(std::abs(t) * gauge(body, u)).epsilon(1e-9));
    CHECK(gauge(body, u + w) <= gauge(body, u) + gauge(body, w) + 1e-9);
  }
}

TEST_CASE("gauge agrees with the facet-representation dual form") {
  std::mt19937_64 rng(13);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 25; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 3);
    SymmetricBody body = random_symmetric_body(rng, dim, dim + 2);
    Vec u(dim);
    for (int i = 0; i < dim; ++i) u(i) = gauss(rng);
    double dual = 0.0;
    for (const Facet& f : body.facets())
      dual = std::max(dual, f.normal.dot(u) / f.offset);
    CHECK(gauge(body, u) == doctest::Approx(dual).epsilon(1e-9));
  }
}

TEST_CASE("facets of the cube are the coordinate halfspaces") {
  const FacetRep& rep = cube3().facets();
  CHECK(rep.facets.size() == 6);
  for (const Facet& f : rep.facets) {
    CHECK(f.offset == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(f.normal.cwiseAbs().maxCoeff() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("containment of bodies and ellipsoids") {
  Mat q(3, 3);
  q = Mat::Identity(3, 3) / 3.0;  // ball of radius sqrt(3)
  Ellipsoid ball3(q);
  ContainmentResult inside = contains(ball3, cube3(), 1e-9);
  CHECK(inside.contained);
  CHECK(inside.margin == doctest::Approx(0.0).epsilon(1e-12));

  // Ellipse with semi-axes (2, sqrt 2) in the diagonal plane of the cube.
  Mat basis(3, 2);
  basis.col(0) = v3(1, 1, 0) / std::sqrt(2.0);
  basis.col(1) = v3(0, 0, 1);
  Mat p(2, 2);
  p << 0.25, 0, 0, 0.5;
  EmbeddedEllipsoid slice_ellipse{Subspace(3, basis), Ellipsoid(p)};
  ContainmentResult out = contains(ball3, slice_ellipse, 1e-9);
  CHECK_FALSE(out.contained);
  CHECK(out.witness.norm() == doctest::Approx(2.0).epsilon(1e-9));

  CHECK(contains(ball3, ball3, 1e-9).contained);  // self containment
}

TEST_CASE("intersect_subspace: diagonal slice of the cube is a rectangle") {
  Mat basis(3, 2);
  basis.col(0) = v3(1, 1, 0) / std::sqrt(2.0);
  basis.col(1) = v3(0, 0, 1);
  SymmetricBody slice = intersect_subspace(cube3(), Subspace(3, basis));
  REQUIRE(slice.dim() == 2);
  REQUIRE(slice.vertices().size() == 4);
  double max_u = 0.0, max_v = 0.0;
  for (const Vec& w : slice.vertices()) {
    max_u = std::max(max_u, std::abs(w(0)));
    max_v = std::max(max_v, std::abs(w(1)));
  }
  CHECK(max_u == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(max_v == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("intersect_subspace: full space and axis slices") {
  SymmetricBody same = intersect_subspace(cube3(), Subspace::full(3));
  CHECK(same.vertices().size() == 8);

  SymmetricBody l1_3(3, cross_polytope_vertices(3));
  Mat e1(3, 1);
  e1.col(0) = v3(1, 0, 0);
  SymmetricBody segment = intersect_subspace(l1_3, Subspace(3, e1));
  REQUIRE(segment.dim() == 1);
  REQUIRE(segment.vertices().size() == 2);
  CHECK(std::abs(segment.vertices()[0](0)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("slice re-embedding is isometric for the gauge") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int trial = 0; trial < 15; ++trial) {
    const int dim = 3;
    SymmetricBody body = random_symmetric_body(rng, dim, 6);
    Mat basis(3, 2);
    for (int c = 0; c < 2; ++c) basis.col(c) = random_unit(rng, 3);
    if (numeric_rank(basis) < 2) continue;
    Subspace s(3, basis);
    SymmetricBody slice = intersect_subspace(body, s);
    Vec u(2);
    u << gauss(rng), gauss(rng);
    const double inner_gauge = gauge(slice, u);
    const double outer_gauge = gauge(body, Vec(s.basis * u));
    CHECK(inner_gauge == doctest::Approx(outer_gauge).epsilon(1e-9));
  }
}

TEST_CASE("orthogonal complement in a reference inner product") {
  Subspace e1 = Subspace(2, Mat(v2(1, 0)));
  Subspace perp = orthogonal_complement(e1, Ellipsoid::unit_ball(2));
  REQUIRE(perp.rank() == 1);
  CHECK(std::abs(perp.basis(0, 0)) <= 1e-12);

  Mat q(2, 2);
  q << 1, 0.5, 0.5, 1;
  Subspace skew = orthogonal_complement(e1, Ellipsoid(q));
  REQUIRE(skew.rank() == 1);
  // Solve 1*v1 + 0.5*v2 = 0: direction (-0.5, 1) up to scale.
  CHECK(skew.basis(0, 0) / skew.basis(1, 0) == doctest::Approx(-0.5).epsilon(1e-9));

  CHECK(orthogonal_complement(Subspace::full(2), Ellipsoid::unit_ball(2)).empty());

  // Q-orthogonality and rank additivity on random data.
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = 2 + static_cast<int>(rng() % 4);
    const int rank = 1 + static_cast<int>(rng() % (dim - 1));
    Mat basis(dim, rank);
    for (int c = 0; c < rank; ++c) basis.col(c) = random_unit(rng, dim);
    if (numeric_rank(basis) < rank) continue;
    Ellipsoid metric(random_spd(rng, dim));
    Subspace s(dim, basis);
    Subspace p = orthogonal_complement(s, metric);
    CHECK(p.rank() == dim - rank);
    CHECK(max_abs(s.basis.transpose() * metric.gram * p.basis) <= 1e-12);
  }
}

TEST_CASE("convex hull removes interior and boundary points") {
  std::vector<Vec> pts = {v2(1, 0), v2(-1, 0), v2(0, 1),
                          v2(0, -1), v2(0.5, 0.5), v2(-0.5, -0.5)};
  SymmetricBody hull = convex_hull_points(2, pts);
  CHECK(hull.vertices().size() == 4);  // the midpoint pair sits on an edge

  std::vector<Vec> cube_and_inner = cube_vertices(3);
  for (const Vec& v : cross_polytope_vertices(3))
    cube_and_inner.push_back(0.5 * v);
  CHECK(convex_hull_points(3, cube_and_inner).vertices().size() == 8);

  CHECK_THROWS_AS(convex_hull_points(2, {v2(1, 0), v2(-1, 0)}),
                  DegenerateBodyError);
  CHECK_THROWS_AS(convex_hull_points(2, {v2(1, 0), v2(0, 1)}),
                  DegenerateBodyError);
  SymmetricBody segment = convex_hull_points(1, {Vec(Vec::Ones(1)), Vec(-Vec::Ones(1))});
  CHECK(segment.vertices().size() == 2);
}

TEST_CASE("ellipse metrics: semi-axes and eccentricity") {
  Mat q(2, 2);
  q << 0.25, 0, 0, 0.5;
  EllipseMetrics m = ellipse_metrics(Ellipsoid(q));
  CHECK(m.semi_axes[0] == doctest::Approx(2.0));
  CHECK(m.semi_axes[1] == doctest::Approx(std::sqrt(2.0)));
  CHECK(*m.eccentricity == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));

  EllipseMetrics ball = ellipse_metrics(Ellipsoid::unit_ball(2));
  CHECK(*ball.eccentricity == doctest::Approx(0.0));

  Mat q2(2, 2);
  q2 << 1, 0, 0, 4;
  EllipseMetrics m2 = ellipse_metrics(Ellipsoid(q2));
  CHECK(m2.semi_axes[0] == doctest::Approx(1.0));
  CHECK(m2.semi_axes[1] == doctest::Approx(0.5));
  CHECK(*m2.eccentricity == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-9));
}

TEST_CASE("symmetric body construction rejects invalid input") {
  CHECK_THROWS_AS(SymmetricBody(2, {v2(1, 0), v2(0, 1)}), ValidationError);
  CHECK_THROWS_AS(SymmetricBody(2, {v2(1, 0), v2(-1, 0)}), ValidationError);
  std::vector<Vec> redundant = {v2(1, 0), v2(-1, 0), v2(0, 1), v2(0, -1),
                                v2(0.2, 0.2), v2(-0.2, -0.2)};
  CHECK_THROWS_AS(SymmetricBody(2, redundant), ValidationError);
}
