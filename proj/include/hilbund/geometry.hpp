#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "hilbund/types.hpp"

namespace hilbund {

// Linear subspace of R^ambient given by independent basis columns.
// rank 0 is a distinguished "empty" sentinel (full-space complements
// produce it); consumers must handle or reject it explicitly.
struct Subspace {
  int ambient_dim = 0;
  Mat basis;  // ambient_dim x rank

  Subspace() = default;
  Subspace(int ambient, Mat basis_columns);

  int rank() const { return static_cast<int>(basis.cols()); }
  bool empty() const { return rank() == 0; }

  static Subspace full(int ambient);
  static Subspace zero(int ambient);
  static Subspace span_of(int ambient, const std::vector<Vec>& vectors,
                          double rank_tol = tol::kSpan);
};

// One halfspace <normal, x> <= offset with a unit normal.
struct Facet {
  Vec normal;
  double offset = 0.0;
};

struct FacetRep {
  std::vector<Facet> facets;
};

// Origin-symmetric full-dimensional convex polytope stored by its
// irredundant vertex list. Construction validates symmetry, spanning and
// irredundancy; use convex_hull_points to canonicalize raw point clouds.
class SymmetricBody {
 public:
  SymmetricBody(int dim, std::vector<Vec> vertices);

  int dim() const { return dim_; }
  const std::vector<Vec>& vertices() const { return vertices_; }

  // Facet representation, computed on first use and cached. Copies share
  // the cache; the underlying body is immutable.
  const FacetRep& facets() const;

 private:
  int dim_;
  std::vector<Vec> vertices_;
  struct FacetCache;
  std::shared_ptr<FacetCache> cache_;
};

// Origin-centered ellipsoid {v : v' Q v <= 1} with Q symmetric positive
// definite (eigenvalues above 1e-12).
struct Ellipsoid {
  Mat gram;

  explicit Ellipsoid(Mat q);
  int dim() const { return static_cast<int>(gram.rows()); }

  static Ellipsoid unit_ball(int dim);
};

// Full-rank ellipsoid of a subspace carried together with its embedding:
// the point set {frame.basis * y : y' shape.gram y <= 1}.
struct EmbeddedEllipsoid {
  Subspace frame;
  Ellipsoid shape;

  EmbeddedEllipsoid(Subspace f, Ellipsoid s);
};

struct ContainmentResult {
  bool contained = false;
  double margin = 0.0;  // max violation of v'Qv <= 1 over the inner set
  Vec witness;          // ambient point of the inner set, set when !contained
  double witness_outer_norm = 0.0;
};

/// Minkowski functional of the body at v (LP over barycentric weights).
double gauge(const SymmetricBody& body, const Vec& v);

/// Support function h(u) = max over vertices of <u, vertex>.
double support(const SymmetricBody& body, const Vec& u);

/// Support function of the ellipsoid: sqrt(u' Q^{-1} u).
double ellipsoid_support(const Ellipsoid& ell, const Vec& u);

ContainmentResult contains(const Ellipsoid& outer, const SymmetricBody& inner,
                           double tolerance);
ContainmentResult contains(const Ellipsoid& outer, const Ellipsoid& inner,
                           double tolerance);
ContainmentResult contains(const Ellipsoid& outer,
                           const EmbeddedEllipsoid& inner, double tolerance);

// Slice body ∩ span(S) in the coordinates of S.basis: facet representation
// of the body restricted to the subspace, then vertex enumeration.
SymmetricBody intersect_subspace(const SymmetricBody& body, const Subspace& s);

// Q-orthogonal complement of S, basis Q-orthonormalized. Full-space input
// returns the rank-0 sentinel.
Subspace orthogonal_complement(const Subspace& s, const Ellipsoid& metric);

// Canonicalizing hull builder: merges duplicates (1e-9), checks symmetry,
// drops points inside the hull of the rest, and returns a valid body.
SymmetricBody convex_hull_points(int dim, const std::vector<Vec>& points);

struct EllipseMetrics {
  std::vector<double> semi_axes;          // descending
  std::optional<double> eccentricity;     // dim 2 only
};
EllipseMetrics ellipse_metrics(const Ellipsoid& ell);

namespace detail {

// Vertices of {x : A x <= b} for a bounded full-dimensional polytope,
// by basis enumeration over d-subsets of rows. Intended for dim <= 8 and
// modest row counts; throws when the subset budget would be exceeded.
std::vector<Vec> enumerate_vertices(const Mat& a, const Vec& b,
                                    double merge_tol = tol::kMerge);

// Symmetric boundary sample of an ellipsoid: axis endpoints and the
// normalized pairwise axis sums (exactly the support set whose minimal
// enclosing ellipsoid is the ellipsoid itself).
std::vector<Vec> ellipsoid_boundary_sample(const Ellipsoid& ell);

// Deduplicate points under negation: keeps one representative per
// antipodal pair, sign-canonicalized.
std::vector<Vec> antipodal_representatives(const std::vector<Vec>& points,
                                           double merge_tol = tol::kMerge);

}  // namespace detail

}  // namespace hilbund
