// Exact-ish primitives for origin-symmetric convex bodies in low dimension.

#include "hilbund/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "hilbund/lp.hpp"

namespace hilbund {

namespace {

Mat vertices_as_columns(const std::vector<Vec>& vs, int dim) {
  Mat m(dim, static_cast<int>(vs.size()));
  for (size_t i = 0; i < vs.size(); ++i) m.col(static_cast<int>(i)) = vs[i];
  return m;
}

bool near(const Vec& a, const Vec& b, double tolerance) {
  return (a - b).lpNorm<Eigen::Infinity>() <= tolerance;
}

std::vector<Vec> merge_points(const std::vector<Vec>& pts, double tolerance) {
  std::vector<Vec> out;
  for (const Vec& p : pts) {
    bool seen = false;
    for (const Vec& q : out)
      if (near(p, q, tolerance)) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(p);
  }
  return out;
}

// Deterministic ordering of points for reproducible vertex lists.
void sort_points(std::vector<Vec>& pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    for (int i = 0; i < a.size(); ++i) {
      if (a(i) < b(i) - 1e-15) return true;
      if (a(i) > b(i) + 1e-15) return false;
    }
    return false;
  });
}

void check_vector_dim(const Vec& v, int dim, const char* what) {
  if (v.size() != dim)
    throw DimensionError(dim_mismatch_msg(what, dim, static_cast<int>(v.size())));
}

uint64_t binomial_capped(int n, int k, uint64_t cap) {
  uint64_t r = 1;
  for (int i = 0; i < k; ++i) {
    r = r * static_cast<uint64_t>(n - i) / static_cast<uint64_t>(i + 1);
    if (r > cap) return cap + 1;
  }
  return r;
}

}  // namespace

// ---------------------------------------------------------------------------
// Subspace

Subspace::Subspace(int ambient, Mat basis_columns)
    : ambient_dim(ambient), basis(std::move(basis_columns)) {
  require(ambient_dim >= 1, "Subspace: ambient dimension must be positive");
  if (basis.size() == 0) {
    basis = Mat(ambient_dim, 0);
    return;
  }
  require(basis.rows() == ambient_dim,
          "Subspace: basis vectors must have the ambient dimension");
  const int r = numeric_rank(basis);
  require(r == basis.cols(), "Subspace: basis columns must be independent");
}

Subspace Subspace::full(int ambient) {
  return Subspace(ambient, Mat::Identity(ambient, ambient));
}

Subspace Subspace::zero(int ambient) { return Subspace(ambient, Mat(ambient, 0)); }

Subspace Subspace::span_of(int ambient, const std::vector<Vec>& vectors,
                           double rank_tol) {
  Mat m(ambient, static_cast<int>(vectors.size()));
  for (size_t i = 0; i < vectors.size(); ++i) {
    require(vectors[i].size() == ambient, "span_of: vector dimension mismatch");
    m.col(static_cast<int>(i)) = vectors[i];
  }
  if (vectors.empty()) return zero(ambient);
  Eigen::ColPivHouseholderQR<Mat> qr(m);
  qr.setThreshold(rank_tol);
  const int r = static_cast<int>(qr.rank());
  if (r == 0) return zero(ambient);
  Mat q = qr.householderQ() * Mat::Identity(ambient, r);
  return Subspace(ambient, q);
}

// ---------------------------------------------------------------------------
// SymmetricBody

struct SymmetricBody::FacetCache {
  std::mutex mutex;
  std::shared_ptr<const FacetRep> rep;
};

SymmetricBody::SymmetricBody(int dim, std::vector<Vec> vertices)
    : dim_(dim), vertices_(std::move(vertices)), cache_(std::make_shared<FacetCache>()) {
  require(dim_ >= 1 && dim_ <= tol::kMaxDim,
          "SymmetricBody: dimension must be in [1, 8]");
  require(!vertices_.empty(), "SymmetricBody: empty vertex list");
  for (const Vec& v : vertices_) {
    require(v.size() == dim_, "SymmetricBody: vertex dimension mismatch");
    require(all_finite(v), "SymmetricBody: non-finite vertex");
  }
  // Origin symmetry: every vertex has its negation in the list.
  for (const Vec& v : vertices_) {
    bool found = false;
    for (const Vec& w : vertices_)
      if (near(w, Vec(-v), tol::kMerge)) {
        found = true;
        break;
      }
    require(found, "SymmetricBody: vertex set not closed under negation");
  }
  Mat m = vertices_as_columns(vertices_, dim_);
  require(numeric_rank(m) == dim_, "SymmetricBody: vertices do not span");
  // Irredundancy: no vertex lies in the hull of the others.
  for (size_t i = 0; i < vertices_.size(); ++i) {
    Mat others(dim_, static_cast<int>(vertices_.size()) - 1);
    int k = 0;
    for (size_t j = 0; j < vertices_.size(); ++j)
      if (j != i) others.col(k++) = vertices_[j];
    // Infeasible means the vertex is outside the cone of the rest, hence
    // certainly extreme; otherwise its gauge must exceed 1.
    LpResult lp = min_sum_nonneg_combination(others, vertices_[i]);
    require(lp.status != LpResult::Status::Optimal ||
                lp.value > 1.0 + tol::kMerge,
            "SymmetricBody: redundant vertex present");
  }
  sort_points(vertices_);
}

namespace {

// Facets of a symmetric full-dimensional polytope via its polar body:
// vertices of {y : <v_i, y> <= 1} are exactly the facet normals (scaled).
FacetRep compute_facets(int dim, const std::vector<Vec>& vertices) {
  Mat a(static_cast<int>(vertices.size()), dim);
  for (size_t i = 0; i < vertices.size(); ++i)
    a.row(static_cast<int>(i)) = vertices[i].transpose();
  Vec b = Vec::Ones(a.rows());
  std::vector<Vec> polar_vertices = detail::enumerate_vertices(a, b);
  internal_check(!polar_vertices.empty(), "polar body has no vertices");
  FacetRep rep;
  for (const Vec& y : polar_vertices) {
    const double len = y.norm();
    internal_check(len > tol::kSpan, "polar vertex at origin");
    rep.facets.push_back(Facet{y / len, 1.0 / len});
  }
  return rep;
}

}  // namespace

const FacetRep& SymmetricBody::facets() const {
  std::lock_guard<std::mutex> lock(cache_->mutex);
  if (!cache_->rep)
    cache_->rep = std::make_shared<const FacetRep>(compute_facets(dim_, vertices_));
  return *cache_->rep;
}

// ---------------------------------------------------------------------------
// Ellipsoid

Ellipsoid::Ellipsoid(Mat q) : gram(std::move(q)) {
  require(gram.rows() >= 1 && gram.rows() == gram.cols(),
          "Ellipsoid: Gram matrix must be square and nonempty");
  if (max_abs(gram - gram.transpose()) > tol::kSym)
    throw DegenerateEllipsoidError("Ellipsoid: Gram matrix not symmetric");
  gram = symmetrized(gram);
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 1e-12)
    throw DegenerateEllipsoidError(
        "Ellipsoid: Gram matrix not positive definite");
}

Ellipsoid Ellipsoid::unit_ball(int dim) { return Ellipsoid(Mat::Identity(dim, dim)); }

EmbeddedEllipsoid::EmbeddedEllipsoid(Subspace f, Ellipsoid s)
    : frame(std::move(f)), shape(std::move(s)) {
  require(!frame.empty(), "EmbeddedEllipsoid: empty frame");
  require(frame.rank() == shape.dim(),
          "EmbeddedEllipsoid: frame rank must match shape dimension");
}

// ---------------------------------------------------------------------------
// Gauges and supports

double gauge(const SymmetricBody& body, const Vec& v) {
  check_vector_dim(v, body.dim(), "gauge");
  const double scale = v.lpNorm<Eigen::Infinity>();
  if (scale == 0.0) return 0.0;
  Mat cols = vertices_as_columns(body.vertices(), body.dim());
  LpResult lp = min_sum_nonneg_combination(cols, v / scale);
  internal_check(lp.status == LpResult::Status::Optimal,
                 "gauge LP unsolved for a spanning symmetric body");
  return lp.value * scale;
}

double support(const SymmetricBody& body, const Vec& u) {
  check_vector_dim(u, body.dim(), "support");
  double h = 0.0;
  for (const Vec& v : body.vertices()) h = std::max(h, u.dot(v));
  return h;
}

double ellipsoid_support(const Ellipsoid& ell, const Vec& u) {
  check_vector_dim(u, ell.dim(), "ellipsoid_support");
  Eigen::LDLT<Mat> ldlt(ell.gram);
  if (ldlt.info() != Eigen::Success)
    throw DegenerateEllipsoidError("ellipsoid_support: Gram not factorizable");
  const double q = u.dot(ldlt.solve(u));
  return q <= 0.0 ? 0.0 : std::sqrt(q);
}

// ---------------------------------------------------------------------------
// Containment

ContainmentResult contains(const Ellipsoid& outer, const SymmetricBody& inner,
                           double tolerance) {
  require(tolerance > 0.0, "contains: tolerance must be positive");
  if (outer.dim() != inner.dim())
    throw DimensionError(dim_mismatch_msg("contains", outer.dim(), inner.dim()));
  ContainmentResult res;
  res.contained = true;
  double worst = 0.0;
  const Vec* worst_vertex = nullptr;
  for (const Vec& v : inner.vertices()) {
    const double q = v.dot(outer.gram * v);
    if (q > worst) {
      worst = q;
      worst_vertex = &v;
    }
  }
  res.margin = worst - 1.0;
  if (worst > 1.0 + tolerance) {
    res.contained = false;
    res.witness = *worst_vertex;
    res.witness_outer_norm = std::sqrt(worst);
  }
  return res;
}

ContainmentResult contains(const Ellipsoid& outer, const Ellipsoid& inner,
                           double tolerance) {
  if (outer.dim() != inner.dim())
    throw DimensionError(dim_mismatch_msg("contains", outer.dim(), inner.dim()));
  return contains(outer, EmbeddedEllipsoid(Subspace::full(inner.dim()), inner),
                  tolerance);
}

ContainmentResult contains(const Ellipsoid& outer,
                           const EmbeddedEllipsoid& inner, double tolerance) {
  require(tolerance > 0.0, "contains: tolerance must be positive");
  if (outer.dim() != inner.frame.ambient_dim)
    throw DimensionError(dim_mismatch_msg("contains", outer.dim(),
                                          inner.frame.ambient_dim));
  // max x'Qx over the embedded ellipsoid is the top generalized eigenvalue
  // of (B'QB, P); the maximizing boundary point is the scaled eigenvector.
  const Mat& b = inner.frame.basis;
  Mat restricted = symmetrized(b.transpose() * outer.gram * b);
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(restricted,
                                                    inner.shape.gram);
  if (ges.info() != Eigen::Success)
    throw DegenerateEllipsoidError("contains: generalized eigensolve failed");
  const int top = inner.shape.dim() - 1;
  const double lambda_max = ges.eigenvalues()(top);
  ContainmentResult res;
  res.margin = lambda_max - 1.0;
  res.contained = lambda_max <= 1.0 + tolerance;
  if (!res.contained) {
    Vec y = ges.eigenvectors().col(top);
    const double scale = std::sqrt(y.dot(inner.shape.gram * y));
    internal_check(scale > 0.0, "containment witness degenerate");
    y /= scale;
    res.witness = b * y;
    res.witness_outer_norm = std::sqrt(std::max(0.0, res.witness.dot(outer.gram * res.witness)));
  }
  return res;
}

// ---------------------------------------------------------------------------
// Halfspace vertex enumeration

namespace detail {

std::vector<Vec> enumerate_vertices(const Mat& a, const Vec& b,
                                    double merge_tol) {
  const int m = static_cast<int>(a.rows());
  const int d = static_cast<int>(a.cols());
  internal_check(m >= d && d >= 1, "enumerate_vertices: underdetermined system");
  constexpr uint64_t kSubsetBudget = 6'000'000;
  if (binomial_capped(m, d, kSubsetBudget) > kSubsetBudget)
    throw InternalError("enumerate_vertices: subset budget exceeded (" +
                        std::to_string(m) + " rows in dim " +
                        std::to_string(d) + ")");

  std::vector<Vec> found;
  std::vector<int> idx(d);
  for (int i = 0; i < d; ++i) idx[i] = i;

  Mat sub(d, d);
  Vec rhs(d);
  const double feas_tol = merge_tol;
  for (;;) {
    for (int i = 0; i < d; ++i) {
      sub.row(i) = a.row(idx[i]);
      rhs(i) = b(idx[i]);
    }
    Eigen::FullPivLU<Mat> lu(sub);
    lu.setThreshold(1e-9);
    if (lu.rank() == d) {
      Vec x = lu.solve(rhs);
      if (x.allFinite() && ((a * x).array() <= b.array() + feas_tol).all())
        found.push_back(x);
    }
    // next d-combination
    int k = d - 1;
    while (k >= 0 && idx[k] == m - d + k) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
  }
  std::vector<Vec> merged = merge_points(found, merge_tol);
  sort_points(merged);
  return merged;
}

std::vector<Vec> ellipsoid_boundary_sample(const Ellipsoid& ell) {
  Eigen::SelfAdjointEigenSolver<Mat> es(ell.gram);
  internal_check(es.info() == Eigen::Success, "boundary sample eigensolve");
  const int d = ell.dim();
  std::vector<Vec> pts;
  std::vector<Vec> axes(d);
  for (int i = 0; i < d; ++i) {
    axes[i] = es.eigenvectors().col(i) / std::sqrt(es.eigenvalues()(i));
    pts.push_back(axes[i]);
    pts.push_back(-axes[i]);
  }
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      Vec s = (axes[i] + axes[j]) * inv_sqrt2;
      Vec t = (axes[i] - axes[j]) * inv_sqrt2;
      pts.push_back(s);
      pts.push_back(-s);
      pts.push_back(t);
      pts.push_back(-t);
    }
  return pts;
}

std::vector<Vec> antipodal_representatives(const std::vector<Vec>& points,
                                           double merge_tol) {
  std::vector<Vec> reps;
  for (const Vec& p : points) {
    Vec canon = p;
    for (int i = 0; i < canon.size(); ++i) {
      if (canon(i) > merge_tol) break;
      if (canon(i) < -merge_tol) {
        canon = -canon;
        break;
      }
    }
    bool seen = false;
    for (const Vec& q : reps)
      if (near(canon, q, merge_tol)) {
        seen = true;
        break;
      }
    if (!seen) reps.push_back(canon);
  }
  sort_points(reps);
  return reps;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Slices, complements, hulls

SymmetricBody intersect_subspace(const SymmetricBody& body, const Subspace& s) {
  if (s.ambient_dim != body.dim())
    throw DimensionError(
        dim_mismatch_msg("intersect_subspace", body.dim(), s.ambient_dim));
  require(!s.empty(), "intersect_subspace: empty subspace");
  if (s.rank() == body.dim()) {
    // Full-space slice in possibly non-identity coordinates.
    Eigen::FullPivLU<Mat> lu(s.basis);
    std::vector<Vec> verts;
    verts.reserve(body.vertices().size());
    for (const Vec& v : body.vertices()) verts.push_back(lu.solve(v));
    return SymmetricBody(body.dim(), std::move(verts));
  }
  const FacetRep& rep = body.facets();
  Mat a(static_cast<int>(rep.facets.size()), s.rank());
  Vec b(a.rows());
  for (size_t i = 0; i < rep.facets.size(); ++i) {
    a.row(static_cast<int>(i)) = (s.basis.transpose() * rep.facets[i].normal).transpose();
    b(static_cast<int>(i)) = rep.facets[i].offset;
  }
  std::vector<Vec> verts = detail::enumerate_vertices(a, b);
  internal_check(!verts.empty(), "intersect_subspace: empty slice interior");
  return SymmetricBody(s.rank(), std::move(verts));
}

Subspace orthogonal_complement(const Subspace& s, const Ellipsoid& metric) {
  if (s.ambient_dim != metric.dim())
    throw DimensionError(dim_mismatch_msg("orthogonal_complement",
                                          metric.dim(), s.ambient_dim));
  const int d = s.ambient_dim;
  if (s.empty()) return Subspace::full(d);
  if (s.rank() == d) return Subspace::zero(d);
  // kernel of B' Q, then Gram-Schmidt in the Q inner product.
  Mat bq = s.basis.transpose() * metric.gram;
  Eigen::FullPivLU<Mat> lu(bq);
  lu.setThreshold(tol::kSpan);
  Mat kernel = lu.kernel();
  internal_check(kernel.cols() == d - s.rank(),
                 "orthogonal_complement: unexpected kernel rank");
  Mat q(d, kernel.cols());
  for (int j = 0; j < kernel.cols(); ++j) {
    Vec v = kernel.col(j);
    for (int i = 0; i < j; ++i) v -= q.col(i).dot(metric.gram * v) * q.col(i);
    const double norm_q = std::sqrt(v.dot(metric.gram * v));
    internal_check(norm_q > tol::kSpan, "orthogonal_complement: collapse");
    q.col(j) = v / norm_q;
  }
  return Subspace(d, q);
}

SymmetricBody convex_hull_points(int dim, const std::vector<Vec>& points) {
  require(dim >= 1 && dim <= tol::kMaxDim,
          "convex_hull_points: dimension must be in [1, 8]");
  for (const Vec& p : points) {
    if (p.size() != dim)
      throw DimensionError(dim_mismatch_msg("convex_hull_points", dim,
                                            static_cast<int>(p.size())));
    if (!all_finite(p))
      throw DegenerateBodyError("convex_hull_points: non-finite point");
  }
  std::vector<Vec> pts = merge_points(points, tol::kMerge);
  // Drop the origin if present; it is never a vertex of a symmetric body.
  pts.erase(std::remove_if(pts.begin(), pts.end(),
                           [](const Vec& p) {
                             return p.lpNorm<Eigen::Infinity>() <= tol::kMerge;
                           }),
            pts.end());
  if (pts.empty())
    throw DegenerateBodyError("convex_hull_points: no nonzero points");
  for (const Vec& p : pts) {
    bool found = false;
    for (const Vec& q : pts)
      if (near(q, Vec(-p), tol::kMerge)) {
        found = true;
        break;
      }
    if (!found)
      throw DegenerateBodyError(
          "convex_hull_points: point set not symmetric under negation");
  }
  if (numeric_rank(vertices_as_columns(pts, dim)) != dim)
    throw DegenerateBodyError("convex_hull_points: points do not span");

  // Peel redundant points: p is redundant iff its gauge w.r.t. the others
  // is <= 1. Iterate until stable so ties on boundaries resolve cleanly.
  sort_points(pts);
  bool changed = true;
  while (changed && pts.size() > 1) {
    changed = false;
    for (size_t i = 0; i < pts.size(); ++i) {
      Mat others(dim, static_cast<int>(pts.size()) - 1);
      int k = 0;
      for (size_t j = 0; j < pts.size(); ++j)
        if (j != i) others.col(k++) = pts[j];
      if (numeric_rank(others) < dim) continue;
      LpResult lp = min_sum_nonneg_combination(others, pts[i]);
      if (lp.status == LpResult::Status::Optimal &&
          lp.value <= 1.0 + tol::kMerge) {
        // Keep symmetry: remove the antipode in the same sweep.
        Vec neg = -pts[i];
        pts.erase(pts.begin() + static_cast<long>(i));
        pts.erase(std::remove_if(pts.begin(), pts.end(),
                                 [&](const Vec& q) { return near(q, neg, tol::kMerge); }),
                  pts.end());
        changed = true;
        break;
      }
    }
  }
  return SymmetricBody(dim, std::move(pts));
}

EllipseMetrics ellipse_metrics(const Ellipsoid& ell) {
  Eigen::SelfAdjointEigenSolver<Mat> es(ell.gram, Eigen::EigenvaluesOnly);
  EllipseMetrics out;
  for (int i = 0; i < ell.dim(); ++i)
    out.semi_axes.push_back(1.0 / std::sqrt(es.eigenvalues()(i)));
  std::sort(out.semi_axes.begin(), out.semi_axes.end(), std::greater<double>());
  if (ell.dim() == 2) {
    const double a = out.semi_axes[0], b = out.semi_axes[1];
    out.eccentricity = std::sqrt(std::max(0.0, 1.0 - (b / a) * (b / a)));
  }
  return out;
}

}  // namespace hilbund
