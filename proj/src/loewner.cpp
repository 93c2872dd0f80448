// Loewner (minimum-volume enclosing) ellipsoids and their certificates.

#include "hilbund/loewner.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "hilbund/lp.hpp"

namespace hilbund {

void MveeConfig::validate() const {
  require(epsilon > 0.0 && epsilon <= 0.1,
          "MveeConfig: epsilon must lie in (0, 0.1]");
  require(max_iter >= 0, "MveeConfig: max_iter must be nonnegative");
  require(oracle_tol > 0.0 && oracle_tol <= epsilon,
          "MveeConfig: oracle_tol must lie in (0, epsilon]");
}

int MveeConfig::iterations_for(int dim) const {
  return max_iter > 0 ? max_iter : 100 * dim * dim;
}

// ---------------------------------------------------------------------------
// Dual ascent for the centered MVEE.
//
// With one representative p_i per antipodal pair and weights u on the
// simplex, maximize log det M(u), M(u) = sum u_i p_i p_i'. At the optimum
// kappa_i := p_i' M^{-1} p_i <= d with equality on the support, and the
// minimal ellipsoid is {x : x' M^{-1} x <= d}. Per sweep we take either a
// Frank-Wolfe step toward the worst violator or an away step shrinking the
// weakest support weight (Wolfe-Atwood), which restores fast local
// convergence near the optimum.

MveeResult mvee_points(const std::vector<Vec>& points, const MveeConfig& cfg) {
  cfg.validate();
  require(!points.empty(), "mvee_points: empty point list");
  const int d = static_cast<int>(points[0].size());
  require(d >= 1 && d <= tol::kMaxDim, "mvee_points: dimension must be in [1, 8]");
  for (const Vec& p : points)
    if (p.size() != d)
      throw DimensionError(dim_mismatch_msg("mvee_points", d,
                                            static_cast<int>(p.size())));

  std::vector<Vec> reps = detail::antipodal_representatives(points);
  reps.erase(std::remove_if(reps.begin(), reps.end(),
                            [](const Vec& p) {
                              return p.lpNorm<Eigen::Infinity>() <= tol::kMerge;
                            }),
             reps.end());
  const int n = static_cast<int>(reps.size());
  if (n == 0 || [&] {
        Mat m(d, n);
        for (int j = 0; j < n; ++j) m.col(j) = reps[j];
        return numeric_rank(m) < d;
      }())
    throw DegenerateBodyError("mvee_points: points do not span the space");

  Mat p(d, n);
  for (int j = 0; j < n; ++j) p.col(j) = reps[j];

  Vec u = Vec::Constant(n, 1.0 / n);
  const double target = 1.0 + 0.5 * cfg.epsilon;
  const int max_iter = cfg.iterations_for(d);

  Vec kappa(n);
  double best_gap = std::numeric_limits<double>::infinity();
  Mat best_minv = Mat::Identity(d, d);
  double best_kmax = static_cast<double>(d);
  int iterations = 0;

  for (int it = 0; it <= max_iter; ++it) {
    Mat m = p * u.asDiagonal() * p.transpose();
    Eigen::LDLT<Mat> ldlt(symmetrized(m));
    internal_check(ldlt.info() == Eigen::Success, "mvee: moment matrix singular");
    Mat minv = ldlt.solve(Mat::Identity(d, d));
    for (int j = 0; j < n; ++j) kappa(j) = p.col(j).dot(minv * p.col(j));

    int j_add = 0, j_away = -1;
    double k_max = -1.0, k_min = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (kappa(j) > k_max) {
        k_max = kappa(j);
        j_add = j;
      }
      if (u(j) > 1e-14 && kappa(j) < k_min) {
        k_min = kappa(j);
        j_away = j;
      }
    }

    const double gap_hi = k_max / d - 1.0;
    const double gap_lo = 1.0 - k_min / d;
    if (gap_hi < best_gap) {
      best_gap = gap_hi;
      best_minv = minv;
      best_kmax = k_max;
    }
    iterations = it;
    if (k_max <= d * target && k_min >= d * (2.0 - target)) break;
    if (it == max_iter) {
      MveeResult best{Ellipsoid(symmetrized(best_minv / best_kmax)), iterations,
                      best_gap};
      throw ConvergenceError("mvee_points: iteration budget exhausted", best);
    }

    if (gap_hi >= gap_lo) {
      const double kappa_j = k_max;
      const double alpha = (kappa_j - d) / (d * (kappa_j - 1.0));
      u *= (1.0 - alpha);
      u(j_add) += alpha;
    } else {
      const double kappa_j = k_min;
      double alpha = (kappa_j - d) / (d * (kappa_j - 1.0));  // negative
      const double alpha_floor = -u(j_away) / (1.0 - u(j_away));
      alpha = std::max(alpha, alpha_floor);
      u *= (1.0 - alpha);
      u(j_away) += alpha;
      u(j_away) = std::max(u(j_away), 0.0);
    }
    u /= u.sum();
  }

  // Scale so that max_i p_i' Q p_i = 1: containment is exact and the volume
  // gap stays within (1+epsilon)^dim of optimal.
  Mat q = symmetrized(best_minv / best_kmax);
  return MveeResult{Ellipsoid(q), iterations, best_gap};
}

// ---------------------------------------------------------------------------
// Hulls of mixed generators

namespace {

void append_generator_seed(const HullGenerator& gen, int ambient,
                           std::vector<Vec>* pts) {
  if (std::holds_alternative<SymmetricBody>(gen)) {
    const auto& body = std::get<SymmetricBody>(gen);
    require(body.dim() == ambient, "loewner_hull: generator dimension mismatch");
    for (const Vec& v : body.vertices()) pts->push_back(v);
  } else if (std::holds_alternative<Ellipsoid>(gen)) {
    const auto& ell = std::get<Ellipsoid>(gen);
    require(ell.dim() == ambient, "loewner_hull: generator dimension mismatch");
    for (const Vec& v : detail::ellipsoid_boundary_sample(ell)) pts->push_back(v);
  } else {
    const auto& emb = std::get<EmbeddedEllipsoid>(gen);
    require(emb.frame.ambient_dim == ambient,
            "loewner_hull: generator dimension mismatch");
    for (const Vec& y : detail::ellipsoid_boundary_sample(emb.shape))
      pts->push_back(emb.frame.basis * y);
  }
}

// Worst boundary point of an ellipsoidal generator under the current
// candidate: top generalized eigenpair of (B'QB, P).
ContainmentResult check_generator(const Ellipsoid& candidate,
                                  const HullGenerator& gen, double tolerance) {
  if (std::holds_alternative<SymmetricBody>(gen))
    return contains(candidate, std::get<SymmetricBody>(gen), tolerance);
  if (std::holds_alternative<Ellipsoid>(gen))
    return contains(candidate, std::get<Ellipsoid>(gen), tolerance);
  return contains(candidate, std::get<EmbeddedEllipsoid>(gen), tolerance);
}

}  // namespace

MveeResult loewner_hull(const std::vector<HullGenerator>& generators,
                        const MveeConfig& cfg) {
  cfg.validate();
  require(!generators.empty(), "loewner_hull: no generators");
  int ambient = -1;
  for (const auto& gen : generators) {
    int d = std::holds_alternative<SymmetricBody>(gen)
                ? std::get<SymmetricBody>(gen).dim()
                : (std::holds_alternative<Ellipsoid>(gen)
                       ? std::get<Ellipsoid>(gen).dim()
                       : std::get<EmbeddedEllipsoid>(gen).frame.ambient_dim);
    if (ambient < 0) ambient = d;
    require(ambient == d, "loewner_hull: generators in mixed dimensions");
  }

  std::vector<Vec> pts;
  for (const auto& gen : generators) append_generator_seed(gen, ambient, &pts);

  constexpr int kMaxRounds = 256;
  MveeResult res = mvee_points(pts, cfg);
  for (int round = 0; round < kMaxRounds; ++round) {
    bool all_inside = true;
    for (const auto& gen : generators) {
      ContainmentResult c = check_generator(res.ellipsoid, gen, cfg.oracle_tol);
      if (!c.contained) {
        all_inside = false;
        pts.push_back(c.witness);
        pts.push_back(-c.witness);
      }
    }
    if (all_inside) return res;
    res = mvee_points(pts, cfg);
  }
  throw ConvergenceError("loewner_hull: oracle refinement failed to settle",
                         res);
}

// ---------------------------------------------------------------------------
// Certificates

LoewnerCertificate john_check(const SymmetricBody& body, const Ellipsoid& ell) {
  if (body.dim() != ell.dim())
    throw DimensionError(dim_mismatch_msg("john_check", ell.dim(), body.dim()));
  // beta = inf{t : body <= t ell} is the worst vertex norm; it must not
  // exceed 1 (enclosure). alpha = inf{t : ell <= t body} comes from the
  // facet normals: h_ell(n) / h_body(n).
  double beta = 0.0;
  for (const Vec& v : body.vertices())
    beta = std::max(beta, std::sqrt(std::max(0.0, v.dot(ell.gram * v))));
  if (beta > 1.0 + 1e-7)
    throw NotEnclosingError("john_check: ellipsoid does not enclose the body");
  double alpha = 0.0;
  for (const Facet& f : body.facets())
    alpha = std::max(alpha, ellipsoid_support(ell, f.normal) / f.offset);
  LoewnerCertificate cert{ell, alpha * beta, std::sqrt(double(body.dim())), 0,
                          0.0};
  return cert;
}

LoewnerCertificate loewner_certify(const SymmetricBody& body,
                                   const MveeConfig& cfg) {
  MveeResult res = mvee_points(body.vertices(), cfg);
  LoewnerCertificate cert = john_check(body, res.ellipsoid);
  cert.iterations = res.iterations;
  cert.achieved_gap = res.achieved_gap;
  return cert;
}

double slice_constant(const SymmetricBody& body, const Subspace& s,
                      const Ellipsoid& reference) {
  require(!s.empty(), "slice_constant: slice subspace must be nonzero");
  if (s.ambient_dim != body.dim())
    throw DimensionError(
        dim_mismatch_msg("slice_constant", body.dim(), s.ambient_dim));
  if (s.rank() == body.dim()) return 1.0;

  std::vector<Vec> hull_pts;
  SymmetricBody slice = intersect_subspace(body, s);
  for (const Vec& w : slice.vertices()) hull_pts.push_back(s.basis * w);
  Subspace perp = orthogonal_complement(s, reference);
  if (!perp.empty()) {
    SymmetricBody comp = intersect_subspace(body, perp);
    for (const Vec& w : comp.vertices()) hull_pts.push_back(perp.basis * w);
  }
  Mat cols(body.dim(), static_cast<int>(hull_pts.size()));
  for (size_t i = 0; i < hull_pts.size(); ++i)
    cols.col(static_cast<int>(i)) = hull_pts[i];

  double c = 0.0;
  for (const Vec& v : body.vertices()) {
    LpResult lp = min_sum_nonneg_combination(cols, v);
    internal_check(lp.status == LpResult::Status::Optimal,
                   "slice_constant: gauge LP infeasible on a spanning hull");
    c = std::max(c, lp.value);
  }
  return c;
}

}  // namespace hilbund
