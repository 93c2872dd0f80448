// The l^p convex structure on seminorms and Gram-simplex hulls.

#include "hilbund/seminorm.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "hilbund/lp.hpp"

namespace hilbund {

HilbertNorm::HilbertNorm(Mat q) : gram(std::move(q)) {
  require(gram.rows() >= 1 && gram.rows() == gram.cols(),
          "HilbertNorm: Gram matrix must be square");
  if (max_abs(gram - gram.transpose()) > tol::kSym)
    throw DegenerateNormError("HilbertNorm: Gram matrix not symmetric");
  gram = symmetrized(gram);
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < tol::kPsdFloor)
    throw DegenerateNormError("HilbertNorm: Gram matrix not PSD");
  full_rank = min_eig > tol::kFullRank;
}

Seminorm::Seminorm(HilbertNorm h) : node_(std::move(h)) {}
Seminorm::Seminorm(SymmetricBody body) : node_(std::move(body)) {}

Seminorm::Seminorm(double p, double lambda, Seminorm left, Seminorm right)
    : node_(LpMix{p, lambda, std::make_shared<const Seminorm>(std::move(left)),
                  std::make_shared<const Seminorm>(std::move(right))}) {
  const auto& m = std::get<LpMix>(node_);
  require(m.p >= 1.0, "Seminorm: p must be at least 1");
  require(m.lambda >= 0.0 && m.lambda <= 1.0, "Seminorm: lambda in [0,1]");
  require(m.left->dim() == m.right->dim(), "Seminorm: mixed dimensions");
}

int Seminorm::dim() const {
  if (is_hilbert()) return hilbert().dim();
  if (is_body_gauge()) return body().dim();
  return mix().left->dim();
}

bool Seminorm::is_hilbert() const { return std::holds_alternative<HilbertNorm>(node_); }
const HilbertNorm& Seminorm::hilbert() const { return std::get<HilbertNorm>(node_); }
bool Seminorm::is_body_gauge() const { return std::holds_alternative<SymmetricBody>(node_); }
const SymmetricBody& Seminorm::body() const { return std::get<SymmetricBody>(node_); }
bool Seminorm::is_mix() const { return std::holds_alternative<LpMix>(node_); }
const Seminorm::LpMix& Seminorm::mix() const { return std::get<LpMix>(node_); }

Seminorm lp_combine(double p, double lambda, const Seminorm& left,
                    const Seminorm& right) {
  require(p >= 1.0, "lp_combine: p must be at least 1");
  require(lambda >= 0.0 && lambda <= 1.0, "lp_combine: lambda in [0,1]");
  if (left.dim() != right.dim())
    throw DimensionError(
        dim_mismatch_msg("lp_combine", left.dim(), right.dim()));
  if (p == 2.0 && left.is_hilbert() && right.is_hilbert()) {
    Mat q = lambda * left.hilbert().gram + (1.0 - lambda) * right.hilbert().gram;
    return Seminorm(HilbertNorm(q));
  }
  return Seminorm(p, lambda, left, right);
}

double eval(const Seminorm& s, const Vec& v) {
  if (v.size() != s.dim())
    throw DimensionError(dim_mismatch_msg("eval", s.dim(),
                                          static_cast<int>(v.size())));
  if (s.is_hilbert())
    return std::sqrt(std::max(0.0, v.dot(s.hilbert().gram * v)));
  if (s.is_body_gauge()) return gauge(s.body(), v);
  const auto& m = s.mix();
  const double a = eval(*m.left, v);
  const double b = eval(*m.right, v);
  return std::pow(m.lambda * std::pow(a, m.p) + (1.0 - m.lambda) * std::pow(b, m.p),
                  1.0 / m.p);
}

HilbertNormSet::HilbertNormSet(std::vector<HilbertNorm> gens)
    : generators(std::move(gens)) {
  require(!generators.empty(), "HilbertNormSet: needs at least one generator");
  const int d = generators.front().dim();
  for (const HilbertNorm& g : generators) {
    require(g.dim() == d, "HilbertNormSet: mixed dimensions");
    require(g.full_rank, "HilbertNormSet: generators must be full rank");
  }
}

HilbertNorm HilbertNormSet::barycenter() const {
  Mat q = Mat::Zero(dim(), dim());
  for (const HilbertNorm& g : generators) q += g.gram;
  return HilbertNorm(q / static_cast<double>(size()));
}

namespace {

Vec upper_triangle_vec(const Mat& m) {
  const int d = static_cast<int>(m.rows());
  Vec out(d * (d + 1) / 2);
  int k = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) out(k++) = m(i, j);
  return out;
}

}  // namespace

MembershipResult l2_hull_membership(const HilbertNorm& q,
                                    const HilbertNormSet& k, double tolerance) {
  require(tolerance > 0.0, "l2_hull_membership: tolerance must be positive");
  if (q.dim() != k.dim())
    throw DimensionError(dim_mismatch_msg("l2_hull_membership", k.dim(), q.dim()));
  const int m = k.size();
  const int d = q.dim();
  const int rows = d * (d + 1) / 2;

  // Chebyshev-distance LP over (lambda, t):
  //   min t  s.t.  |sum lambda_i Q_i - Q|_entry <= t, sum lambda = 1.
  Mat a = Mat::Zero(2 * rows + 2, m + 1);
  Vec b(2 * rows + 2);
  for (int i = 0; i < m; ++i) {
    Vec col = upper_triangle_vec(k.generators[i].gram);
    a.block(0, i, rows, 1) = col;
    a.block(rows, i, rows, 1) = -col;
  }
  a.block(0, m, rows, 1).setConstant(-1.0);
  a.block(rows, m, rows, 1).setConstant(-1.0);
  Vec target = upper_triangle_vec(q.gram);
  b.head(rows) = target;
  b.segment(rows, rows) = -target;
  for (int i = 0; i < m; ++i) {
    a(2 * rows, i) = 1.0;
    a(2 * rows + 1, i) = -1.0;
  }
  b(2 * rows) = 1.0;
  b(2 * rows + 1) = -1.0;
  Vec c = Vec::Zero(m + 1);
  c(m) = -1.0;  // max -t
  LpResult lp = solve_lp(a, b, c);
  internal_check(lp.status == LpResult::Status::Optimal,
                 "l2_hull_membership: Chebyshev LP unsolved");

  MembershipResult res;
  res.residual_linf = -lp.value;
  res.member = res.residual_linf <= tolerance;
  if (res.member) {
    res.lambda = lp.x.head(m);
    return res;
  }

  // Frobenius projection onto the Gram simplex gives the separating
  // functional G = proj - Q: <G, hull member> >= <G, proj> > <G, Q>.
  Mat cols(d * d, m);
  for (int i = 0; i < m; ++i)
    cols.col(i) = Eigen::Map<const Vec>(k.generators[i].gram.data(), d * d);
  Vec qv = Eigen::Map<const Vec>(q.gram.data(), d * d);
  SimplexLsResult proj = simplex_least_squares(cols, qv);
  Vec gap = cols * proj.lambda - qv;
  res.separating = Eigen::Map<Mat>(gap.data(), d, d);
  res.separating = symmetrized(res.separating);
  const double at_q = (res.separating.array() * q.gram.array()).sum();
  double min_at_gen = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i)
    min_at_gen = std::min(
        min_at_gen,
        (res.separating.array() * k.generators[i].gram.array()).sum());
  res.separation_margin = min_at_gen - at_q;
  internal_check(res.separation_margin > 0.0,
                 "l2_hull_membership: projection failed to separate");
  return res;
}

// ---------------------------------------------------------------------------
// Distortion

namespace {

void check_nondegenerate(const Seminorm& s) {
  if (s.is_hilbert() && !s.hilbert().full_rank)
    throw DegenerateNormError("distortion: Hilbert seminorm is rank deficient");
}

// max over nonzero v of a(v)/b(v), for b Hilbert with full-rank Gram Q:
// sup over the Q-unit sphere of a, which a convex gauge attains at the
// sphere image of either vertex directions (a body) or eigen directions.
double ratio_hilbert_denominator(const Seminorm& a, const HilbertNorm& b) {
  if (a.is_hilbert()) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(a.hilbert().gram, b.gram);
    internal_check(ges.info() == Eigen::Success, "distortion eigensolve failed");
    return std::sqrt(std::max(0.0, ges.eigenvalues().maxCoeff()));
  }
  internal_check(a.is_body_gauge(), "ratio path expects an exact leaf");
  // gauge_K(v) = max_n <n,v>/h(n); sup over the b-unit sphere is
  // max_n ||n||_{Q^{-1}} / h(n).
  Ellipsoid ball(b.gram);
  double best = 0.0;
  for (const Facet& f : a.body().facets())
    best = std::max(best, ellipsoid_support(ball, f.normal) / f.offset);
  return best;
}

// max over nonzero v of a(v)/gauge_B(v): a convex numerator over the body
// attains its maximum at the vertices, where gauge_B is exactly 1.
double ratio_body_denominator(const Seminorm& a, const SymmetricBody& b) {
  double best = 0.0;
  for (const Vec& v : b.vertices()) best = std::max(best, eval(a, v));
  return best;
}

double sampled_ratio(const Seminorm& num, const Seminorm& den,
                     const DistortionProbe& probe) {
  std::mt19937_64 rng(probe.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int d = num.dim();
  double best = 0.0;
  for (int i = 0; i < probe.sample_budget; ++i) {
    Vec v(d);
    for (int j = 0; j < d; ++j) v(j) = gauss(rng);
    const double dn = eval(den, v);
    if (dn <= tol::kSpan)
      throw DegenerateNormError("distortion: denominator vanishes on a probe");
    best = std::max(best, eval(num, v) / dn);
  }
  return best;
}

double ratio_max(const Seminorm& num, const Seminorm& den,
                 const DistortionProbe& probe) {
  // A seminorm is convex, so its max over a body is attained at vertices;
  // over an ellipsoid the exact route needs a Hilbert or gauge numerator.
  if (den.is_body_gauge()) return ratio_body_denominator(num, den.body());
  if (den.is_hilbert() && (num.is_hilbert() || num.is_body_gauge()))
    return ratio_hilbert_denominator(num, den.hilbert());
  return sampled_ratio(num, den, probe);
}

}  // namespace

DistortionReport distortion(const Seminorm& a, const Seminorm& b,
                            const DistortionProbe& probe) {
  if (a.dim() != b.dim())
    throw DimensionError(dim_mismatch_msg("distortion", a.dim(), b.dim()));
  check_nondegenerate(a);
  check_nondegenerate(b);
  DistortionReport rep;
  rep.lower_scale = ratio_max(a, b, probe);
  rep.upper_scale = ratio_max(b, a, probe);
  rep.distortion = rep.lower_scale * rep.upper_scale;
  return rep;
}

}  // namespace hilbund
