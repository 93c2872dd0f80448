// Small dense linear programming kernels used across the geometry stack.

#include "hilbund/lp.hpp"

#include <algorithm>
#include <limits>
#include <utility>

namespace hilbund {

namespace {

constexpr double kEps = 1e-11;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Two-phase tableau simplex over  max c'x, Ax <= b, x >= 0  in the compact
// dictionary form popularized by competitive-programming codebases.
// Deterministic (index-ordered) tie-breaking throughout.
struct TableauSimplex {
  int m, n;
  std::vector<int> nonbasic, basic;
  Mat d;

  TableauSimplex(const Mat& a, const Vec& b, const Vec& c)
      : m(static_cast<int>(b.size())),
        n(static_cast<int>(c.size())),
        nonbasic(n + 1),
        basic(m),
        d(Mat::Zero(m + 2, n + 2)) {
    d.block(0, 0, m, n) = a;
    for (int i = 0; i < m; ++i) {
      basic[i] = n + i;
      d(i, n) = -1.0;
      d(i, n + 1) = b(i);
    }
    for (int j = 0; j < n; ++j) {
      nonbasic[j] = j;
      d(m, j) = -c(j);
    }
    nonbasic[n] = -1;
    d(m + 1, n) = 1.0;
  }

  void pivot(int r, int s) {
    const double inv = 1.0 / d(r, s);
    for (int i = 0; i < m + 2; ++i) {
      if (i == r || std::abs(d(i, s)) <= kEps) continue;
      const double factor = d(i, s) * inv;
      for (int j = 0; j < n + 2; ++j) d(i, j) -= d(r, j) * factor;
      d(i, s) = -factor;
    }
    for (int j = 0; j < n + 2; ++j)
      if (j != s) d(r, j) *= inv;
    d(r, s) = inv;
    std::swap(basic[r], nonbasic[s]);
  }

  bool simplex(int phase) {
    const int x = m + phase - 1;
    for (;;) {
      int s = -1;
      for (int j = 0; j <= n; ++j) {
        if (nonbasic[j] == -phase) continue;
        if (s == -1 ||
            std::make_pair(d(x, j), nonbasic[j]) <
                std::make_pair(d(x, s), nonbasic[s]))
          s = j;
      }
      if (d(x, s) >= -kEps) return true;
      int r = -1;
      for (int i = 0; i < m; ++i) {
        if (d(i, s) <= kEps) continue;
        if (r == -1 ||
            std::make_pair(d(i, n + 1) / d(i, s), basic[i]) <
                std::make_pair(d(r, n + 1) / d(r, s), basic[r]))
          r = i;
      }
      if (r == -1) return false;  // unbounded in the entering direction
      pivot(r, s);
    }
  }

  LpResult solve() {
    LpResult res;
    res.x = Vec::Zero(n);
    int r = 0;
    for (int i = 1; i < m; ++i)
      if (d(i, n + 1) < d(r, n + 1)) r = i;
    if (d(r, n + 1) < -kEps) {
      pivot(r, n);
      bool feasible_phase = simplex(2);
      if (!feasible_phase || d(m + 1, n + 1) < -kEps) {
        res.status = LpResult::Status::Infeasible;
        return res;
      }
      for (int i = 0; i < m; ++i) {
        if (basic[i] != -1) continue;
        int s = 0;
        for (int j = 1; j <= n; ++j)
          if (std::make_pair(d(i, j), nonbasic[j]) <
              std::make_pair(d(i, s), nonbasic[s]))
            s = j;
        pivot(i, s);
      }
    }
    const bool bounded = simplex(1);
    for (int i = 0; i < m; ++i)
      if (basic[i] >= 0 && basic[i] < n) res.x(basic[i]) = d(i, n + 1);
    if (!bounded) {
      res.status = LpResult::Status::Unbounded;
      return res;
    }
    res.status = LpResult::Status::Optimal;
    res.value = d(m, n + 1);
    return res;
  }
};

}  // namespace

LpResult solve_lp(const Mat& a, const Vec& b, const Vec& c) {
  internal_check(a.rows() == b.size() && a.cols() == c.size(),
                 "solve_lp: inconsistent LP shapes");
  TableauSimplex s(a, b, c);
  return s.solve();
}

LpResult min_sum_nonneg_combination(const Mat& points, const Vec& target) {
  const int d = static_cast<int>(points.rows());
  const int n = static_cast<int>(points.cols());
  internal_check(target.size() == d, "combination target dimension mismatch");
  Mat a(2 * d, n);
  a.topRows(d) = points;
  a.bottomRows(d) = -points;
  Vec b(2 * d);
  b.head(d) = target;
  b.tail(d) = -target;
  Vec c = Vec::Constant(n, -1.0);  // max -sum == min sum
  LpResult res = solve_lp(a, b, c);
  if (res.status == LpResult::Status::Optimal) res.value = -res.value;
  return res;
}

SimplexLsResult simplex_least_squares(const Mat& a, const Vec& b) {
  const int n = static_cast<int>(a.cols());
  internal_check(n >= 1, "simplex_least_squares: no columns");

  int start = 0;
  double best = kInf;
  for (int j = 0; j < n; ++j) {
    double r = (a.col(j) - b).norm();
    if (r < best - 1e-15) {
      best = r;
      start = j;
    }
  }
  Vec lambda = Vec::Zero(n);
  lambda(start) = 1.0;
  std::vector<bool> free_set(n, false);
  free_set[start] = true;

  auto solve_working = [&](const std::vector<int>& idx) -> Vec {
    // Equality-constrained LS on the working set:
    //   min ||A_F mu - b||^2  s.t.  sum(mu) = 1.
    const int k = static_cast<int>(idx.size());
    Mat af(a.rows(), k);
    for (int j = 0; j < k; ++j) af.col(j) = a.col(idx[j]);
    Mat kkt = Mat::Zero(k + 1, k + 1);
    kkt.topLeftCorner(k, k) = 2.0 * (af.transpose() * af);
    kkt.topRightCorner(k, 1).setOnes();
    kkt.bottomLeftCorner(1, k).setOnes();
    Vec rhs(k + 1);
    rhs.head(k) = 2.0 * (af.transpose() * b);
    rhs(k) = 1.0;
    // Affinely dependent columns make the KKT system singular; the
    // minimum-norm solution is a deterministic representative.
    Eigen::CompleteOrthogonalDecomposition<Mat> cod(kkt);
    Vec sol = cod.solve(rhs);
    return sol.head(k);
  };

  const int max_steps = 100 * (n + 2);
  for (int step = 0; step < max_steps; ++step) {
    std::vector<int> idx;
    for (int j = 0; j < n; ++j)
      if (free_set[j]) idx.push_back(j);
    Vec mu = solve_working(idx);

    if (mu.minCoeff() < -1e-12) {
      // Move from lambda toward mu until the first support coordinate
      // hits zero, then drop it from the working set.
      double theta = 1.0;
      int blocker = -1;
      for (size_t t = 0; t < idx.size(); ++t) {
        const double cur = lambda(idx[t]);
        const double nxt = mu(static_cast<int>(t));
        if (nxt < 0.0 && cur > nxt) {
          const double step_t = cur / (cur - nxt);
          if (blocker == -1 || step_t < theta - 1e-15) {
            theta = step_t;
            blocker = idx[t];
          }
        }
      }
      for (size_t t = 0; t < idx.size(); ++t) {
        const int j = idx[t];
        lambda(j) += theta * (mu(static_cast<int>(t)) - lambda(j));
      }
      lambda = lambda.cwiseMax(0.0);
      if (blocker >= 0) {
        free_set[blocker] = false;
        lambda(blocker) = 0.0;
      }
      const double s = lambda.sum();
      internal_check(s > 0.0, "simplex step collapsed to zero");
      lambda /= s;
      continue;
    }

    lambda.setZero();
    for (size_t t = 0; t < idx.size(); ++t)
      lambda(idx[t]) = std::max(0.0, mu(static_cast<int>(t)));
    lambda /= lambda.sum();

    // Dual feasibility for held-out coordinates: grad_j >= nu on support.
    Vec grad = 2.0 * (a.transpose() * (a * lambda - b));
    double nu = 0.0;
    int support = 0;
    for (int j = 0; j < n; ++j)
      if (free_set[j]) {
        nu += grad(j);
        ++support;
      }
    nu /= std::max(1, support);
    int entering = -1;
    double worst = -1e-9;
    for (int j = 0; j < n; ++j) {
      if (free_set[j]) continue;
      const double viol = grad(j) - nu;
      if (viol < worst) {
        worst = viol;
        entering = j;
      }
    }
    if (entering < 0) break;
    free_set[entering] = true;
  }

  SimplexLsResult out;
  out.lambda = lambda;
  out.residual = (a * lambda - b).norm();
  return out;
}

}  // namespace hilbund
