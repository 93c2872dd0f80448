#pragma once

#include <vector>

#include "hilbund/types.hpp"

namespace hilbund {

// Outcome of a small dense LP  max c'x  s.t.  Ax <= b, x >= 0.
struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  double value = 0.0;
  Vec x;
};

// Two-phase tableau simplex for small dense problems (tens of rows and
// columns). Deterministic pivot selection, so identical inputs give
// identical iterates.
LpResult solve_lp(const Mat& a, const Vec& b, const Vec& c);

// min sum(lambda)  s.t.  V * lambda = target, lambda >= 0,
// with V holding one point per column. Equalities are passed to the
// simplex as inequality pairs. Infeasibility reported via LpResult.
LpResult min_sum_nonneg_combination(const Mat& points, const Vec& target);

// Simplex-constrained least squares:
//   min ||A*lambda - b||^2   s.t.  sum(lambda) = 1, lambda >= 0.
// Active-set method (NNLS with an equality), machine-precision KKT solve
// per working set, lowest-index tie-breaking. Always returns a feasible
// lambda; `residual` is ||A*lambda - b||.
struct SimplexLsResult {
  Vec lambda;
  double residual = 0.0;
};
SimplexLsResult simplex_least_squares(const Mat& a, const Vec& b);

}  // namespace hilbund
