#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "hilbund/errors.hpp"

namespace hilbund {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

namespace tol {
// Central numeric thresholds. Geometry lives in low dimensions (<= 8) with
// O(1)-scaled bodies, so absolute tolerances are meaningful.
inline constexpr double kSym = 1e-12;        // symmetry of Gram matrices
inline constexpr double kPsdFloor = -1e-12;  // eigenvalue floor for PSD
inline constexpr double kFullRank = 1e-10;   // min eigenvalue of a norm Gram
inline constexpr double kMerge = 1e-9;       // merging of enumerated points
inline constexpr double kSpan = 1e-10;       // rank decisions / residuals
inline constexpr int kMaxDim = 8;            // supported ambient dimension
}  // namespace tol

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError(msg);
}

inline void internal_check(bool cond, const std::string& msg) {
  if (!cond) throw InternalError(msg);
}

inline bool all_finite(const Vec& v) { return v.allFinite(); }

inline Mat symmetrized(const Mat& m) { return 0.5 * (m + m.transpose()); }

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

// Numerical rank with an absolute singular-value threshold.
inline int numeric_rank(const Mat& m, double threshold = tol::kSpan) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Mat> svd(m);
  int r = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > threshold) ++r;
  return r;
}

inline std::string dim_mismatch_msg(const std::string& what, int expected,
                                    int got) {
  return what + ": expected dimension " + std::to_string(expected) +
         ", got " + std::to_string(got);
}

}  // namespace hilbund
