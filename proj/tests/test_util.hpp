#pragma once

#include <random>
#include <vector>

#include "hilbund/geometry.hpp"

namespace hilbund_test {

using hilbund::Mat;
using hilbund::Vec;

inline Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

inline Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

inline std::vector<Vec> cube_vertices(int dim) {
  std::vector<Vec> out;
  for (int mask = 0; mask < (1 << dim); ++mask) {
    Vec v(dim);
    for (int i = 0; i < dim; ++i) v(i) = (mask >> i) & 1 ? 1.0 : -1.0;
    out.push_back(v);
  }
  return out;
}

inline std::vector<Vec> cross_polytope_vertices(int dim) {
  std::vector<Vec> out;
  for (int i = 0; i < dim; ++i) {
    Vec v = Vec::Zero(dim);
    v(i) = 1.0;
    out.push_back(v);
    out.push_back(-v);
  }
  return out;
}

inline Vec random_unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(dim);
  do {
    for (int i = 0; i < dim; ++i) v(i) = gauss(rng);
  } while (v.norm() < 1e-6);
  return v / v.norm();
}

// Random symmetric spanning polytope with `pairs` antipodal vertex pairs.
inline hilbund::SymmetricBody random_symmetric_body(std::mt19937_64& rng,
                                                    int dim, int pairs) {
  std::uniform_real_distribution<double> radius(0.6, 1.4);
  for (;;) {
    std::vector<Vec> pts;
    for (int i = 0; i < pairs; ++i) {
      Vec v = random_unit(rng, dim) * radius(rng);
      pts.push_back(v);
      pts.push_back(-v);
    }
    Mat m(dim, static_cast<int>(pts.size()));
    for (size_t i = 0; i < pts.size(); ++i) m.col(static_cast<int>(i)) = pts[i];
    if (hilbund::numeric_rank(m) < dim) continue;
    return hilbund::convex_hull_points(dim, pts);
  }
}

// Random symmetric positive-definite Gram with controlled conditioning.
inline Mat random_spd(std::mt19937_64& rng, int dim, double cond = 10.0) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = gauss(rng);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  Vec eigs(dim);
  std::uniform_real_distribution<double> unif(1.0, cond);
  for (int i = 0; i < dim; ++i) eigs(i) = unif(rng);
  return q * eigs.asDiagonal() * q.transpose();
}

}  // namespace hilbund_test
