#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "hilbund/geometry.hpp"

namespace hilbund {

// Hilbert seminorm v -> sqrt(v' Q v); Q symmetric PSD. full_rank marks a
// genuine norm (min eigenvalue above 1e-10).
struct HilbertNorm {
  Mat gram;
  bool full_rank = false;

  explicit HilbertNorm(Mat q);
  int dim() const { return static_cast<int>(gram.rows()); }
};

// Seminorm expression tree: Hilbert leaf, polytope-gauge leaf, or an
// l^p barycentric combination of two subtrees.
class Seminorm {
 public:
  struct LpMix {
    double p;
    double lambda;
    std::shared_ptr<const Seminorm> left;
    std::shared_ptr<const Seminorm> right;
  };

  explicit Seminorm(HilbertNorm h);
  explicit Seminorm(SymmetricBody gauge_body);
  Seminorm(double p, double lambda, Seminorm left, Seminorm right);

  int dim() const;
  bool is_hilbert() const;
  const HilbertNorm& hilbert() const;
  bool is_body_gauge() const;
  const SymmetricBody& body() const;
  bool is_mix() const;
  const LpMix& mix() const;

 private:
  std::variant<HilbertNorm, SymmetricBody, LpMix> node_;
};

// (lambda * left^p + (1-lambda) * right^p)^(1/p); collapses to the Gram
// convex combination when p == 2 and both sides are Hilbert.
Seminorm lp_combine(double p, double lambda, const Seminorm& left,
                    const Seminorm& right);

double eval(const Seminorm& s, const Vec& v);

// Finitely generated l^2 hull of Hilbert norms: the Gram-simplex
// {sum lambda_i Q_i}. All generators must be full rank.
struct HilbertNormSet {
  std::vector<HilbertNorm> generators;

  explicit HilbertNormSet(std::vector<HilbertNorm> gens);
  int dim() const { return generators.front().dim(); }
  int size() const { return static_cast<int>(generators.size()); }

  // Barycenter of the generator simplex.
  HilbertNorm barycenter() const;
};

struct MembershipResult {
  bool member = false;
  Vec lambda;                 // simplex certificate when member
  double residual_linf = 0.0; // Chebyshev distance to the hull
  Mat separating;             // functional M -> <separating, M> when !member
  double separation_margin = 0.0;
};

// Linear feasibility of Q = sum lambda_i Q_i over the simplex, decided by
// an exact Chebyshev-distance LP; on failure the Frobenius projection
// supplies a separating functional with a verified margin.
MembershipResult l2_hull_membership(const HilbertNorm& q,
                                    const HilbertNormSet& k, double tolerance);

struct DistortionReport {
  double lower_scale = 1.0;  // max over directions of a(v)/b(v)
  double upper_scale = 1.0;  // max over directions of b(v)/a(v)
  double distortion = 1.0;   // product, an identity-map Banach-Mazur bound
};

// Probe directions for pairs without an exact route.
struct DistortionProbe {
  int sample_budget = 4096;
  uint64_t seed = 0x5eed5eedULL;
};

// Identity-map distortion between two norms on the same space. Exact for
// Hilbert/Hilbert (generalized eigenvalues), body/Hilbert (vertices and
// facet normals) and body/body (both vertex sets); sampled otherwise.
DistortionReport distortion(const Seminorm& a, const Seminorm& b,
                            const DistortionProbe& probe = {});

}  // namespace hilbund
