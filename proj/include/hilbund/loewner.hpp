#pragma once

#include <variant>
#include <vector>

#include "hilbund/geometry.hpp"

namespace hilbund {

struct MveeConfig {
  double epsilon = 1e-6;   // relative volume-optimality gap, in (0, 0.1]
  int max_iter = 0;        // 0 means the default 100 * dim^2
  double oracle_tol = 1e-8;

  void validate() const;
  int iterations_for(int dim) const;
};

// Minimum-volume certificate data. `distortion` is the identity-map
// distortion between the certified body and the ellipsoid; `john_bound`
// is sqrt(dim).
struct LoewnerCertificate {
  Ellipsoid ellipsoid;
  double distortion = 1.0;
  double john_bound = 1.0;
  int iterations = 0;
  double achieved_gap = 0.0;
};

struct MveeResult {
  Ellipsoid ellipsoid;
  int iterations = 0;
  double achieved_gap = 0.0;
};

// Raised when the ascent stalls before reaching the requested gap; the
// best iterate so far is carried along.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, MveeResult best_iterate)
      : Error(what), best(std::move(best_iterate)) {}
  MveeResult best;
};

// Minimum-volume origin-centered enclosing ellipsoid of a symmetric point
// set, by dual coordinate ascent with away steps on the antipodal
// representatives.
MveeResult mvee_points(const std::vector<Vec>& points, const MveeConfig& cfg);

// Generators for hull-of-mixed-shapes Loewner problems. Polytopes
// contribute their vertices; ellipsoids a boundary sample plus an exact
// separation oracle in the refinement loop.
using HullGenerator = std::variant<SymmetricBody, Ellipsoid, EmbeddedEllipsoid>;

MveeResult loewner_hull(const std::vector<HullGenerator>& generators,
                        const MveeConfig& cfg);

// Certifies `ell in body`-vs-`body in ell` identity distortion; requires the
// ellipsoid to enclose the body. When the ellipsoid is the Loewner
// ellipsoid of the body, the distortion obeys John's sqrt(dim) bound.
LoewnerCertificate john_check(const SymmetricBody& body, const Ellipsoid& ell);

// Convenience: solve for the Loewner ellipsoid of the body's vertices and
// certify it in one go.
LoewnerCertificate loewner_certify(const SymmetricBody& body,
                                   const MveeConfig& cfg);

// The smallest C with C * co(slice ∪ (complement slice)) covering the body,
// where the complement is taken in the given reference inner product.
double slice_constant(const SymmetricBody& body, const Subspace& s,
                      const Ellipsoid& reference);

}  // namespace hilbund
