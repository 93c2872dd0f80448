#pragma once

#include <map>
#include <string>
#include <vector>

#include "hilbund/geometry.hpp"

namespace hilbund {

using VertexId = std::string;

struct Edge {
  VertexId a, b;
  double length = 1.0;
};

// Finite connected simple graph with positive edge lengths; the discrete
// base space. Vertex order is canonical (sorted ids) everywhere.
struct BaseGraph {
  std::vector<VertexId> vertices;
  std::vector<Edge> edges;

  void validate() const;
  bool has_vertex(const VertexId& v) const;
  std::vector<VertexId> neighbors(const VertexId& v) const;
  bool adjacent(const VertexId& a, const VertexId& b) const;
};

// One generating section: an ambient vector over every vertex.
struct Section {
  std::string id;
  std::map<VertexId, Vec> values;
};

// Discrete model of a subhomogeneous bundle: per-vertex fiber frames in a
// common ambient space, unit balls in fiber coordinates, and a generating
// family of sections whose per-vertex spans are exactly the fibers.
struct Bundle {
  int ambient_dim = 0;
  BaseGraph base;
  std::vector<Section> sections;
  std::map<VertexId, Subspace> fiber_basis;   // ambient frames, rank = fiber dim
  std::map<VertexId, SymmetricBody> fiber_ball;  // in fiber coordinates
  bool allow_rank_zero = false;

  int fiber_dim(const VertexId& v) const;
  // Coordinates of an ambient vector in the fiber frame; throws
  // SectionError when the vector leaves the fiber beyond `residual_tol`.
  Vec fiber_coordinates(const VertexId& v, const Vec& ambient,
                        double residual_tol = tol::kSpan) const;
  // Values of all sections at a vertex, in fiber coordinates.
  std::vector<Vec> section_values_at(const VertexId& v) const;
};

struct BundleDiagnostics {
  std::map<VertexId, int> fiber_dims;
  std::vector<std::string> warnings;
};

// Checks every structural invariant; throws ValidationError naming the
// offending vertices. Cross-edge fiber jumps are reported as warnings
// only (the discrete model cannot express continuity exactly).
BundleDiagnostics validate(const Bundle& bundle);

// Direct sum with a trivial line bundle: ambient dimension grows by one,
// a constant section is appended and every ball becomes the hull of the
// old ball with the new axis segment. Removes rank-0 fibers.
Bundle augment_trivial(const Bundle& bundle);

struct Stratification {
  std::vector<std::vector<VertexId>> strata;  // ascending X_0 <= X_1 <= ...
  std::map<VertexId, int> depth;

  int max_depth() const { return static_cast<int>(strata.size()) - 1; }
};

// Recursive locally-minimal-dimension strata over closed graph stars:
// X_k collects vertices whose closed neighborhood lies in X_{k-1} or has
// fiber dimension at least theirs. Terminates within the number of
// distinct fiber dimensions.
Stratification stratify(const Bundle& bundle);

// Spans (in fiber coordinates) of all nonempty subsets of the section
// values at x with rank <= max_rank, deduplicated; the full fiber is
// always included.
std::vector<Subspace> enumerate_slices(const Bundle& bundle, const VertexId& x,
                                       int max_rank);

struct SectionNormProfile {
  std::map<VertexId, double> values;
  double sup = 0.0;
};

SectionNormProfile section_norm_profile(const Bundle& bundle,
                                        const Section& s);

}  // namespace hilbund
