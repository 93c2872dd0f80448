#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hilbund/types.hpp"

namespace hilbund {

// Finite metric space with string point ids and a dense distance matrix.
struct FiniteMetricSpace {
  std::vector<std::string> points;
  Mat dist;

  void validate() const;
  int size() const { return static_cast<int>(points.size()); }
  int index(const std::string& id) const;
  double d(int i, int j) const { return dist(i, j); }
};

// Nonempty subset of cardinality <= n, stored as sorted point indices.
struct SubsetPoint {
  std::vector<int> members;

  std::string key(const FiniteMetricSpace& space) const;
  bool operator==(const SubsetPoint&) const = default;
  bool operator<(const SubsetPoint& o) const { return members < o.members; }
};

double hausdorff_distance(const FiniteMetricSpace& z, const SubsetPoint& a,
                          const SubsetPoint& b);

// Z_[n]: all subsets of cardinality in [1, n] with the Hausdorff metric.
struct Hyperspace {
  FiniteMetricSpace space;            // points keyed "{a,b}" style
  std::vector<SubsetPoint> subsets;   // aligned with space.points
  int n = 1;

  int subset_index(const SubsetPoint& s) const;
};

Hyperspace build_hyperspace(const FiniteMetricSpace& z, int n);

// Z-subset incidence space {(z, A) : z in A} with the max metric and its
// projection onto Z_[n]; the universal anchored cover.
struct IncidenceSpace {
  FiniteMetricSpace space;    // points keyed "z|{a,b}"
  Hyperspace hyper;
  std::vector<std::pair<int, int>> pairs;  // (point index in Z, subset index)
};

IncidenceSpace build_incidence(const FiniteMetricSpace& z, int n);

// Anchored branched cover data: proj onto the base, anchor into Z
// injective on fibers with fiber cardinality <= n.
struct AnchoredCover {
  FiniteMetricSpace total;
  FiniteMetricSpace base;
  std::map<std::string, std::string> proj;    // total point -> base point
  std::map<std::string, std::string> anchor;  // total point -> Z point

  void validate(const FiniteMetricSpace& z, int n) const;
};

// g(x) = anchor(fiber over x); fiber-injectivity makes |g(x)| the fiber size.
std::map<std::string, SubsetPoint> cover_to_map(const AnchoredCover& cover,
                                                const FiniteMetricSpace& z,
                                                int n);

// Pullback of the universal cover along g: total points (x, (z, g(x))).
AnchoredCover map_to_cover(const std::map<std::string, SubsetPoint>& g,
                           const FiniteMetricSpace& x,
                           const FiniteMetricSpace& z, int n);

struct RoundtripReport {
  uint64_t map_count = 0;
  uint64_t cover_class_count = 0;
  bool maps_restore_exactly = false;  // cover_to_map(map_to_cover(g)) == g
  bool covers_restore_up_to_iso = false;
  bool pass = false;
};

// Enumerates every map X -> Z_[n] (under the cap), pushes each through the
// cover construction and back, and checks both composites: maps restore
// exactly, covers restore up to the canonical fiber relabeling.
RoundtripReport roundtrip_check(const FiniteMetricSpace& x,
                                const FiniteMetricSpace& z, int n,
                                uint64_t enumeration_cap = 1000000);

// Convex selection on subsets of a finite point cloud in R^d, with stored
// barycentric certificates. Entries can be supplied explicitly or produced
// lazily by a generator (and are then cached, so serialization sees them).
class ConvexSelection {
 public:
  struct Entry {
    Vec point;
    Vec coeffs;  // over members, in member order
  };
  using Generator = std::function<Entry(const std::vector<std::string>&,
                                        const std::vector<Vec>&)>;

  ConvexSelection(int ambient_dim, int n,
                  std::map<std::string, Vec> cloud);

  int ambient_dim() const { return ambient_; }
  int n() const { return n_; }
  const std::map<std::string, Vec>& cloud() const { return cloud_; }

  void set_generator(Generator gen) { generator_ = std::move(gen); }
  void insert(const std::vector<std::string>& members, Entry entry);

  // Entry for a subset (sorted member ids), generating and validating on
  // demand; throws CertificateError when absent and no generator is set.
  const Entry& at(const std::vector<std::string>& members) const;

  const std::map<std::string, Entry>& table() const { return table_; }

  static std::string subset_key(std::vector<std::string> members);

 private:
  int ambient_;
  int n_;
  std::map<std::string, Vec> cloud_;
  mutable std::map<std::string, Entry> table_;
  Generator generator_;
};

struct SliceResult {
  double f = 0.0;       // coefficient of the distinguished point
  Vec phi_x;            // residual selection value over A
  Vec coeffs;           // convex coefficients over A, member order
  double residual = 0.0;  // reconstruction residual, ~0 by construction
};

// Splits phi(A ∪ {x}) into f*x + (1-f)*phi_x with phi_x in co(A); at f = 1
// the residual selection defaults to the barycenter of A.
SliceResult slice_selection(const ConvexSelection& sel, const std::string& x,
                            const std::vector<std::string>& a_members);

struct ContinuityNetRecord {
  std::vector<double> radii;       // Hausdorff distance to the singleton
  std::vector<double> phi_gaps;    // |phi(A_m) - x0|
  std::vector<double> f_values;    // slice coefficients along the net
  double f_limit = 0.0;
  bool phi_within_radius = false;  // quantitative singleton continuity
  bool f_converges = false;        // only checked when x is designated
};

struct ContinuityReport {
  std::vector<ContinuityNetRecord> records;
  bool pass = false;
};

struct ContinuityNet {
  std::string limit;                            // x0
  std::vector<std::vector<std::string>> terms;  // A_m, Hausdorff-shrinking
  std::optional<std::string> slice_point;       // x for the part-(2) check
};

ContinuityReport check_singleton_continuity(const ConvexSelection& sel,
                                            const std::vector<ContinuityNet>& nets,
                                            double tolerance);

}  // namespace hilbund
