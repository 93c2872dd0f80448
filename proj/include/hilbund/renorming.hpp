#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hilbund/bundle.hpp"
#include "hilbund/loewner.hpp"
#include "hilbund/seminorm.hpp"

namespace hilbund {

// Multi-valued Hilbert renorming over a bundle: per-vertex finitely
// generated Gram simplices (in fiber coordinates), plus the certified
// worst identity distortion against the original fiber gauges.
struct Renorming {
  std::map<VertexId, HilbertNormSet> sets;
  Stratification strata;
  double distortion_sup = 1.0;
  // Per-instance distortion budget dim_x * max slice constant, maximized
  // over vertices; distortion_sup must stay below it.
  double instance_bound = 1.0;
};

struct LscNet {
  VertexId limit;
  std::vector<VertexId> approaching;  // ordered toward the limit vertex
};

struct LscNetRecord {
  VertexId limit;
  std::vector<VertexId> approaching;
  int target_generator = 0;
  std::vector<double> gaps;           // per approaching vertex, net order
  std::vector<bool> witness_member;   // witness found inside K(x_m)
  bool monotone = false;              // gaps non-increasing along the net
  bool pass = false;                  // tail gap within tolerance
  std::string failure;                // set when the witness breaks down
};

struct LscReport {
  std::vector<LscNetRecord> records;
  double tolerance = 1e-2;
  bool pass = false;
};

struct Selection {
  std::map<VertexId, HilbertNorm> choice;       // fiber coordinates
  std::map<VertexId, Vec> membership;           // simplex certificates
  double modulus = 0.0;             // common-frame Frobenius rate across edges
  double complement_modulus = 0.0;  // leftover rate outside common subspaces
};

// Depth-0 value: the singleton Loewner ellipsoid of the fiber ball.
HilbertNormSet build_K0(const Bundle& bundle, const VertexId& x,
                        const MveeConfig& cfg = {});

// Depth-k value: for every enumerated slice S and every generator of the
// depth-(k-1) set of the slice body, the Loewner ellipsoid of
// co(generator ∪ (S-perp ∩ ball)), with S-perp taken in the inner product
// of the ball's own Loewner ellipsoid.
HilbertNormSet build_Kk(const Bundle& bundle, const VertexId& x, int depth,
                        const MveeConfig& cfg = {});

Renorming build_renorming(const Bundle& bundle, const MveeConfig& cfg = {});

// Net-wise lower semicontinuity check: for every generator of the limit
// set, rebuild the slice witness over each approaching vertex (span of the
// section tuple that frames the limit fiber) and record the seminorm gap
// on the probe sections. Passes when the tail gap is within tolerance.
LscReport verify_lsc(const Renorming& renorming, const Bundle& bundle,
                     const std::vector<LscNet>& nets,
                     const std::vector<std::string>& probe_section_ids,
                     double tolerance, const MveeConfig& cfg = {});

// Deterministic breadth-first selection: barycenter at the root, then the
// nearest hull member to the already-chosen parent in the common frame.
Selection select(const Renorming& renorming, const Bundle& bundle,
                 const VertexId& root);

}  // namespace hilbund
