// Recursive multi-valued Hilbert renorming with LSC and selection
// certificates over a discrete bundle.

#include "hilbund/renorming.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>

#include "hilbund/lp.hpp"
#include "hilbund/parallel.hpp"

namespace hilbund {

namespace {

// Deterministic ordering and deduplication of generator Grams.
void canonicalize_generators(std::vector<Mat>* grams) {
  std::sort(grams->begin(), grams->end(), [](const Mat& a, const Mat& b) {
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j) {
        if (a(i, j) < b(i, j) - 1e-15) return true;
        if (a(i, j) > b(i, j) + 1e-15) return false;
      }
    return false;
  });
  std::vector<Mat> unique;
  for (const Mat& g : *grams) {
    bool dup = false;
    for (const Mat& u : unique)
      if (max_abs(g - u) <= 1e-8 * std::max(1.0, max_abs(u))) {
        dup = true;
        break;
      }
    if (!dup) unique.push_back(g);
  }
  *grams = std::move(unique);
}

std::string ball_key(const SymmetricBody& ball, int level) {
  std::ostringstream key;
  key << level << '|' << ball.dim();
  key.precision(15);
  for (const Vec& v : ball.vertices())
    for (int i = 0; i < v.size(); ++i) key << ',' << v(i);
  return key.str();
}

struct LevelMemo {
  std::map<std::string, std::vector<Mat>> table;
};

// The recursion works on plain (ball, section-value) data so slice bodies
// can reuse it; level 0 is the Loewner singleton, level k builds the
// sliced hull family on top of level k-1. Memoized per (ball, level): the
// full-space slice replays the previous level verbatim.
std::vector<Mat> build_level(const SymmetricBody& ball,
                             const std::vector<Vec>& section_values, int level,
                             const MveeConfig& cfg, LevelMemo* memo) {
  const std::string key = ball_key(ball, level);
  if (auto it = memo->table.find(key); it != memo->table.end())
    return it->second;
  const int d = ball.dim();
  Ellipsoid loewner = mvee_points(ball.vertices(), cfg).ellipsoid;
  if (level <= 0) {
    memo->table[key] = {loewner.gram};
    return memo->table[key];
  }

  // Slice family: spans of nonempty section-value subsets plus the full
  // space, deduplicated by span.
  std::vector<Subspace> slices;
  auto push_unique = [&](Subspace s) {
    if (s.empty()) return;
    for (const Subspace& t : slices) {
      if (t.rank() != s.rank()) continue;
      Eigen::HouseholderQR<Mat> qs(s.basis), qt(t.basis);
      Mat us = qs.householderQ() * Mat::Identity(d, s.rank());
      Mat ut = qt.householderQ() * Mat::Identity(d, t.rank());
      Eigen::JacobiSVD<Mat> svd(us.transpose() * ut);
      if (svd.singularValues().minCoeff() > 1.0 - tol::kSpan) return;
    }
    slices.push_back(std::move(s));
  };
  const int m = static_cast<int>(section_values.size());
  internal_check(m <= 16, "build_level: too many sections");
  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<Vec> subset;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) subset.push_back(section_values[i]);
    push_unique(Subspace::span_of(d, subset));
  }
  push_unique(Subspace::full(d));

  std::vector<Mat> grams;
  for (const Subspace& s : slices) {
    if (s.rank() == d) {
      // Full-space slice: the complement is zero, the hull is the inner
      // body itself, so the previous level passes through unchanged.
      std::vector<Mat> inner =
          build_level(ball, section_values, level - 1, cfg, memo);
      for (Mat& g : inner) grams.push_back(std::move(g));
      continue;
    }
    SymmetricBody slice_ball = intersect_subspace(ball, s);
    // Section values that stay inside the slice, in slice coordinates.
    std::vector<Vec> inner_values;
    Eigen::ColPivHouseholderQR<Mat> qr(s.basis);
    qr.setThreshold(tol::kSpan);
    for (const Vec& w : section_values) {
      Vec coords = qr.solve(w);
      if ((s.basis * coords - w).lpNorm<Eigen::Infinity>() <= tol::kSpan)
        inner_values.push_back(coords);
    }
    std::vector<Mat> inner =
        build_level(slice_ball, inner_values, level - 1, cfg, memo);

    Subspace perp = orthogonal_complement(s, loewner);
    std::vector<HullGenerator> gens;
    if (!perp.empty()) {
      SymmetricBody comp = intersect_subspace(ball, perp);
      std::vector<Vec> comp_pts;
      for (const Vec& w : comp.vertices()) comp_pts.push_back(perp.basis * w);
      gens.emplace_back(convex_hull_points(d, comp_pts));
    }
    for (const Mat& inner_gram : inner) {
      std::vector<HullGenerator> current = gens;
      current.emplace_back(EmbeddedEllipsoid(s, Ellipsoid(inner_gram)));
      grams.push_back(loewner_hull(current, cfg).ellipsoid.gram);
    }
  }
  canonicalize_generators(&grams);
  memo->table[key] = grams;
  return grams;
}

HilbertNormSet to_norm_set(std::vector<Mat> grams) {
  std::vector<HilbertNorm> gens;
  gens.reserve(grams.size());
  for (Mat& g : grams) gens.emplace_back(std::move(g));
  return HilbertNormSet(std::move(gens));
}

double body_vs_gram_distortion(const SymmetricBody& ball, const Mat& gram) {
  return distortion(Seminorm(ball), Seminorm(HilbertNorm(gram))).distortion;
}

// Ambient PSD quadratic form of a fiber Gram: v' M v equals the fiber norm
// for v in the fiber span (pseudo-inverse pullback of the frame).
Mat ambient_form(const Subspace& frame, const Mat& gram) {
  Eigen::CompleteOrthogonalDecomposition<Mat> cod(frame.basis);
  Mat pinv = cod.pseudoInverse();
  return symmetrized(pinv.transpose() * gram * pinv);
}

// Orthonormal basis of the intersection of two spans via principal angles.
Mat common_subspace(const Subspace& a, const Subspace& b) {
  if (a.empty() || b.empty()) return Mat(a.ambient_dim, 0);
  Eigen::HouseholderQR<Mat> qa(a.basis), qb(b.basis);
  Mat ua = qa.householderQ() * Mat::Identity(a.ambient_dim, a.rank());
  Mat ub = qb.householderQ() * Mat::Identity(b.ambient_dim, b.rank());
  Eigen::JacobiSVD<Mat> svd(ua.transpose() * ub,
                            Eigen::ComputeFullU | Eigen::ComputeFullV);
  int k = 0;
  while (k < svd.singularValues().size() &&
         svd.singularValues()(k) > 1.0 - 1e-9)
    ++k;
  if (k == 0) return Mat(a.ambient_dim, 0);
  return ua * svd.matrixU().leftCols(k);
}

}  // namespace

HilbertNormSet build_K0(const Bundle& bundle, const VertexId& x,
                        const MveeConfig& cfg) {
  LevelMemo memo;
  return to_norm_set(build_level(bundle.fiber_ball.at(x),
                                 bundle.section_values_at(x), 0, cfg, &memo));
}

HilbertNormSet build_Kk(const Bundle& bundle, const VertexId& x, int depth,
                        const MveeConfig& cfg) {
  require(depth >= 0, "build_Kk: negative depth");
  LevelMemo memo;
  return to_norm_set(build_level(bundle.fiber_ball.at(x),
                                 bundle.section_values_at(x), depth, cfg,
                                 &memo));
}

Renorming build_renorming(const Bundle& bundle, const MveeConfig& cfg) {
  validate(bundle);
  for (const VertexId& v : bundle.base.vertices)
    require(bundle.fiber_dim(v) >= 1,
            "build_renorming: rank-0 fiber at " + v + "; augment first");

  Renorming out;
  out.strata = stratify(bundle);

  struct PerVertex {
    std::vector<Mat> grams;
    double distortion = 1.0;
    double bound = 1.0;
  };
  const auto& order = bundle.base.vertices;
  std::vector<PerVertex> slots(order.size());
  parallel_for(static_cast<int>(order.size()), [&](int i) {
    const VertexId& v = order[static_cast<size_t>(i)];
    const int depth = out.strata.depth.at(v);
    LevelMemo memo;
    PerVertex slot;
    slot.grams = build_level(bundle.fiber_ball.at(v),
                             bundle.section_values_at(v), depth, cfg, &memo);
    internal_check(!slot.grams.empty(), "build_renorming: empty value set");
    const SymmetricBody& ball = bundle.fiber_ball.at(v);
    for (const Mat& g : slot.grams)
      slot.distortion = std::max(slot.distortion,
                                 body_vs_gram_distortion(ball, g));
    // Distortion budget: dim * worst slice constant at this vertex.
    Ellipsoid loewner = mvee_points(ball.vertices(), cfg).ellipsoid;
    double worst_cs = 1.0;
    for (const Subspace& s : enumerate_slices(bundle, v, bundle.fiber_dim(v)))
      worst_cs = std::max(worst_cs, slice_constant(ball, s, loewner));
    slot.bound = bundle.fiber_dim(v) * worst_cs;
    slots[static_cast<size_t>(i)] = std::move(slot);
  });

  out.distortion_sup = 1.0;
  out.instance_bound = 1.0;
  for (size_t i = 0; i < order.size(); ++i) {
    out.distortion_sup = std::max(out.distortion_sup, slots[i].distortion);
    out.instance_bound = std::max(out.instance_bound, slots[i].bound);
    out.sets.emplace(order[i], to_norm_set(std::move(slots[i].grams)));
  }
  for (const auto& [v, set] : out.sets)
    for (const HilbertNorm& g : set.generators)
      internal_check(g.full_rank, "build_renorming: rank-deficient generator");
  internal_check(std::isfinite(out.distortion_sup),
                 "build_renorming: unbounded distortion");
  // The slice budget is provable for depth <= 1; deeper strata compound
  // and are only reported.
  if (out.strata.max_depth() <= 1)
    internal_check(out.distortion_sup <= out.instance_bound + 1e-6,
                   "build_renorming: distortion exceeded the slice budget");
  return out;
}

// ---------------------------------------------------------------------------
// Lower semicontinuity

namespace {

// Indices of a section tuple whose values frame the limit fiber, greedy in
// section order (deterministic).
std::vector<int> framing_tuple(const Bundle& bundle, const VertexId& limit) {
  const int r = bundle.fiber_dim(limit);
  std::vector<Vec> values = bundle.section_values_at(limit);
  std::vector<int> chosen;
  Mat acc(r, 0);
  for (size_t i = 0; i < values.size() && static_cast<int>(chosen.size()) < r;
       ++i) {
    Mat trial(r, acc.cols() + 1);
    trial.leftCols(acc.cols()) = acc;
    trial.col(acc.cols()) = values[i];
    if (numeric_rank(trial) == trial.cols()) {
      chosen.push_back(static_cast<int>(i));
      acc = std::move(trial);
    }
  }
  internal_check(static_cast<int>(chosen.size()) == r,
                 "framing_tuple: sections do not frame the fiber");
  return chosen;
}

// The slice witness at an approaching vertex: Loewner of
// co(K_L(slice ball) ∪ (slice-perp ∩ ball)).
Mat slice_witness(const Bundle& bundle, const VertexId& x,
                  const std::vector<int>& tuple, const MveeConfig& cfg,
                  std::string* failure) {
  const int d = bundle.fiber_dim(x);
  std::vector<Vec> values = bundle.section_values_at(x);
  std::vector<Vec> tuple_values;
  for (int i : tuple) tuple_values.push_back(values[i]);
  Subspace s = Subspace::span_of(d, tuple_values);
  if (s.rank() != static_cast<int>(tuple.size())) {
    *failure = "witness sections dependent at " + x +
               "; the discretization is too coarse";
    return Mat();
  }
  const SymmetricBody& ball = bundle.fiber_ball.at(x);
  Ellipsoid loewner = mvee_points(ball.vertices(), cfg).ellipsoid;
  if (s.rank() == d) return loewner.gram;
  SymmetricBody slice_ball = intersect_subspace(ball, s);
  Ellipsoid inner = mvee_points(slice_ball.vertices(), cfg).ellipsoid;
  std::vector<HullGenerator> gens;
  gens.emplace_back(EmbeddedEllipsoid(s, inner));
  Subspace perp = orthogonal_complement(s, loewner);
  if (!perp.empty()) {
    SymmetricBody comp = intersect_subspace(ball, perp);
    std::vector<Vec> pts;
    for (const Vec& w : comp.vertices()) pts.push_back(perp.basis * w);
    gens.emplace_back(convex_hull_points(d, pts));
  }
  return loewner_hull(gens, cfg).ellipsoid.gram;
}

}  // namespace

LscReport verify_lsc(const Renorming& renorming, const Bundle& bundle,
                     const std::vector<LscNet>& nets,
                     const std::vector<std::string>& probe_section_ids,
                     double tolerance, const MveeConfig& cfg) {
  require(tolerance > 0.0, "verify_lsc: tolerance must be positive");
  std::vector<const Section*> probes;
  for (const std::string& id : probe_section_ids) {
    const Section* found = nullptr;
    for (const Section& s : bundle.sections)
      if (s.id == id) found = &s;
    require(found != nullptr, "verify_lsc: unknown probe section " + id);
    probes.push_back(found);
  }
  require(!probes.empty(), "verify_lsc: no probe sections");

  LscReport report;
  report.tolerance = tolerance;
  report.pass = true;

  for (const LscNet& net : nets) {
    require(bundle.base.has_vertex(net.limit),
            "verify_lsc: unknown limit vertex " + net.limit);
    require(!net.approaching.empty(), "verify_lsc: empty net");
    const int limit_depth = renorming.strata.depth.at(net.limit);
    for (size_t i = 0; i < net.approaching.size(); ++i) {
      const VertexId& v = net.approaching[i];
      require(bundle.base.has_vertex(v), "verify_lsc: unknown vertex " + v);
      require(renorming.strata.depth.at(v) >= limit_depth,
              "verify_lsc: net must approach from within the same or deeper "
              "strata; vertex " + v + " sits below the limit " + net.limit);
      const VertexId& next =
          (i + 1 < net.approaching.size()) ? net.approaching[i + 1] : net.limit;
      if (v != next)
        require(bundle.base.adjacent(v, next),
                "verify_lsc: net hops non-adjacent vertices " + v + ", " + next);
    }

    std::vector<int> tuple = framing_tuple(bundle, net.limit);
    const HilbertNormSet& limit_set = renorming.sets.at(net.limit);

    for (int gi = 0; gi < limit_set.size(); ++gi) {
      LscNetRecord rec;
      rec.limit = net.limit;
      rec.approaching = net.approaching;
      rec.target_generator = gi;
      const HilbertNorm& target = limit_set.generators[gi];

      bool failed = false;
      for (const VertexId& xm : net.approaching) {
        std::string failure;
        Mat witness_gram =
            slice_witness(bundle, xm, tuple, cfg, &failure);
        if (!failure.empty()) {
          rec.failure = failure;
          failed = true;
          break;
        }
        HilbertNorm witness(witness_gram);
        MembershipResult member =
            l2_hull_membership(witness, renorming.sets.at(xm), 1e-7);
        if (!member.member) {
          // The slice witness lives outside a shallow-stratum value set;
          // fall back to the nearest hull member and mark it.
          const HilbertNormSet& set = renorming.sets.at(xm);
          const int dm = set.dim();
          Mat cols(dm * dm, set.size());
          for (int i = 0; i < set.size(); ++i)
            cols.col(i) = Eigen::Map<const Vec>(set.generators[i].gram.data(),
                                                dm * dm);
          Vec wv = Eigen::Map<const Vec>(witness_gram.data(), dm * dm);
          SimplexLsResult proj = simplex_least_squares(cols, wv);
          Vec nearest = cols * proj.lambda;
          witness = HilbertNorm(
              symmetrized(Mat(Eigen::Map<Mat>(nearest.data(), dm, dm))));
        }
        rec.witness_member.push_back(member.member);

        double gap = 0.0;
        for (const Section* s : probes) {
          Vec at_m = bundle.fiber_coordinates(xm, s->values.at(xm));
          Vec at_limit =
              bundle.fiber_coordinates(net.limit, s->values.at(net.limit));
          const double vm =
              std::sqrt(std::max(0.0, at_m.dot(witness.gram * at_m)));
          const double vl =
              std::sqrt(std::max(0.0, at_limit.dot(target.gram * at_limit)));
          gap = std::max(gap, std::abs(vm - vl));
        }
        rec.gaps.push_back(gap);
      }

      if (!failed) {
        rec.monotone = true;
        for (size_t i = 1; i < rec.gaps.size(); ++i)
          if (rec.gaps[i] > rec.gaps[i - 1] + 1e-12) rec.monotone = false;
        rec.pass = !rec.gaps.empty() && rec.gaps.back() <= tolerance;
      }
      report.pass = report.pass && rec.pass;
      report.records.push_back(std::move(rec));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Selection

Selection select(const Renorming& renorming, const Bundle& bundle,
                 const VertexId& root) {
  require(bundle.base.has_vertex(root), "select: unknown root " + root);
  Selection sel;

  std::deque<VertexId> queue{root};
  std::map<VertexId, VertexId> parent;
  std::set<VertexId> visited{root};
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    const HilbertNormSet& set = renorming.sets.at(v);
    const int d = set.dim();

    Vec lambda;
    if (v == root) {
      lambda = Vec::Constant(set.size(), 1.0 / set.size());
    } else {
      const VertexId& p = parent.at(v);
      Mat common =
          common_subspace(bundle.fiber_basis.at(v), bundle.fiber_basis.at(p));
      if (common.cols() == 0) {
        lambda = Vec::Constant(set.size(), 1.0 / set.size());
      } else {
        Mat target_form =
            ambient_form(bundle.fiber_basis.at(p), sel.choice.at(p).gram);
        Mat target = common.transpose() * target_form * common;
        const int k = static_cast<int>(common.cols());
        Mat cols(k * k, set.size());
        for (int i = 0; i < set.size(); ++i) {
          Mat restricted =
              common.transpose() *
              ambient_form(bundle.fiber_basis.at(v), set.generators[i].gram) *
              common;
          cols.col(i) = Eigen::Map<const Vec>(restricted.data(), k * k);
        }
        Vec b = Eigen::Map<const Vec>(target.data(), k * k);
        lambda = simplex_least_squares(cols, b).lambda;
      }
    }

    Mat gram = Mat::Zero(d, d);
    for (int i = 0; i < set.size(); ++i) gram += lambda(i) * set.generators[i].gram;
    sel.choice.emplace(v, HilbertNorm(symmetrized(gram)));
    sel.membership.emplace(v, lambda);

    for (const VertexId& u : bundle.base.neighbors(v))
      if (visited.insert(u).second) {
        parent[u] = v;
        queue.push_back(u);
      }
  }

  // Modulus across edges in the shared ambient frame: Frobenius rate on the
  // common subspace plus a separately reported leftover rate.
  for (const Edge& e : bundle.base.edges) {
    Mat ma = ambient_form(bundle.fiber_basis.at(e.a), sel.choice.at(e.a).gram);
    Mat mb = ambient_form(bundle.fiber_basis.at(e.b), sel.choice.at(e.b).gram);
    Mat diff = ma - mb;
    Mat common =
        common_subspace(bundle.fiber_basis.at(e.a), bundle.fiber_basis.at(e.b));
    double common_norm = 0.0;
    Mat captured = Mat::Zero(diff.rows(), diff.cols());
    if (common.cols() > 0) {
      Mat restricted = common.transpose() * diff * common;
      common_norm = restricted.norm();
      captured = common * restricted * common.transpose();
    }
    sel.modulus = std::max(sel.modulus, common_norm / e.length);
    sel.complement_modulus =
        std::max(sel.complement_modulus, (diff - captured).norm() / e.length);
  }
  return sel;
}

}  // namespace hilbund
