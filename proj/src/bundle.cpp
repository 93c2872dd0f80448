// Discrete subhomogeneous bundle model over a finite metric graph.

#include "hilbund/bundle.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hilbund {

void BaseGraph::validate() const {
  require(!vertices.empty(), "BaseGraph: no vertices");
  std::set<VertexId> seen(vertices.begin(), vertices.end());
  require(seen.size() == vertices.size(), "BaseGraph: duplicate vertex ids");
  require(std::is_sorted(vertices.begin(), vertices.end()),
          "BaseGraph: vertices must be sorted");
  std::set<std::pair<VertexId, VertexId>> edge_keys;
  for (const Edge& e : edges) {
    require(seen.count(e.a) && seen.count(e.b),
            "BaseGraph: edge endpoint not a vertex: " + e.a + "-" + e.b);
    require(e.a != e.b, "BaseGraph: self loop at " + e.a);
    require(e.length > 0.0, "BaseGraph: nonpositive edge length");
    auto key = std::minmax(e.a, e.b);
    require(edge_keys.insert(key).second, "BaseGraph: duplicate edge");
  }
  // Connectivity by union-find-free BFS.
  std::set<VertexId> reached{vertices.front()};
  std::vector<VertexId> queue{vertices.front()};
  while (!queue.empty()) {
    VertexId v = queue.back();
    queue.pop_back();
    for (const Edge& e : edges) {
      VertexId other;
      if (e.a == v)
        other = e.b;
      else if (e.b == v)
        other = e.a;
      else
        continue;
      if (reached.insert(other).second) queue.push_back(other);
    }
  }
  require(reached.size() == vertices.size(), "BaseGraph: not connected");
}

bool BaseGraph::has_vertex(const VertexId& v) const {
  return std::binary_search(vertices.begin(), vertices.end(), v);
}

std::vector<VertexId> BaseGraph::neighbors(const VertexId& v) const {
  std::vector<VertexId> out;
  for (const Edge& e : edges) {
    if (e.a == v) out.push_back(e.b);
    if (e.b == v) out.push_back(e.a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool BaseGraph::adjacent(const VertexId& a, const VertexId& b) const {
  for (const Edge& e : edges)
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return true;
  return false;
}

int Bundle::fiber_dim(const VertexId& v) const {
  auto it = fiber_basis.find(v);
  require(it != fiber_basis.end(), "Bundle: unknown vertex " + v);
  return it->second.rank();
}

Vec Bundle::fiber_coordinates(const VertexId& v, const Vec& ambient,
                              double residual_tol) const {
  auto it = fiber_basis.find(v);
  require(it != fiber_basis.end(), "Bundle: unknown vertex " + v);
  const Mat& b = it->second.basis;
  if (ambient.size() != ambient_dim)
    throw DimensionError(dim_mismatch_msg("fiber_coordinates", ambient_dim,
                                          static_cast<int>(ambient.size())));
  if (b.cols() == 0) {
    if (ambient.lpNorm<Eigen::Infinity>() > residual_tol)
      throw SectionError("vector outside rank-0 fiber at " + v);
    return Vec(0);
  }
  Vec coords = (b.transpose() * b).ldlt().solve(b.transpose() * ambient);
  const double residual = (b * coords - ambient).lpNorm<Eigen::Infinity>();
  if (residual > residual_tol) {
    std::ostringstream msg;
    msg << "vector leaves the fiber at " << v << " (residual " << residual
        << ")";
    throw SectionError(msg.str());
  }
  return coords;
}

std::vector<Vec> Bundle::section_values_at(const VertexId& v) const {
  std::vector<Vec> out;
  for (const Section& s : sections) {
    auto it = s.values.find(v);
    require(it != s.values.end(),
            "Bundle: section " + s.id + " missing value at " + v);
    out.push_back(fiber_coordinates(v, it->second));
  }
  return out;
}

BundleDiagnostics validate(const Bundle& bundle) {
  require(bundle.ambient_dim >= 1 && bundle.ambient_dim <= tol::kMaxDim,
          "Bundle: ambient dimension must be in [1, 8]");
  bundle.base.validate();
  require(!bundle.sections.empty(), "Bundle: no generating sections");

  BundleDiagnostics diag;
  std::vector<std::string> offending;
  for (const VertexId& v : bundle.base.vertices) {
    auto basis_it = bundle.fiber_basis.find(v);
    if (basis_it == bundle.fiber_basis.end()) {
      offending.push_back(v + ": missing fiber basis");
      continue;
    }
    const Subspace& frame = basis_it->second;
    if (frame.ambient_dim != bundle.ambient_dim) {
      offending.push_back(v + ": fiber frame in wrong ambient dimension");
      continue;
    }
    const int r = frame.rank();
    diag.fiber_dims[v] = r;
    if (r == 0) {
      if (!bundle.allow_rank_zero) {
        offending.push_back(v + ": rank-0 fiber (augment the bundle first)");
      } else {
        diag.warnings.push_back(v + ": rank-0 fiber");
      }
      continue;
    }
    auto ball_it = bundle.fiber_ball.find(v);
    if (ball_it == bundle.fiber_ball.end()) {
      offending.push_back(v + ": missing fiber ball");
      continue;
    }
    if (ball_it->second.dim() != r) {
      offending.push_back(v + ": ball dimension differs from fiber rank");
      continue;
    }
    // Sections must generate the fiber: equal spans both ways.
    Mat values(bundle.ambient_dim, static_cast<int>(bundle.sections.size()));
    bool missing = false;
    for (size_t i = 0; i < bundle.sections.size(); ++i) {
      auto it = bundle.sections[i].values.find(v);
      if (it == bundle.sections[i].values.end() ||
          it->second.size() != bundle.ambient_dim) {
        offending.push_back(v + ": section " + bundle.sections[i].id +
                            " missing or mis-sized");
        missing = true;
        break;
      }
      values.col(static_cast<int>(i)) = it->second;
    }
    if (missing) continue;
    if (numeric_rank(values) != r) {
      offending.push_back(v + ": section values do not span the fiber");
      continue;
    }
    Mat joint(bundle.ambient_dim, values.cols() + frame.basis.cols());
    joint << values, frame.basis;
    if (numeric_rank(joint) != r) {
      offending.push_back(v + ": section values leave the fiber frame");
      continue;
    }
  }
  const int max_dim =
      diag.fiber_dims.empty()
          ? 0
          : std::max_element(diag.fiber_dims.begin(), diag.fiber_dims.end(),
                             [](const auto& a, const auto& b) {
                               return a.second < b.second;
                             })
                ->second;
  internal_check(max_dim <= bundle.ambient_dim,
                 "fiber dimension exceeds ambient dimension");

  if (!offending.empty()) {
    std::ostringstream msg;
    msg << "Bundle invariant violations:";
    for (const std::string& s : offending) msg << "\n  " << s;
    throw ValidationError(msg.str());
  }

  // Edge-sampled continuity hints: large per-length section jumps usually
  // mean the base graph is too coarse.
  for (const Edge& e : bundle.base.edges) {
    double worst = 0.0;
    for (const Section& s : bundle.sections) {
      const Vec& va = s.values.at(e.a);
      const Vec& vb = s.values.at(e.b);
      worst = std::max(worst, (va - vb).norm() / e.length);
    }
    if (worst > 16.0) {
      std::ostringstream w;
      w << "edge " << e.a << "-" << e.b << ": section jump rate " << worst
        << " per unit length; consider refining";
      diag.warnings.push_back(w.str());
    }
  }
  return diag;
}

Bundle augment_trivial(const Bundle& bundle) {
  Bundle out;
  out.ambient_dim = bundle.ambient_dim + 1;
  require(out.ambient_dim <= tol::kMaxDim,
          "augment_trivial: ambient dimension cap exceeded");
  out.base = bundle.base;
  out.allow_rank_zero = false;

  auto lift = [&](const Vec& v) {
    Vec w(v.size() + 1);
    w.head(v.size()) = v;
    w(v.size()) = 0.0;
    return w;
  };

  for (const Section& s : bundle.sections) {
    Section ls;
    ls.id = s.id;
    for (const auto& [v, val] : s.values) ls.values[v] = lift(val);
    out.sections.push_back(std::move(ls));
  }
  Section axis;
  axis.id = "trivial_axis";
  for (const VertexId& v : bundle.base.vertices) {
    Vec e = Vec::Zero(out.ambient_dim);
    e(out.ambient_dim - 1) = 1.0;
    axis.values[v] = e;
  }
  out.sections.push_back(std::move(axis));

  for (const VertexId& v : bundle.base.vertices) {
    const Subspace& frame = bundle.fiber_basis.at(v);
    const int r = frame.rank();
    Mat basis(out.ambient_dim, r + 1);
    for (int j = 0; j < r; ++j) basis.col(j) = lift(frame.basis.col(j));
    basis.col(r) = Vec::Zero(out.ambient_dim);
    basis(out.ambient_dim - 1, r) = 1.0;
    out.fiber_basis.emplace(v, Subspace(out.ambient_dim, basis));

    std::vector<Vec> ball_pts;
    if (r > 0) {
      for (const Vec& w : bundle.fiber_ball.at(v).vertices()) {
        Vec lw(r + 1);
        lw.head(r) = w;
        lw(r) = 0.0;
        ball_pts.push_back(lw);
      }
    }
    Vec up = Vec::Zero(r + 1);
    up(r) = 1.0;
    ball_pts.push_back(up);
    ball_pts.push_back(-up);
    out.fiber_ball.emplace(v, convex_hull_points(r + 1, ball_pts));
  }
  return out;
}

Stratification stratify(const Bundle& bundle) {
  validate(bundle);
  Stratification strat;
  std::map<VertexId, int> dims;
  for (const VertexId& v : bundle.base.vertices) dims[v] = bundle.fiber_dim(v);

  std::set<VertexId> assigned;
  std::set<VertexId> prev;
  const int hard_cap = static_cast<int>(bundle.base.vertices.size()) + 1;
  for (int k = 0; k <= hard_cap; ++k) {
    std::set<VertexId> cur;
    for (const VertexId& v : bundle.base.vertices) {
      bool ok = true;
      std::vector<VertexId> star = bundle.base.neighbors(v);
      star.push_back(v);
      for (const VertexId& u : star) {
        if (prev.count(u)) continue;
        if (dims[u] >= dims[v]) continue;
        ok = false;
        break;
      }
      if (ok) cur.insert(v);
    }
    internal_check(std::includes(cur.begin(), cur.end(), prev.begin(), prev.end()),
                   "stratify: strata failed to ascend");
    strat.strata.emplace_back(cur.begin(), cur.end());
    for (const VertexId& v : cur)
      if (!assigned.count(v)) {
        strat.depth[v] = k;
        assigned.insert(v);
      }
    if (cur.size() == bundle.base.vertices.size()) return strat;
    internal_check(cur.size() > prev.size() || k == 0,
                   "stratify: rule reached a non-total fixed point");
    prev = std::move(cur);
  }
  throw InternalError("stratify: failed to terminate");
}

std::vector<Subspace> enumerate_slices(const Bundle& bundle, const VertexId& x,
                                       int max_rank) {
  require(bundle.base.has_vertex(x), "enumerate_slices: unknown vertex " + x);
  const int r = bundle.fiber_dim(x);
  require(r >= 1, "enumerate_slices: rank-0 fiber at " + x);
  std::vector<Vec> values = bundle.section_values_at(x);
  const int m = static_cast<int>(values.size());
  require(m <= 16, "enumerate_slices: too many sections to enumerate");

  std::vector<Subspace> out;
  auto push_unique = [&](Subspace s) {
    if (s.empty()) return;
    if (s.rank() > max_rank && s.rank() != r) return;
    for (const Subspace& t : out) {
      if (t.rank() != s.rank()) continue;
      // Subspace equality via principal angles: the product of Q-factors
      // has all singular values 1 exactly when the spans agree.
      Eigen::HouseholderQR<Mat> qs(s.basis), qt(t.basis);
      Mat us = qs.householderQ() * Mat::Identity(s.ambient_dim, s.rank());
      Mat ut = qt.householderQ() * Mat::Identity(t.ambient_dim, t.rank());
      Eigen::JacobiSVD<Mat> svd(us.transpose() * ut);
      if (svd.singularValues().minCoeff() > 1.0 - tol::kSpan) return;
    }
    out.push_back(std::move(s));
  };

  for (unsigned mask = 1; mask < (1u << m); ++mask) {
    std::vector<Vec> subset;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) subset.push_back(values[i]);
    push_unique(Subspace::span_of(r, subset));
  }
  push_unique(Subspace::full(r));

  // Full fiber first, then by ascending rank, deterministic within rank by
  // basis entries.
  std::stable_sort(out.begin(), out.end(),
                   [&](const Subspace& a, const Subspace& b) {
                     const bool fa = a.rank() == r, fb = b.rank() == r;
                     if (fa != fb) return fa;
                     return a.rank() < b.rank();
                   });
  return out;
}

SectionNormProfile section_norm_profile(const Bundle& bundle,
                                        const Section& s) {
  SectionNormProfile prof;
  for (const VertexId& v : bundle.base.vertices) {
    auto it = s.values.find(v);
    require(it != s.values.end(),
            "section_norm_profile: missing value at " + v);
    Vec coords = bundle.fiber_coordinates(v, it->second);
    double val = 0.0;
    if (coords.size() > 0 && coords.lpNorm<Eigen::Infinity>() > 0.0)
      val = gauge(bundle.fiber_ball.at(v), coords);
    prof.values[v] = val;
    prof.sup = std::max(prof.sup, val);
  }
  return prof;
}

}  // namespace hilbund
