// Finite hyperspaces, anchored branched covers, and convex selections.

#include "hilbund/hyperspace.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <sstream>

namespace hilbund {

void FiniteMetricSpace::validate() const {
  require(!points.empty(), "FiniteMetricSpace: no points");
  std::set<std::string> seen(points.begin(), points.end());
  require(seen.size() == points.size(), "FiniteMetricSpace: duplicate ids");
  const int m = size();
  require(dist.rows() == m && dist.cols() == m,
          "FiniteMetricSpace: distance matrix shape mismatch");
  for (int i = 0; i < m; ++i) {
    require(dist(i, i) == 0.0, "FiniteMetricSpace: nonzero self distance");
    for (int j = 0; j < m; ++j) {
      require(std::abs(dist(i, j) - dist(j, i)) <= tol::kSym,
              "FiniteMetricSpace: asymmetric distances");
      if (i != j)
        require(dist(i, j) > 0.0, "FiniteMetricSpace: zero distance between " +
                                      points[i] + " and " + points[j]);
      for (int k = 0; k < m; ++k)
        require(dist(i, j) <= dist(i, k) + dist(k, j) + tol::kSym,
                "FiniteMetricSpace: triangle inequality fails");
    }
  }
}

int FiniteMetricSpace::index(const std::string& id) const {
  auto it = std::find(points.begin(), points.end(), id);
  require(it != points.end(), "FiniteMetricSpace: unknown point " + id);
  return static_cast<int>(it - points.begin());
}

std::string SubsetPoint::key(const FiniteMetricSpace& space) const {
  std::ostringstream os;
  os << '{';
  for (size_t i = 0; i < members.size(); ++i) {
    if (i) os << ',';
    os << space.points[static_cast<size_t>(members[i])];
  }
  os << '}';
  return os.str();
}

double hausdorff_distance(const FiniteMetricSpace& z, const SubsetPoint& a,
                          const SubsetPoint& b) {
  auto directed = [&](const SubsetPoint& from, const SubsetPoint& to) {
    double worst = 0.0;
    for (int i : from.members) {
      double best = std::numeric_limits<double>::infinity();
      for (int j : to.members) best = std::min(best, z.d(i, j));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

Hyperspace build_hyperspace(const FiniteMetricSpace& z, int n) {
  require(n >= 1, "build_hyperspace: n must be at least 1");
  z.validate();
  require(z.size() <= 20, "build_hyperspace: base space too large");
  Hyperspace h;
  h.n = n;
  const int m = z.size();
  for (uint32_t mask = 1; mask < (1u << m); ++mask) {
    if (std::popcount(mask) > n) continue;
    SubsetPoint s;
    for (int i = 0; i < m; ++i)
      if (mask & (1u << i)) s.members.push_back(i);
    h.subsets.push_back(std::move(s));
  }
  std::sort(h.subsets.begin(), h.subsets.end(),
            [](const SubsetPoint& a, const SubsetPoint& b) {
              if (a.members.size() != b.members.size())
                return a.members.size() < b.members.size();
              return a.members < b.members;
            });
  const int count = static_cast<int>(h.subsets.size());
  h.space.points.reserve(count);
  for (const SubsetPoint& s : h.subsets) h.space.points.push_back(s.key(z));
  h.space.dist = Mat::Zero(count, count);
  for (int i = 0; i < count; ++i)
    for (int j = i + 1; j < count; ++j) {
      const double d = hausdorff_distance(z, h.subsets[i], h.subsets[j]);
      h.space.dist(i, j) = d;
      h.space.dist(j, i) = d;
    }
  return h;
}

int Hyperspace::subset_index(const SubsetPoint& s) const {
  for (size_t i = 0; i < subsets.size(); ++i)
    if (subsets[i] == s) return static_cast<int>(i);
  throw InternalError("Hyperspace: subset not present");
}

IncidenceSpace build_incidence(const FiniteMetricSpace& z, int n) {
  IncidenceSpace inc;
  inc.hyper = build_hyperspace(z, n);
  for (size_t si = 0; si < inc.hyper.subsets.size(); ++si)
    for (int zi : inc.hyper.subsets[si].members)
      inc.pairs.emplace_back(zi, static_cast<int>(si));
  std::sort(inc.pairs.begin(), inc.pairs.end(),
            [&](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second < b.second;
              return a.first < b.first;
            });
  const int count = static_cast<int>(inc.pairs.size());
  inc.space.points.reserve(count);
  for (const auto& [zi, si] : inc.pairs)
    inc.space.points.push_back(z.points[static_cast<size_t>(zi)] + "|" +
                               inc.hyper.space.points[static_cast<size_t>(si)]);
  inc.space.dist = Mat::Zero(count, count);
  for (int i = 0; i < count; ++i)
    for (int j = i + 1; j < count; ++j) {
      const double d =
          std::max(z.d(inc.pairs[i].first, inc.pairs[j].first),
                   inc.hyper.space.dist(inc.pairs[i].second, inc.pairs[j].second));
      inc.space.dist(i, j) = d;
      inc.space.dist(j, i) = d;
    }
  // Fiber cardinality over a subset A is |A| by construction; the maximal
  // one realizes the branching bound.
  return inc;
}

void AnchoredCover::validate(const FiniteMetricSpace& z, int n) const {
  total.validate();
  base.validate();
  std::map<std::string, std::vector<std::string>> fibers;
  for (const std::string& y : total.points) {
    auto pit = proj.find(y);
    require(pit != proj.end(), "AnchoredCover: missing projection at " + y);
    require(std::find(base.points.begin(), base.points.end(), pit->second) !=
                base.points.end(),
            "AnchoredCover: projection target not in base");
    auto ait = anchor.find(y);
    require(ait != anchor.end(), "AnchoredCover: missing anchor at " + y);
    z.index(ait->second);
    fibers[pit->second].push_back(y);
  }
  for (const std::string& x : base.points) {
    auto fit = fibers.find(x);
    require(fit != fibers.end() && !fit->second.empty(),
            "AnchoredCover: projection not surjective at " + x);
    require(static_cast<int>(fit->second.size()) <= n,
            "AnchoredCover: fiber over " + x + " exceeds the branching bound");
    std::set<std::string> anchors;
    for (const std::string& y : fit->second) {
      if (!anchors.insert(anchor.at(y)).second)
        throw AnchorError("anchor not injective on the fiber over " + x +
                          " (value " + anchor.at(y) + ")");
    }
  }
}

std::map<std::string, SubsetPoint> cover_to_map(const AnchoredCover& cover,
                                                const FiniteMetricSpace& z,
                                                int n) {
  cover.validate(z, n);
  std::map<std::string, SubsetPoint> g;
  for (const std::string& y : cover.total.points) {
    const std::string& x = cover.proj.at(y);
    g[x].members.push_back(z.index(cover.anchor.at(y)));
  }
  for (auto& [x, subset] : g)
    std::sort(subset.members.begin(), subset.members.end());
  return g;
}

AnchoredCover map_to_cover(const std::map<std::string, SubsetPoint>& g,
                           const FiniteMetricSpace& x,
                           const FiniteMetricSpace& z, int n) {
  AnchoredCover cover;
  cover.base = x;
  std::vector<std::string> ids;
  std::vector<std::pair<int, int>> carriers;  // (x index, z index)
  for (int xi = 0; xi < x.size(); ++xi) {
    const std::string& xid = x.points[static_cast<size_t>(xi)];
    auto git = g.find(xid);
    require(git != g.end(), "map_to_cover: map not total at " + xid);
    require(!git->second.members.empty() &&
                static_cast<int>(git->second.members.size()) <= n,
            "map_to_cover: subset size out of range at " + xid);
    for (int zi : git->second.members) {
      ids.push_back(xid + "|" + z.points[static_cast<size_t>(zi)] + "|" +
                    git->second.key(z));
      carriers.emplace_back(xi, zi);
      cover.proj[ids.back()] = xid;
      cover.anchor[ids.back()] = z.points[static_cast<size_t>(zi)];
    }
  }
  cover.total.points = ids;
  const int count = static_cast<int>(ids.size());
  cover.total.dist = Mat::Zero(count, count);
  Hyperspace h = build_hyperspace(z, n);
  for (int i = 0; i < count; ++i)
    for (int j = i + 1; j < count; ++j) {
      const auto& [xi, zi] = carriers[static_cast<size_t>(i)];
      const auto& [xj, zj] = carriers[static_cast<size_t>(j)];
      const int si = h.subset_index(g.at(x.points[static_cast<size_t>(xi)]));
      const int sj = h.subset_index(g.at(x.points[static_cast<size_t>(xj)]));
      const double d =
          std::max({x.d(xi, xj), z.d(zi, zj), h.space.dist(si, sj)});
      cover.total.dist(i, j) = d;
      cover.total.dist(j, i) = d;
    }
  return cover;
}

namespace {

// Iterate over all maps X -> subsets; `assignment` holds subset indices.
bool next_assignment(std::vector<int>* assignment, int radix) {
  for (size_t i = 0; i < assignment->size(); ++i) {
    if (++(*assignment)[i] < radix) return true;
    (*assignment)[i] = 0;
  }
  return false;
}

}  // namespace

RoundtripReport roundtrip_check(const FiniteMetricSpace& x,
                                const FiniteMetricSpace& z, int n,
                                uint64_t enumeration_cap) {
  x.validate();
  Hyperspace h = build_hyperspace(z, n);
  const uint64_t radix = h.subsets.size();
  uint64_t total = 1;
  for (int i = 0; i < x.size(); ++i) {
    total *= radix;
    if (total > enumeration_cap)
      throw EnumerationCapError(
          "roundtrip_check: map count exceeds the enumeration cap");
  }

  RoundtripReport rep;
  rep.maps_restore_exactly = true;
  rep.covers_restore_up_to_iso = true;

  // A cover class over a finite discrete-ish base is exactly the data of
  // the anchored fiber image per point; realize each class concretely with
  // scrambled fiber labels so the composites are checked on covers that do
  // not carry the canonical pullback naming.
  auto concrete_cover = [&](const std::map<std::string, SubsetPoint>& g) {
    AnchoredCover c;
    c.base = x;
    std::vector<std::pair<int, int>> carriers;
    for (int xi = 0; xi < x.size(); ++xi) {
      const std::string& xid = x.points[static_cast<size_t>(xi)];
      const SubsetPoint& a = g.at(xid);
      for (size_t k = 0; k < a.members.size(); ++k) {
        // Reverse fiber order: labels carry no anchor information.
        const int zi = a.members[a.members.size() - 1 - k];
        c.total.points.push_back(xid + "#" + std::to_string(k));
        carriers.emplace_back(xi, zi);
        c.proj[c.total.points.back()] = xid;
        c.anchor[c.total.points.back()] = z.points[static_cast<size_t>(zi)];
      }
    }
    const int count = static_cast<int>(c.total.points.size());
    c.total.dist = Mat::Zero(count, count);
    for (int i = 0; i < count; ++i)
      for (int j = i + 1; j < count; ++j) {
        const double d =
            std::max(x.d(carriers[static_cast<size_t>(i)].first,
                         carriers[static_cast<size_t>(j)].first),
                     z.d(carriers[static_cast<size_t>(i)].second,
                         carriers[static_cast<size_t>(j)].second));
        c.total.dist(i, j) = d;
        c.total.dist(j, i) = d;
      }
    return c;
  };

  std::vector<int> assignment(static_cast<size_t>(x.size()), 0);
  do {
    std::map<std::string, SubsetPoint> g;
    for (int xi = 0; xi < x.size(); ++xi)
      g[x.points[static_cast<size_t>(xi)]] =
          h.subsets[static_cast<size_t>(assignment[static_cast<size_t>(xi)])];
    ++rep.map_count;

    // Maps -> covers -> maps is the identity on the nose.
    AnchoredCover pullback = map_to_cover(g, x, z, n);
    if (cover_to_map(pullback, z, n) != g) rep.maps_restore_exactly = false;

    // Covers -> maps -> covers is the identity up to the canonical
    // y -> (proj y, anchor y) relabeling.
    ++rep.cover_class_count;
    AnchoredCover cover = concrete_cover(g);
    std::map<std::string, SubsetPoint> g_back = cover_to_map(cover, z, n);
    AnchoredCover again = map_to_cover(g_back, x, z, n);
    bool iso = again.total.points.size() == cover.total.points.size();
    if (iso) {
      std::set<std::string> hit;
      for (const std::string& y : cover.total.points) {
        const std::string target = cover.proj.at(y) + "|" + cover.anchor.at(y) +
                                   "|" + g_back.at(cover.proj.at(y)).key(z);
        if (again.proj.find(target) == again.proj.end() ||
            again.proj.at(target) != cover.proj.at(y) ||
            again.anchor.at(target) != cover.anchor.at(y) ||
            !hit.insert(target).second) {
          iso = false;
          break;
        }
      }
    }
    if (!iso) rep.covers_restore_up_to_iso = false;
  } while (next_assignment(&assignment, static_cast<int>(radix)));

  rep.pass = rep.maps_restore_exactly && rep.covers_restore_up_to_iso &&
             rep.map_count == rep.cover_class_count;
  return rep;
}

// ---------------------------------------------------------------------------
// Convex selections

ConvexSelection::ConvexSelection(int ambient_dim, int n,
                                 std::map<std::string, Vec> cloud)
    : ambient_(ambient_dim), n_(n), cloud_(std::move(cloud)) {
  require(ambient_ >= 1, "ConvexSelection: ambient dimension must be positive");
  require(n_ >= 1, "ConvexSelection: n must be at least 1");
  for (const auto& [id, p] : cloud_)
    require(p.size() == ambient_, "ConvexSelection: point " + id +
                                      " has the wrong dimension");
}

std::string ConvexSelection::subset_key(std::vector<std::string> members) {
  std::sort(members.begin(), members.end());
  std::ostringstream os;
  os << '{';
  for (size_t i = 0; i < members.size(); ++i) {
    if (i) os << ',';
    os << members[i];
  }
  os << '}';
  return os.str();
}

void ConvexSelection::insert(const std::vector<std::string>& members,
                             Entry entry) {
  std::vector<std::string> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  require(entry.coeffs.size() == static_cast<int>(sorted.size()),
          "ConvexSelection: coefficient count mismatch");
  table_[subset_key(sorted)] = std::move(entry);
}

const ConvexSelection::Entry& ConvexSelection::at(
    const std::vector<std::string>& members) const {
  std::vector<std::string> sorted = members;
  std::sort(sorted.begin(), sorted.end());
  require(!sorted.empty() && static_cast<int>(sorted.size()) <= n_,
          "ConvexSelection: subset size out of range");
  const std::string key = subset_key(sorted);
  auto it = table_.find(key);
  if (it == table_.end()) {
    if (!generator_)
      throw CertificateError("ConvexSelection: no certificate stored for " +
                             key);
    std::vector<Vec> pts;
    for (const std::string& id : sorted) {
      auto cit = cloud_.find(id);
      require(cit != cloud_.end(), "ConvexSelection: unknown point " + id);
      pts.push_back(cit->second);
    }
    Entry e = generator_(sorted, pts);
    require(e.coeffs.size() == static_cast<int>(sorted.size()),
            "ConvexSelection: generator returned a bad certificate");
    it = table_.emplace(key, std::move(e)).first;
  }
  // Validate the certificate: simplex coefficients reproducing the point.
  const Entry& e = it->second;
  require(e.coeffs.minCoeff() >= -1e-12 &&
              std::abs(e.coeffs.sum() - 1.0) <= 1e-10,
          "ConvexSelection: coefficients not in the simplex for " + key);
  Vec combo = Vec::Zero(ambient_);
  for (size_t i = 0; i < sorted.size(); ++i)
    combo += e.coeffs(static_cast<int>(i)) * cloud_.at(sorted[i]);
  if ((combo - e.point).lpNorm<Eigen::Infinity>() > 1e-12)
    throw CertificateError(
        "ConvexSelection: certificate does not reproduce phi at " + key);
  return e;
}

SliceResult slice_selection(const ConvexSelection& sel, const std::string& x,
                            const std::vector<std::string>& a_members) {
  require(std::find(a_members.begin(), a_members.end(), x) == a_members.end(),
          "slice_selection: the distinguished point must lie outside A");
  std::vector<std::string> joined = a_members;
  joined.push_back(x);
  const ConvexSelection::Entry& entry = sel.at(joined);

  std::vector<std::string> sorted = joined;
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::string> a_sorted = a_members;
  std::sort(a_sorted.begin(), a_sorted.end());

  SliceResult out;
  Vec a_coeffs(a_sorted.size());
  int xi = -1;
  {
    int ai = 0;
    for (size_t i = 0; i < sorted.size(); ++i) {
      if (sorted[i] == x) {
        xi = static_cast<int>(i);
        continue;
      }
      a_coeffs(ai++) = entry.coeffs(static_cast<int>(i));
    }
  }
  internal_check(xi >= 0, "slice_selection: lost the distinguished point");
  out.f = entry.coeffs(xi);

  if (out.f < 1.0 - 1e-12) {
    out.coeffs = a_coeffs / (1.0 - out.f);
  } else {
    out.f = 1.0;
    // Endpoint case: any convex choice works; take the barycenter.
    out.coeffs = Vec::Constant(static_cast<int>(a_sorted.size()),
                               1.0 / static_cast<double>(a_sorted.size()));
  }
  out.phi_x = Vec::Zero(sel.ambient_dim());
  for (size_t i = 0; i < a_sorted.size(); ++i)
    out.phi_x += out.coeffs(static_cast<int>(i)) * sel.cloud().at(a_sorted[i]);
  const Vec rebuilt =
      out.f * sel.cloud().at(x) + (1.0 - out.f) * out.phi_x;
  out.residual = (rebuilt - entry.point).lpNorm<Eigen::Infinity>();
  internal_check(out.residual <= 1e-12,
                 "slice_selection: reconstruction residual too large");
  return out;
}

ContinuityReport check_singleton_continuity(
    const ConvexSelection& sel, const std::vector<ContinuityNet>& nets,
    double tolerance) {
  require(tolerance > 0.0, "check_singleton_continuity: bad tolerance");
  ContinuityReport rep;
  rep.pass = true;
  for (const ContinuityNet& net : nets) {
    auto limit_it = sel.cloud().find(net.limit);
    require(limit_it != sel.cloud().end(),
            "check_singleton_continuity: unknown limit point " + net.limit);
    const Vec& x0 = limit_it->second;
    require(!net.terms.empty(), "check_singleton_continuity: empty net");
    if (net.slice_point)
      require(*net.slice_point != net.limit,
              "check_singleton_continuity: the slice point must differ from "
              "the limit");

    ContinuityNetRecord rec;
    double prev_radius = std::numeric_limits<double>::infinity();
    for (const std::vector<std::string>& term : net.terms) {
      double radius = 0.0;
      for (const std::string& id : term) {
        auto it = sel.cloud().find(id);
        require(it != sel.cloud().end(),
                "check_singleton_continuity: unknown point " + id);
        radius = std::max(radius, (it->second - x0).norm());
      }
      if (radius > prev_radius + tol::kSym)
        throw NetError(
            "check_singleton_continuity: net radii must be non-increasing");
      prev_radius = radius;
      rec.radii.push_back(radius);

      const ConvexSelection::Entry& e = sel.at(term);
      rec.phi_gaps.push_back((e.point - x0).norm());
      if (net.slice_point) {
        SliceResult s = slice_selection(sel, *net.slice_point, term);
        rec.f_values.push_back(s.f);
      }
    }
    if (rec.radii.back() > tolerance)
      throw NetError(
          "check_singleton_continuity: net does not reach the singleton");

    // Quantitative singleton continuity: phi(A) lies in co(A), whose
    // points are within the Hausdorff radius of the limit.
    rec.phi_within_radius = true;
    for (size_t i = 0; i < rec.radii.size(); ++i)
      if (rec.phi_gaps[i] > rec.radii[i] + 1e-12) rec.phi_within_radius = false;

    if (net.slice_point) {
      SliceResult limit_slice =
          slice_selection(sel, *net.slice_point, {net.limit});
      rec.f_limit = limit_slice.f;
      rec.f_converges =
          std::abs(rec.f_values.back() - rec.f_limit) <= tolerance;
    } else {
      rec.f_converges = true;
    }
    rep.pass = rep.pass && rec.phi_within_radius && rec.f_converges;
    rep.records.push_back(std::move(rec));
  }
  return rep;
}

}  // namespace hilbund
