// JSON schemas for every toolkit value plus the report envelope.

#include "hilbund/json_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hilbund/version.hpp"

namespace hilbund {

namespace {

void expect(bool cond, const std::string& msg) {
  if (!cond) throw ValidationError("input schema: " + msg);
}

const Json& field(const Json& j, const char* name) {
  expect(j.is_object() && j.contains(name),
         std::string("missing field '") + name + "'");
  return j.at(name);
}

}  // namespace

Json vec_to_json(const Vec& v) {
  Json arr = Json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Vec vec_from_json(const Json& j) {
  expect(j.is_array(), "vector must be an array of numbers");
  Vec v(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    expect(j[i].is_number(), "vector entries must be numbers");
    v(static_cast<int>(i)) = j[i].get<double>();
  }
  return v;
}

Json mat_to_json(const Mat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const Json& j) {
  expect(j.is_array() && !j.empty(), "matrix must be a nonempty array of rows");
  const size_t rows = j.size();
  Vec first = vec_from_json(j[0]);
  Mat m(rows, first.size());
  m.row(0) = first.transpose();
  for (size_t i = 1; i < rows; ++i) {
    Vec row = vec_from_json(j[i]);
    expect(row.size() == first.size(), "ragged matrix rows");
    m.row(static_cast<int>(i)) = row.transpose();
  }
  return m;
}

Json body_to_json(const SymmetricBody& body) {
  Json j;
  j["dim"] = body.dim();
  Json verts = Json::array();
  for (const Vec& v : body.vertices()) verts.push_back(vec_to_json(v));
  j["vertices"] = std::move(verts);
  return j;
}

SymmetricBody body_from_json(const Json& j) {
  const int dim = field(j, "dim").get<int>();
  std::vector<Vec> verts;
  for (const Json& v : field(j, "vertices")) verts.push_back(vec_from_json(v));
  return SymmetricBody(dim, std::move(verts));
}

Json subspace_to_json(const Subspace& s) {
  Json j;
  j["ambient_dim"] = s.ambient_dim;
  Json basis = Json::array();
  for (int c = 0; c < s.rank(); ++c) basis.push_back(vec_to_json(s.basis.col(c)));
  j["basis"] = std::move(basis);
  return j;
}

Subspace subspace_from_json(const Json& j) {
  const int ambient = field(j, "ambient_dim").get<int>();
  const Json& basis = field(j, "basis");
  Mat b(ambient, basis.size());
  for (size_t c = 0; c < basis.size(); ++c) {
    Vec col = vec_from_json(basis[c]);
    expect(col.size() == ambient, "basis vector dimension mismatch");
    b.col(static_cast<int>(c)) = col;
  }
  return Subspace(ambient, std::move(b));
}

Json ellipsoid_to_json(const Ellipsoid& e) {
  Json j;
  j["gram"] = mat_to_json(e.gram);
  return j;
}

Ellipsoid ellipsoid_from_json(const Json& j) {
  return Ellipsoid(mat_from_json(field(j, "gram")));
}

Json bundle_to_json(const Bundle& b) {
  Json j;
  j["ambient_dim"] = b.ambient_dim;
  if (b.allow_rank_zero) j["allow_rank_zero"] = true;
  Json verts = Json::array();
  for (const VertexId& v : b.base.vertices) {
    Json jv;
    jv["id"] = v;
    const Subspace& frame = b.fiber_basis.at(v);
    Json basis = Json::array();
    for (int c = 0; c < frame.rank(); ++c)
      basis.push_back(vec_to_json(frame.basis.col(c)));
    jv["fiber_basis"] = std::move(basis);
    Json ball = Json::array();
    if (frame.rank() > 0)
      for (const Vec& w : b.fiber_ball.at(v).vertices())
        ball.push_back(vec_to_json(w));
    jv["ball_vertices"] = std::move(ball);
    verts.push_back(std::move(jv));
  }
  j["vertices"] = std::move(verts);
  Json edges = Json::array();
  for (const Edge& e : b.base.edges) {
    Json je;
    je["a"] = e.a;
    je["b"] = e.b;
    je["length"] = e.length;
    edges.push_back(std::move(je));
  }
  j["edges"] = std::move(edges);
  Json sections = Json::array();
  for (const Section& s : b.sections) {
    Json js;
    js["id"] = s.id;
    Json values;
    for (const auto& [v, val] : s.values) values[v] = vec_to_json(val);
    js["values"] = std::move(values);
    sections.push_back(std::move(js));
  }
  j["sections"] = std::move(sections);
  return j;
}

Bundle bundle_from_json(const Json& j) {
  Bundle b;
  b.ambient_dim = field(j, "ambient_dim").get<int>();
  b.allow_rank_zero = j.value("allow_rank_zero", false);
  for (const Json& jv : field(j, "vertices")) {
    const std::string id = field(jv, "id").get<std::string>();
    b.base.vertices.push_back(id);
    const Json& basis = field(jv, "fiber_basis");
    Mat frame(b.ambient_dim, basis.size());
    for (size_t c = 0; c < basis.size(); ++c) {
      Vec col = vec_from_json(basis[c]);
      expect(col.size() == b.ambient_dim,
             "fiber basis dimension mismatch at " + id);
      frame.col(static_cast<int>(c)) = col;
    }
    b.fiber_basis.emplace(id, Subspace(b.ambient_dim, std::move(frame)));
    const Json& ball = field(jv, "ball_vertices");
    if (!ball.empty()) {
      std::vector<Vec> verts;
      for (const Json& w : ball) verts.push_back(vec_from_json(w));
      b.fiber_ball.emplace(id,
                           SymmetricBody(static_cast<int>(basis.size()),
                                         std::move(verts)));
    } else {
      expect(basis.empty(), "missing ball vertices at " + id);
    }
  }
  std::sort(b.base.vertices.begin(), b.base.vertices.end());
  for (const Json& je : field(j, "edges")) {
    Edge e;
    e.a = field(je, "a").get<std::string>();
    e.b = field(je, "b").get<std::string>();
    e.length = field(je, "length").get<double>();
    b.base.edges.push_back(std::move(e));
  }
  for (const Json& js : field(j, "sections")) {
    Section s;
    s.id = field(js, "id").get<std::string>();
    for (const auto& [v, val] : field(js, "values").items())
      s.values[v] = vec_from_json(val);
    b.sections.push_back(std::move(s));
  }
  return b;
}

Json stratification_to_json(const Stratification& s) {
  Json j;
  Json strata = Json::array();
  for (const auto& level : s.strata) strata.push_back(level);
  j["strata"] = std::move(strata);
  Json depth;
  for (const auto& [v, d] : s.depth) depth[v] = d;
  j["depth"] = std::move(depth);
  return j;
}

Json certificate_to_json(const LoewnerCertificate& c) {
  Json j;
  j["ellipsoid"] = ellipsoid_to_json(c.ellipsoid);
  j["distortion"] = c.distortion;
  j["john_bound"] = c.john_bound;
  j["iterations"] = c.iterations;
  j["achieved_gap"] = c.achieved_gap;
  return j;
}

Json distortion_to_json(const DistortionReport& r) {
  Json j;
  j["lower_scale"] = r.lower_scale;
  j["upper_scale"] = r.upper_scale;
  j["distortion"] = r.distortion;
  return j;
}

Json renorming_to_json(const Renorming& r) {
  Json j;
  Json per_vertex;
  for (const auto& [v, set] : r.sets) {
    Json gens = Json::array();
    for (const HilbertNorm& g : set.generators) gens.push_back(mat_to_json(g.gram));
    per_vertex[v] = Json{{"generators", std::move(gens)}};
  }
  j["per_vertex"] = std::move(per_vertex);
  j["distortion_sup"] = r.distortion_sup;
  j["instance_bound"] = r.instance_bound;
  j["stratification"] = stratification_to_json(r.strata);
  return j;
}

Json lsc_report_to_json(const LscReport& r) {
  Json j;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  Json records = Json::array();
  for (const LscNetRecord& rec : r.records) {
    Json jr;
    jr["limit"] = rec.limit;
    jr["approaching"] = rec.approaching;
    jr["target_generator"] = rec.target_generator;
    jr["gaps"] = rec.gaps;
    jr["witness_member"] = rec.witness_member;
    jr["monotone"] = rec.monotone;
    jr["pass"] = rec.pass;
    if (!rec.failure.empty()) jr["failure"] = rec.failure;
    records.push_back(std::move(jr));
  }
  j["records"] = std::move(records);
  return j;
}

Json selection_to_json(const Selection& s) {
  Json j;
  Json choice;
  for (const auto& [v, norm] : s.choice) choice[v] = mat_to_json(norm.gram);
  j["grams"] = std::move(choice);
  Json membership;
  for (const auto& [v, lambda] : s.membership) membership[v] = vec_to_json(lambda);
  j["membership"] = std::move(membership);
  j["modulus"] = s.modulus;
  j["complement_modulus"] = s.complement_modulus;
  return j;
}

Json metric_space_to_json(const FiniteMetricSpace& m) {
  Json j;
  j["points"] = m.points;
  j["dist"] = mat_to_json(m.dist);
  return j;
}

FiniteMetricSpace metric_space_from_json(const Json& j) {
  FiniteMetricSpace m;
  for (const Json& p : field(j, "points"))
    m.points.push_back(p.get<std::string>());
  m.dist = mat_from_json(field(j, "dist"));
  m.validate();
  return m;
}

Json hyperspace_to_json(const Hyperspace& h) {
  Json j;
  j["n"] = h.n;
  j["space"] = metric_space_to_json(h.space);
  return j;
}

Json incidence_to_json(const IncidenceSpace& inc) {
  Json j;
  j["space"] = metric_space_to_json(inc.space);
  Json proj = Json::array();
  for (const auto& [zi, si] : inc.pairs)
    proj.push_back(inc.hyper.space.points[static_cast<size_t>(si)]);
  j["projection"] = std::move(proj);
  Json fibers;
  for (size_t si = 0; si < inc.hyper.subsets.size(); ++si)
    fibers[inc.hyper.space.points[si]] =
        static_cast<int>(inc.hyper.subsets[si].members.size());
  j["fiber_cardinalities"] = std::move(fibers);
  return j;
}

Json cover_to_json(const AnchoredCover& c) {
  Json j;
  j["total"] = metric_space_to_json(c.total);
  j["base"] = metric_space_to_json(c.base);
  Json proj, anchor;
  for (const auto& [y, x] : c.proj) proj[y] = x;
  for (const auto& [y, z] : c.anchor) anchor[y] = z;
  j["proj"] = std::move(proj);
  j["anchor"] = std::move(anchor);
  return j;
}

AnchoredCover cover_from_json(const Json& j) {
  AnchoredCover c;
  c.total = metric_space_from_json(field(j, "total"));
  c.base = metric_space_from_json(field(j, "base"));
  for (const auto& [y, x] : field(j, "proj").items())
    c.proj[y] = x.get<std::string>();
  for (const auto& [y, z] : field(j, "anchor").items())
    c.anchor[y] = z.get<std::string>();
  return c;
}

Json subset_map_to_json(const std::map<std::string, SubsetPoint>& g,
                        const FiniteMetricSpace& z) {
  Json j;
  for (const auto& [x, subset] : g) {
    Json members = Json::array();
    for (int zi : subset.members)
      members.push_back(z.points[static_cast<size_t>(zi)]);
    j[x] = std::move(members);
  }
  return j;
}

std::map<std::string, SubsetPoint> subset_map_from_json(
    const Json& j, const FiniteMetricSpace& z) {
  std::map<std::string, SubsetPoint> g;
  expect(j.is_object(), "subset map must be an object");
  for (const auto& [x, members] : j.items()) {
    SubsetPoint s;
    for (const Json& m : members) s.members.push_back(z.index(m.get<std::string>()));
    std::sort(s.members.begin(), s.members.end());
    g[x] = std::move(s);
  }
  return g;
}

Json roundtrip_to_json(const RoundtripReport& r) {
  Json j;
  j["map_count"] = r.map_count;
  j["cover_class_count"] = r.cover_class_count;
  j["maps_restore_exactly"] = r.maps_restore_exactly;
  j["covers_restore_up_to_iso"] = r.covers_restore_up_to_iso;
  j["pass"] = r.pass;
  return j;
}

Json selection_table_to_json(const ConvexSelection& sel) {
  Json j;
  j["ambient_dim"] = sel.ambient_dim();
  j["n"] = sel.n();
  Json cloud;
  for (const auto& [id, p] : sel.cloud()) cloud[id] = vec_to_json(p);
  j["points"] = std::move(cloud);
  Json phi;
  for (const auto& [key, entry] : sel.table()) {
    Json je;
    je["point"] = vec_to_json(entry.point);
    je["coeffs"] = vec_to_json(entry.coeffs);
    phi[key] = std::move(je);
  }
  j["phi"] = std::move(phi);
  return j;
}

ConvexSelection convex_selection_from_json(const Json& j) {
  std::map<std::string, Vec> cloud;
  for (const auto& [id, p] : field(j, "points").items())
    cloud[id] = vec_from_json(p);
  ConvexSelection sel(field(j, "ambient_dim").get<int>(),
                      field(j, "n").get<int>(), std::move(cloud));
  if (j.contains("phi")) {
    for (const auto& [key, je] : j.at("phi").items()) {
      expect(key.size() >= 2 && key.front() == '{' && key.back() == '}',
             "malformed subset key " + key);
      std::vector<std::string> members;
      std::string inner = key.substr(1, key.size() - 2);
      std::stringstream ss(inner);
      std::string tok;
      while (std::getline(ss, tok, ',')) members.push_back(tok);
      ConvexSelection::Entry e;
      e.point = vec_from_json(field(je, "point"));
      e.coeffs = vec_from_json(field(je, "coeffs"));
      sel.insert(members, std::move(e));
    }
  }
  return sel;
}

Json continuity_to_json(const ContinuityReport& r) {
  Json j;
  j["pass"] = r.pass;
  Json records = Json::array();
  for (const ContinuityNetRecord& rec : r.records) {
    Json jr;
    jr["radii"] = rec.radii;
    jr["phi_gaps"] = rec.phi_gaps;
    jr["f_values"] = rec.f_values;
    jr["f_limit"] = rec.f_limit;
    jr["phi_within_radius"] = rec.phi_within_radius;
    jr["f_converges"] = rec.f_converges;
    records.push_back(std::move(jr));
  }
  j["records"] = std::move(records);
  return j;
}

Json make_report(const std::string& command, Json config, Json results) {
  Json j;
  j["schema_version"] = "1";
  j["command"] = command;
  j["config"] = std::move(config);
  j["results"] = std::move(results);
  j["timings"] = Json::object();
  j["tool_version"] = kToolVersion;
  return j;
}

void attach_timing(Json* report, const std::string& label, double seconds) {
  (*report)["timings"][label] = seconds;
}

std::string dump_report(const Json& report) { return report.dump(2) + "\n"; }

void write_report(const std::string& path, const Json& report) {
  const std::string payload = dump_report(report);
  if (path == "-") {
    std::cout << payload;
    return;
  }
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    require(out.good(), "cannot open output file " + tmp.string());
    out << payload;
    require(out.good(), "failed writing " + tmp.string());
  }
  fs::rename(tmp, target);
}

Json read_json_input(const std::string& path) {
  try {
    if (path == "-") return Json::parse(std::cin);
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open input file " + path);
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(std::string("input is not valid JSON: ") + e.what());
  }
}

}  // namespace hilbund
