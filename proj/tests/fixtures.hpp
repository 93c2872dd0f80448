#pragma once

#include <string>
#include <vector>

#include "hilbund/bundle.hpp"
#include "test_util.hpp"

namespace hilbund_test {

using hilbund::Bundle;
using hilbund::Edge;
using hilbund::Section;
using hilbund::Subspace;
using hilbund::SymmetricBody;
using hilbund::VertexId;

inline SymmetricBody square_ball() {
  return SymmetricBody(2, cube_vertices(2));
}

inline SymmetricBody segment_ball() {
  return SymmetricBody(1, {Vec(Vec::Ones(1)), Vec(-Vec::Ones(1))});
}

inline std::string path_vertex_name(int k) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "t%02d", k);
  return buf;
}

// Path bundle over parameter values `ts` in ambient R^2 with sections
// s1 = e1 and s2(t) = t*e2: fiber dimension 1 exactly at t = 0, square
// fiber balls on the 2-dimensional fibers.
inline Bundle make_jump_bundle(const std::vector<double>& ts) {
  Bundle b;
  b.ambient_dim = 2;
  Section s1{"s1", {}}, s2{"s2", {}};
  for (size_t k = 0; k < ts.size(); ++k) {
    const VertexId id = path_vertex_name(static_cast<int>(k));
    b.base.vertices.push_back(id);
    s1.values[id] = v2(1, 0);
    s2.values[id] = v2(0, ts[k]);
    if (ts[k] == 0.0) {
      Mat frame(2, 1);
      frame.col(0) = v2(1, 0);
      b.fiber_basis.emplace(id, Subspace(2, frame));
      b.fiber_ball.emplace(id, segment_ball());
    } else {
      b.fiber_basis.emplace(id, Subspace::full(2));
      b.fiber_ball.emplace(id, square_ball());
    }
  }
  std::sort(b.base.vertices.begin(), b.base.vertices.end());
  for (size_t k = 0; k + 1 < ts.size(); ++k)
    b.base.edges.push_back(Edge{path_vertex_name(static_cast<int>(k)),
                                path_vertex_name(static_cast<int>(k + 1)),
                                std::max(1e-3, std::abs(ts[k + 1] - ts[k]))});
  b.sections.push_back(std::move(s1));
  b.sections.push_back(std::move(s2));
  return b;
}

inline std::vector<double> three_vertex_ts() { return {0.0, 0.5, 1.0}; }

// Nine vertices closing in on t = 0 geometrically: the LSC tail gap at the
// innermost vertex is 1/128.
inline std::vector<double> nine_vertex_ts() {
  return {0.0,         1.0 / 128.0, 1.0 / 64.0, 1.0 / 32.0, 1.0 / 16.0,
          1.0 / 8.0,   1.0 / 4.0,   1.0 / 2.0,  1.0};
}

// Homogeneous bundle: constant square fibers over a path.
inline Bundle make_square_bundle(int vertices) {
  Bundle b;
  b.ambient_dim = 2;
  Section s1{"s1", {}}, s2{"s2", {}};
  for (int k = 0; k < vertices; ++k) {
    const VertexId id = path_vertex_name(k);
    b.base.vertices.push_back(id);
    s1.values[id] = v2(1, 0);
    s2.values[id] = v2(0, 1);
    b.fiber_basis.emplace(id, Subspace::full(2));
    b.fiber_ball.emplace(id, square_ball());
  }
  std::sort(b.base.vertices.begin(), b.base.vertices.end());
  for (int k = 0; k + 1 < vertices; ++k)
    b.base.edges.push_back(Edge{path_vertex_name(k), path_vertex_name(k + 1), 1.0});
  b.sections.push_back(std::move(s1));
  b.sections.push_back(std::move(s2));
  return b;
}

}  // namespace hilbund_test
