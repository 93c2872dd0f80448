#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hilbund/geometry.hpp"

namespace hilbund {

// Two-dimensional overlay scenes: polygons from bodies, ellipses from
// Grams. Output is bit-stable for identical input (fixed formatting).
struct SvgScene {
  struct Polygon {
    std::vector<Vec> vertices;  // dim 2, drawn as the convex cycle
    std::string stroke = "#1f6f43";
  };
  struct Ellipse {
    Mat gram;  // 2x2 SPD
    std::string stroke = "#4757a5";
  };

  std::vector<Polygon> polygons;
  std::vector<Ellipse> ellipses;

  void add_body(const SymmetricBody& body, const std::string& stroke);
  void add_ellipsoid(const Ellipsoid& ell, const std::string& stroke);
};

std::string render_svg(const SvgScene& scene);
void write_svg(const std::string& path, const SvgScene& scene);

}  // namespace hilbund
