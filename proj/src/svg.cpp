// Static SVG rendering of planar bodies and ellipses.

#include "hilbund/svg.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace hilbund {

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

// Order polygon vertices counterclockwise around the origin.
std::vector<Vec> cycle_order(std::vector<Vec> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
    return std::atan2(a(1), a(0)) < std::atan2(b(1), b(0));
  });
  return pts;
}

}  // namespace

void SvgScene::add_body(const SymmetricBody& body, const std::string& stroke) {
  require(body.dim() == 2, "SvgScene: bodies must be 2-dimensional");
  polygons.push_back(Polygon{body.vertices(), stroke});
}

void SvgScene::add_ellipsoid(const Ellipsoid& ell, const std::string& stroke) {
  require(ell.dim() == 2, "SvgScene: ellipses must be 2-dimensional");
  ellipses.push_back(Ellipse{ell.gram, stroke});
}

std::string render_svg(const SvgScene& scene) {
  double extent = 1.0;
  for (const auto& poly : scene.polygons)
    for (const Vec& v : poly.vertices)
      extent = std::max(extent, v.lpNorm<Eigen::Infinity>());
  for (const auto& ell : scene.ellipses) {
    Eigen::SelfAdjointEigenSolver<Mat> es(ell.gram, Eigen::EigenvaluesOnly);
    extent = std::max(extent, 1.0 / std::sqrt(es.eigenvalues().minCoeff()));
  }
  const double pad = 1.15 * extent;
  const double scale = 240.0 / pad;
  auto px = [&](double x) { return fmt(260.0 + scale * x); };
  auto py = [&](double y) { return fmt(260.0 - scale * y); };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"520\" "
         "height=\"520\" viewBox=\"0 0 520 520\">\n";
  out += "  <rect width=\"520\" height=\"520\" fill=\"#ffffff\"/>\n";
  out += "  <line x1=\"0\" y1=\"260\" x2=\"520\" y2=\"260\" stroke=\"#dddddd\"/>\n";
  out += "  <line x1=\"260\" y1=\"0\" x2=\"260\" y2=\"520\" stroke=\"#dddddd\"/>\n";

  for (const auto& poly : scene.polygons) {
    out += "  <polygon points=\"";
    bool first = true;
    for (const Vec& v : cycle_order(poly.vertices)) {
      if (!first) out += ' ';
      out += px(v(0)) + ',' + py(v(1));
      first = false;
    }
    out += "\" fill=\"none\" stroke=\"" + poly.stroke + "\" stroke-width=\"2\"/>\n";
  }

  for (const auto& ell : scene.ellipses) {
    Eigen::SelfAdjointEigenSolver<Mat> es(ell.gram);
    internal_check(es.info() == Eigen::Success, "svg: eigensolve failed");
    const double a = 1.0 / std::sqrt(es.eigenvalues()(0));
    const double b = 1.0 / std::sqrt(es.eigenvalues()(1));
    const double angle =
        std::atan2(es.eigenvectors()(1, 0), es.eigenvectors()(0, 0)) * 180.0 /
        M_PI;
    out += "  <ellipse cx=\"0\" cy=\"0\" rx=\"" + fmt(scale * a) + "\" ry=\"" +
           fmt(scale * b) + "\" fill=\"none\" stroke=\"" + ell.stroke +
           "\" stroke-width=\"2\" transform=\"translate(" + fmt(260.0) + " " +
           fmt(260.0) + ") rotate(" + fmt(-angle) + ")\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

void write_svg(const std::string& path, const SvgScene& scene) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(out.good(), "cannot open SVG output " + path);
  out << render_svg(scene);
}

}  // namespace hilbund
