#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "cli.hpp"

namespace snowlab::cli {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace

std::string points_svg(const Matrix& points, const SvgOptions& opt) {
  constexpr double size = 640.0;
  constexpr double pad = 40.0;
  const Eigen::Index n = points.rows();
  Matrix p(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    double x = points(i, 0);
    double y = points.cols() > 1 ? points(i, 1) : 0.0;
    if (opt.log_radius) {
      const double r = std::hypot(x, y);
      if (r > 0.0) {
        const double s = std::log1p(r) / r;
        x *= s;
        y *= s;
      }
    }
    p(i, 0) = x;
    p(i, 1) = y;
  }
  double lo_x = 0.0, hi_x = 1.0, lo_y = 0.0, hi_y = 1.0;
  if (n > 0) {
    lo_x = p.col(0).minCoeff();
    hi_x = p.col(0).maxCoeff();
    lo_y = p.col(1).minCoeff();
    hi_y = p.col(1).maxCoeff();
  }
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-300});
  const double scale = (size - 2.0 * pad) / span;
  auto sx = [&](double x) { return pad + (x - lo_x) * scale; };
  auto sy = [&](double y) { return size - pad - (y - lo_y) * scale; };

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"640\" viewBox=\"0 0 640 640\">\n";
  out += "<rect width=\"640\" height=\"640\" fill=\"white\"/>\n";
  out += "<text x=\"20\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">" + escape(opt.title) + "</text>\n";
  if (opt.polyline && n > 1) {
    out += "<polyline fill=\"none\" stroke=\"#4a6fa5\" stroke-width=\"1\" points=\"";
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i) out += ' ';
      out += fmt(sx(p(i, 0))) + "," + fmt(sy(p(i, 1)));
    }
    out += "\"/>\n";
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    out += "<circle cx=\"" + fmt(sx(p(i, 0))) + "\" cy=\"" + fmt(sy(p(i, 1))) + "\" r=\"3\" fill=\"#c0392b\"/>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace snowlab::cli
