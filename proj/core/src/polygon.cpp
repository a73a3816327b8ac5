#include "hyopf/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hyopf {

bool polygon_contains(const Polygon& polygon, double p, double q, double tol) {
  return std::all_of(polygon.begin(), polygon.end(), [&](const HalfSpace& h) {
    const double scale = std::max(1.0, std::hypot(h.p, h.q));
    return h.p * p + h.q * q <= h.offset + tol * scale;
  });
}

PolygonExtent polygon_extent(const Polygon& polygon, double tol) {
  PolygonExtent out;

  Polygon lines;
  for (const auto& h : polygon) {
    if (std::hypot(h.p, h.q) <= tol) {
      // Degenerate 0 <= offset rule.
      if (h.offset < -tol) {
        out.empty = true;
        return out;
      }
      continue;
    }
    lines.push_back(h);
  }
  if (lines.empty()) {
    return out;  // whole plane
  }

  // A nonzero recession direction, if any, lies on some boundary line.
  for (const auto& h : lines) {
    for (const double sign : {1.0, -1.0}) {
      const double dp = -sign * h.q;
      const double dq = sign * h.p;
      const double norm = std::hypot(dp, dq);
      const bool recedes = std::all_of(lines.begin(), lines.end(), [&](const HalfSpace& g) {
        return (g.p * dp + g.q * dq) / (norm * std::hypot(g.p, g.q)) <= tol;
      });
      if (recedes) {
        out.bounded = false;
        // Emptiness still matters for an unbounded region, but callers only
        // need it for bounded ones; treat as nonempty.
        return out;
      }
    }
  }
  out.bounded = true;

  bool found = false;
  out.p_min = out.q_min = std::numeric_limits<double>::infinity();
  out.p_max = out.q_max = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      const auto& a = lines[i];
      const auto& b = lines[j];
      const double det = a.p * b.q - a.q * b.p;
      if (std::abs(det) <= tol * std::hypot(a.p, a.q) * std::hypot(b.p, b.q)) {
        continue;
      }
      const double p = (a.offset * b.q - a.q * b.offset) / det;
      const double q = (a.p * b.offset - a.offset * b.p) / det;
      if (!polygon_contains(lines, p, q, tol)) {
        continue;
      }
      found = true;
      out.p_min = std::min(out.p_min, p);
      out.p_max = std::max(out.p_max, p);
      out.q_min = std::min(out.q_min, q);
      out.q_max = std::max(out.q_max, q);
    }
  }
  out.empty = !found;
  return out;
}

}  // namespace hyopf
