#include "hyopf/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hyopf {

double PwlCost::operator()(double x) const {
  if (points.empty()) {
    return 0.0;
  }
  if (points.size() == 1) {
    return points.front().y;
  }
  // Convex: the value is the maximum over the extended segments.
  double value = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto& a = points[i];
    const auto& b = points[i + 1];
    const double slope = (b.y - a.y) / (b.x - a.x);
    value = std::max(value, a.y + slope * (x - a.x));
  }
  return value;
}

std::vector<double> PwlCost::slopes() const {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    out.push_back((points[i + 1].y - points[i].y) / (points[i + 1].x - points[i].x));
  }
  return out;
}

bool PwlCost::is_convex() const {
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (!(points[i + 1].x > points[i].x)) {
      return false;
    }
  }
  const auto s = slopes();
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    // Relative slack for costs produced by sampling.
    if (s[i + 1] < s[i] - 1e-12 * std::max(1.0, std::abs(s[i]))) {
      return false;
    }
  }
  return true;
}

std::size_t Grid::ac_branch_count() const {
  return static_cast<std::size_t>(
      std::count_if(branches.begin(), branches.end(), [this](const Branch& b) {
        return is_ac_branch(b);
      }));
}

Polygon box_polygon(double p_min, double p_max, double q_min, double q_max) {
  return {{1.0, 0.0, p_max}, {-1.0, 0.0, -p_min}, {0.0, 1.0, q_max}, {0.0, -1.0, -q_min}};
}

const char* to_string(BusKind kind) { return kind == BusKind::ac ? "ac" : "dc"; }

const char* to_string(Side side) { return side == Side::src ? "src" : "dst"; }

}  // namespace hyopf
