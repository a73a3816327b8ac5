#pragma once

#include "hyopf/grid.hpp"

namespace hyopf {

/// Extent of a P/Q polygon, obtained by maximizing and minimizing P and Q.
struct PolygonExtent {
  bool empty = false;
  bool bounded = false;
  double p_min = 0.0;
  double p_max = 0.0;
  double q_min = 0.0;
  double q_max = 0.0;
};

/// Solves the four linear programs max/min P, max/min Q over the polygon.
/// The programs are two-dimensional, so they are solved exactly by checking
/// recession directions along every boundary line and enumerating vertices.
PolygonExtent polygon_extent(const Polygon& polygon, double tol = 1e-9);

/// True if `(p, q)` satisfies every half-space within `tol`.
bool polygon_contains(const Polygon& polygon, double p, double q, double tol = 1e-9);

}  // namespace hyopf
