#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace hyopf {

using Complex = std::complex<double>;

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid electrical parameter (zero voltage ratio, bad bounds, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Mismatched vector or matrix dimensions.
class DimensionError : public Error {
 public:
  using Error::Error;
};

enum class BusKind { ac, dc };

/// Raw JSON text of extra fields attached to an entity, keyed by field name.
/// Carried through the grid document untouched.
using Annotations = std::map<std::string, std::string>;

/// Half-space `p * P + q * Q <= offset` in the P/Q plane.
struct HalfSpace {
  double p = 0.0;
  double q = 0.0;
  double offset = 0.0;

  bool operator==(const HalfSpace&) const = default;
};

using Polygon = std::vector<HalfSpace>;

/// Polygons may use at most this many half-spaces.
inline constexpr std::size_t kMaxHalfSpaces = 8;

struct Breakpoint {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const Breakpoint&) const = default;
};

/// Convex piecewise-linear cost given by breakpoints. Outside the breakpoint
/// range the first/last segment is extended. One breakpoint is a constant
/// cost, none is zero cost.
struct PwlCost {
  std::vector<Breakpoint> points;

  bool empty() const { return points.empty(); }
  double operator()(double x) const;
  /// Segment slopes, one fewer than the breakpoints.
  std::vector<double> slopes() const;
  /// Abscissae strictly increasing and slopes nondecreasing.
  bool is_convex() const;

  bool operator==(const PwlCost&) const = default;
};

struct Bus {
  int id = 0;
  BusKind kind = BusKind::ac;
  Complex shunt{0.0, 0.0};
  double v_min = 0.9;
  double v_max = 1.1;
  /// Fixed load in p.u., folded into a constant injector when the OPF is built.
  Complex load{0.0, 0.0};
  Annotations annotations;

  bool operator==(const Bus&) const = default;
};

struct Branch {
  int id = 0;
  int src = 0;
  int dst = 0;
  Complex y_series{0.0, 0.0};
  Complex y_src{0.0, 0.0};
  Complex y_dst{0.0, 0.0};
  Complex rho_src{1.0, 0.0};
  Complex rho_dst{1.0, 0.0};
  double i_max_src = 1.0;
  double i_max_dst = 1.0;
  // Voltage drop and angle bounds only apply to AC branches.
  double drop_min = -0.5;
  double drop_max = 0.5;
  double angle_min = -1.0;
  double angle_max = 1.0;
  Annotations annotations;

  bool operator==(const Branch&) const = default;
};

enum class Side { src, dst };

struct Converter {
  int id = 0;
  int src = 0;
  int dst = 0;
  double loss_fwd = 0.0;
  double loss_bwd = 0.0;
  /// No-load loss in p.u., drawn as a fixed load at `static_loss_side`.
  double static_loss = 0.0;
  Side static_loss_side = Side::src;
  /// Capability regions in terminal (P, Q) coordinates, power flowing from the
  /// converter into the respective bus.
  Polygon cap_src;
  Polygon cap_dst;
  Annotations annotations;

  bool operator==(const Converter&) const = default;
};

/// Generator, prosumer or flexible load. Power is counted positive into the bus.
struct Injector {
  int id = 0;
  int bus = 0;
  Polygon capability;
  PwlCost cost_p;
  PwlCost cost_q;
  Annotations annotations;

  bool operator==(const Injector&) const = default;
};

/// Hybrid AC/DC grid in per-unit on `base_mva`. Entity ids equal their
/// 1-based position in the respective list.
struct Grid {
  double base_mva = 100.0;
  std::vector<Bus> buses;
  std::vector<Branch> branches;
  std::vector<Converter> converters;
  std::vector<Injector> injectors;
  Annotations annotations;

  std::size_t bus_count() const { return buses.size(); }
  /// Bus by 1-based id; no bounds check beyond `at`.
  const Bus& bus(int id) const { return buses.at(static_cast<std::size_t>(id - 1)); }
  bool is_dc(int bus_id) const { return bus(bus_id).kind == BusKind::dc; }
  bool is_ac_branch(const Branch& b) const { return !is_dc(b.src) && !is_dc(b.dst); }
  std::size_t ac_branch_count() const;

  bool operator==(const Grid&) const = default;
};

/// Axis-aligned box `[p_min, p_max] x [q_min, q_max]` as four half-spaces.
Polygon box_polygon(double p_min, double p_max, double q_min, double q_max);

const char* to_string(BusKind kind);
const char* to_string(Side side);

}  // namespace hyopf
