#include "hyopf/validation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <set>
#include <sstream>

#include "hyopf/polygon.hpp"

namespace hyopf {
namespace {

std::string entity(const char* kind, int id) { return std::string(kind) + " " + std::to_string(id); }

class Collector {
 public:
  void add(std::string rule, std::string who, std::string message) {
    report_.violations.push_back({std::move(rule), std::move(who), std::move(message)});
  }
  ValidationReport& report() { return report_; }

 private:
  ValidationReport report_;
};

bool valid_bus(const Grid& grid, int id) {
  return id >= 1 && static_cast<std::size_t>(id) <= grid.buses.size();
}

// Simple undirected adjacency over the buses, parallel branches merged and
// self-loops or dangling endpoints skipped.
std::vector<std::set<int>> adjacency(const Grid& grid, bool dc_only) {
  std::vector<std::set<int>> adj(grid.buses.size());
  for (const auto& br : grid.branches) {
    if (!valid_bus(grid, br.src) || !valid_bus(grid, br.dst) || br.src == br.dst) {
      continue;
    }
    if (dc_only && (!grid.is_dc(br.src) || !grid.is_dc(br.dst))) {
      continue;
    }
    adj[br.src - 1].insert(br.dst - 1);
    adj[br.dst - 1].insert(br.src - 1);
  }
  return adj;
}

std::vector<std::vector<int>> components(const std::vector<std::set<int>>& adj,
                                         const std::vector<bool>& include) {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(adj.size(), false);
  for (std::size_t start = 0; start < adj.size(); ++start) {
    if (seen[start] || !include[start]) {
      continue;
    }
    std::vector<int> comp;
    std::queue<int> todo;
    todo.push(static_cast<int>(start));
    seen[start] = true;
    while (!todo.empty()) {
      const int n = todo.front();
      todo.pop();
      comp.push_back(n + 1);
      for (int m : adj[n]) {
        if (!seen[m]) {
          seen[m] = true;
          todo.push(m);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

// A simple graph is a forest iff |edges| = |vertices| - |components|.
bool is_forest(const std::vector<std::set<int>>& adj, const std::vector<bool>& include) {
  std::size_t vertices = 0;
  std::size_t edge_ends = 0;
  for (std::size_t n = 0; n < adj.size(); ++n) {
    if (include[n]) {
      ++vertices;
      edge_ends += adj[n].size();
    }
  }
  const auto comps = components(adj, include).size();
  return edge_ends / 2 + comps == vertices;
}

void check_polygon(Collector& out, const Polygon& poly, const std::string& who,
                   const std::string& what, bool require_bounded) {
  if (poly.size() > kMaxHalfSpaces) {
    out.add("polygon.too_many_half_spaces", who,
            what + " uses " + std::to_string(poly.size()) + " half-spaces (at most 8)");
  }
  const auto ext = polygon_extent(poly);
  if (require_bounded && !ext.bounded) {
    out.add("polygon.unbounded", who, what + " is unbounded");
  } else if (ext.bounded && ext.empty) {
    out.add("polygon.empty", who, what + " is empty");
  }
}

}  // namespace

bool ValidationReport::has_rule(const std::string& rule) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.rule == rule; });
}

ValidationError::ValidationError(ValidationReport report)
    : Error([&] {
        std::ostringstream msg;
        msg << "grid validation failed with " << report.violations.size() << " violation(s)";
        if (!report.violations.empty()) {
          const auto& v = report.violations.front();
          msg << ": " << v.entity << ": " << v.message;
        }
        return msg.str();
      }()),
      report_(std::move(report)) {}

std::vector<std::vector<int>> subgrids(const Grid& grid) {
  return components(adjacency(grid, false), std::vector<bool>(grid.buses.size(), true));
}

std::vector<BusIncidence> incidence(const Grid& grid) {
  std::vector<BusIncidence> out(grid.buses.size());
  for (const auto& br : grid.branches) {
    if (valid_bus(grid, br.src)) out[br.src - 1].branches_out.push_back(br.id);
    if (valid_bus(grid, br.dst)) out[br.dst - 1].branches_in.push_back(br.id);
  }
  for (const auto& cv : grid.converters) {
    if (valid_bus(grid, cv.src)) out[cv.src - 1].converters_out.push_back(cv.id);
    if (valid_bus(grid, cv.dst)) out[cv.dst - 1].converters_in.push_back(cv.id);
  }
  for (const auto& inj : grid.injectors) {
    if (valid_bus(grid, inj.bus)) out[inj.bus - 1].injectors.push_back(inj.id);
  }
  return out;
}

ValidationReport validate(const Grid& grid) {
  Collector out;
  constexpr double half_pi = std::numbers::pi / 2.0;

  if (!(grid.base_mva > 0.0)) {
    out.add("grid.base_power", "grid", "base power must be positive");
  }

  for (std::size_t i = 0; i < grid.buses.size(); ++i) {
    const auto& bus = grid.buses[i];
    const auto who = entity("bus", bus.id);
    if (bus.id != static_cast<int>(i + 1)) {
      out.add("bus.id", who, "bus ids must be 1..N in order (found at position " +
                                 std::to_string(i + 1) + ")");
    }
    if (!(bus.v_min > 0.0 && bus.v_min < bus.v_max)) {
      out.add("bus.voltage_bounds", who, "voltage bounds must satisfy 0 < v_min < v_max");
    }
    if (bus.kind == BusKind::dc && bus.shunt != Complex{}) {
      out.add("bus.dc_shunt", who, "DC bus shunt admittance must be zero");
    }
    if (bus.kind == BusKind::dc && bus.load.imag() != 0.0) {
      out.add("bus.dc_reactive_load", who, "DC bus load must be purely active");
    }
  }

  for (std::size_t k = 0; k < grid.branches.size(); ++k) {
    const auto& br = grid.branches[k];
    const auto who = entity("branch", br.id);
    if (br.id != static_cast<int>(k + 1)) {
      out.add("branch.id", who, "branch ids must be 1..E in order");
    }
    if (!valid_bus(grid, br.src) || !valid_bus(grid, br.dst)) {
      out.add("branch.endpoint", who, "branch references a nonexistent bus");
      continue;
    }
    if (br.src == br.dst) {
      out.add("branch.self_loop", who, "branch source and destination coincide");
    }
    if (grid.is_dc(br.src) != grid.is_dc(br.dst)) {
      out.add("branch.mixed_kind", who, "branch connects an AC and a DC bus");
      continue;
    }
    if (br.rho_src == Complex{} || br.rho_dst == Complex{}) {
      out.add("branch.zero_ratio", who, "voltage ratios must be nonzero");
    }
    if (!(br.i_max_src > 0.0 && br.i_max_dst > 0.0)) {
      out.add("branch.ampacity", who, "ampacity limits must be positive");
    }
    if (grid.is_dc(br.src)) {
      if (br.y_series.imag() != 0.0) {
        out.add("branch.dc_series_real", who, "DC branch series admittance must be real");
      }
      if (br.rho_src != Complex{1.0, 0.0} || br.rho_dst != Complex{1.0, 0.0}) {
        out.add("branch.dc_ratio", who, "DC branch voltage ratios must be 1");
      }
      if (br.y_src != Complex{} || br.y_dst != Complex{}) {
        out.add("branch.dc_shunt", who, "DC branch shunt admittances must be zero");
      }
      if (!(br.y_series.real() > 0.0)) {
        out.add("branch.dc_lossless", who, "DC branch series conductance must be positive");
      }
    } else {
      if (!(br.drop_min >= -1.0 && br.drop_min < br.drop_max)) {
        out.add("branch.drop_bounds", who, "voltage drop bounds must satisfy -1 <= lb < ub");
      }
      if (!(br.angle_min > -half_pi && br.angle_min < br.angle_max && br.angle_max < half_pi)) {
        out.add("branch.angle_bounds", who,
                "angle bounds must satisfy -pi/2 < lb < ub < pi/2");
      }
    }
  }

  for (std::size_t l = 0; l < grid.converters.size(); ++l) {
    const auto& cv = grid.converters[l];
    const auto who = entity("converter", cv.id);
    if (cv.id != static_cast<int>(l + 1)) {
      out.add("converter.id", who, "converter ids must be 1..C in order");
    }
    if (!valid_bus(grid, cv.src) || !valid_bus(grid, cv.dst)) {
      out.add("converter.endpoint", who, "converter references a nonexistent bus");
      continue;
    }
    if (cv.src == cv.dst) {
      out.add("converter.self_loop", who, "converter source and destination coincide");
    }
    if (!(cv.loss_fwd >= 0.0 && cv.loss_fwd < 1.0 && cv.loss_bwd >= 0.0 && cv.loss_bwd < 1.0)) {
      out.add("converter.loss_factor", who, "loss factors must lie in [0, 1)");
    }
    if (!(cv.static_loss >= 0.0)) {
      out.add("converter.static_loss", who, "static loss must be nonnegative");
    }
    check_polygon(out, cv.cap_src, who, "source capability", true);
    check_polygon(out, cv.cap_dst, who, "destination capability", true);
  }

  for (std::size_t j = 0; j < grid.injectors.size(); ++j) {
    const auto& inj = grid.injectors[j];
    const auto who = entity("injector", inj.id);
    if (inj.id != static_cast<int>(j + 1)) {
      out.add("injector.id", who, "injector ids must be 1..I in order");
    }
    if (!valid_bus(grid, inj.bus)) {
      out.add("injector.endpoint", who, "injector references a nonexistent bus");
      continue;
    }
    check_polygon(out, inj.capability, who, "capability", true);
    if (grid.is_dc(inj.bus)) {
      auto active_only = inj.capability;
      active_only.push_back({0.0, 1.0, 0.0});
      active_only.push_back({0.0, -1.0, 0.0});
      const auto ext = polygon_extent(active_only);
      if (ext.bounded && ext.empty) {
        out.add("injector.dc_reactive", who,
                "DC injector capability admits no purely active operating point");
      }
    }
    if (!inj.cost_p.is_convex()) {
      out.add("injector.cost_convexity", who, "active power cost is not convex");
    }
    if (!inj.cost_q.is_convex()) {
      out.add("injector.cost_convexity", who, "reactive power cost is not convex");
    }
  }

  auto& report = out.report();
  std::vector<bool> dc_mask(grid.buses.size());
  for (std::size_t n = 0; n < grid.buses.size(); ++n) {
    dc_mask[n] = grid.buses[n].kind == BusKind::dc;
  }
  report.dc_radial = is_forest(adjacency(grid, true), dc_mask);
  report.hybrid_architecture =
      is_forest(adjacency(grid, false), std::vector<bool>(grid.buses.size(), true));
  report.subgrids = subgrids(grid);
  if (!report.dc_radial) {
    out.add("topology.dc_radial", "grid", "radial DC subgrid required");
  }
  return report;
}

}  // namespace hyopf
