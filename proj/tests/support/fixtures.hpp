#pragma once

#include <random>
#include <string>

#include "hyopf/grid.hpp"

namespace hyopf::testing {

/// Fluent construction of small grids for tests.
class GridBuilder {
 public:
  int bus(BusKind kind = BusKind::ac, Complex load = {}, double v_min = 0.95,
          double v_max = 1.05, Complex shunt = {});
  int line(int src, int dst, Complex z, double b = 0.0, double i_max = 2.0);
  int cable(int src, int dst, double r, double i_max = 2.0);
  int converter(int src, int dst, double rating, double loss = 0.02, double q = 0.5,
                double static_loss = 0.0);
  int gen(int bus, double p_min, double p_max, double q_min, double q_max, PwlCost cost_p,
          PwlCost cost_q = {});

  Branch& branch(int id) { return grid_.branches.at(static_cast<std::size_t>(id - 1)); }
  Grid& grid() { return grid_; }
  Grid build() const { return grid_; }

 private:
  Grid grid_;
};

/// Linear cost through the origin.
PwlCost linear_cost(double slope, double lo = -10.0, double hi = 10.0);

/// Path to a bundled file under data/.
std::string data_path(const std::string& relative);
Grid load_case(const std::string& name);

struct RandomGridOptions {
  int min_buses = 2;
  int max_buses = 6;
  bool allow_dc = true;
  bool allow_mesh = true;
  bool allow_parallel = true;
  bool allow_converters = true;
};

/// Random valid grid whose OPF is feasible: every AC subgrid has a generator
/// sized well above its load, limits are loose.
Grid random_grid(std::mt19937_64& rng, const RandomGridOptions& options = {});

}  // namespace hyopf::testing
